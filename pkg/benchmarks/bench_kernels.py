"""Compare the compiled and pure-Python walkers, and a full learning run on each.

    python benchmarks/bench_kernels.py [--n 200] [--m 512] [--k 8] [--repeat 3]
"""

import argparse
import importlib
import os
import random
import subprocess
import sys
import timeit

from qlomtbdd import _pykernels
from qlomtbdd.generator import GenParams, generate


def walkers(d, count, seed):
    rng = random.Random(seed)
    inputs = [format(rng.getrandbits(d.m), f"0{d.m}b") for _ in range(count)]
    prefixes = [a[:rng.randrange(d.m + 1)] for a in inputs]
    args = (d.var, d.lo, d.hi, d.value)
    backends = [("python", _pykernels)]
    try:
        backends.append(("cython", importlib.import_module("qlomtbdd._ckernels")))
    except ImportError:
        print("compiled kernels not built; only the pure-Python walker is timed")
    results = {}
    for name, mod in backends:
        flat = mod.flatten(*args)
        ev, tr = mod.evaluate, mod.trace
        t_eval = min(timeit.repeat(lambda: [ev(flat, d.root, a) for a in inputs], number=1, repeat=3))
        t_trace = min(timeit.repeat(lambda: [tr(flat, d.root, a) for a in prefixes], number=1, repeat=3))
        results[name] = (t_eval, t_trace)
        print(f"{name:7s} evaluate {1e9 * t_eval / count:8.0f} ns/call   trace {1e9 * t_trace / count:8.0f} ns/call")
    if len(results) == 2:
        print(f"speedup evaluate x{results['python'][0] / results['cython'][0]:.1f}   "
              f"trace x{results['python'][1] / results['cython'][1]:.1f}")


LEARN = """
import time
from qlomtbdd import kernels
from qlomtbdd.generator import GenParams, generate
from qlomtbdd.oracles import oracles_from_target
from qlomtbdd.learner import QLearner
d = generate(GenParams({n}, {m}, {k}, 1))
best = None
for _ in range({repeat}):
    mq, eq = oracles_from_target(d)
    t = time.perf_counter()
    L = QLearner(d.m, mq, eq)
    L.run()
    dt = time.perf_counter() - t
    best = dt if best is None else min(best, dt)
print(kernels.BACKEND, best, L.mq_count)
"""


def learning(n, m, k, repeat):
    times = {}
    for pure in ("0", "1"):
        env = dict(os.environ, QLOMTBDD_PURE=pure)
        out = subprocess.run([sys.executable, "-c", LEARN.format(n=n, m=m, k=k, repeat=repeat)],
                             env=env, capture_output=True, text=True, check=True).stdout.split()
        backend, secs, mqs = out[0], float(out[1]), int(out[2])
        times[backend] = secs
        print(f"learn n={n} m={m} k={k} [{backend:7s}] {secs:7.3f} s  ({mqs} membership queries)")
    if len(times) == 2:
        print(f"end-to-end speedup x{times['python'] / times['cython']:.2f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--m", type=int, default=512)
    ap.add_argument("--k", type=int, default=8)
    ap.add_argument("--calls", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    d = generate(GenParams(args.n, args.m, args.k, 1))
    walkers(d, args.calls, 0)
    learning(args.n, args.m, args.k, args.repeat)


if __name__ == "__main__":
    main()
