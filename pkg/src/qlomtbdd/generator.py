"""Random reduced OMTBDDs with an exact node count."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Omtbdd, reduce


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenParams:
    n: int
    m: int
    k: int
    seed: int = 0
    max_rounds: int = 10_000
    max_reselect: int = 64

    def validate(self) -> None:
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.n < self.k + 1:
            raise ValueError(f"n={self.n} is too small for k={self.k} sinks (need n >= k + 1)")
        cap = max_nodes(self.m, self.k)
        if self.n > cap:
            raise ValueError(f"no reduced diagram over m={self.m} variables with k={self.k} sinks has "
                             f"{self.n} nodes (at most {cap})")

    def comment(self) -> str:
        return f"generated n={self.n} m={self.m} k={self.k} seed={self.seed}"


def max_nodes(m: int, k: int) -> int:
    """Upper bound on the size of a reduced diagram, counted level by level from the sinks."""
    below = min(k, 1 << m) if m < 62 else k
    for level in range(m, 0, -1):
        below += min(1 << (level - 1), below * (below - 1))
        if below > 1 << 62:
            break
    return below


def _draft(rng: random.Random, total: int, p: GenParams) -> Omtbdd:
    """One unreduced candidate with ``total`` nodes before deletions."""
    m, k = p.m, p.k
    inner = total - k
    var = sorted(rng.randint(1, m) for _ in range(inner)) + [m + 1] * k
    # nvar[j]: first index whose variable is strictly larger than var[j]
    nvar = [0] * total
    nxt = inner
    for j in range(inner - 1, -1, -1):
        if j + 1 < inner and var[j + 1] > var[j]:
            nxt = j + 1
        nvar[j] = nxt
    for h in range(inner, total):
        nvar[h] = total
    has_in = [False] * total
    lo = [-1] * total
    hi = [-1] * total
    alive = [True] * total
    for j in range(inner):
        if j > 0 and not has_in[j]:
            alive[j] = False
            continue
        first = rng.randint(0, 1)
        band_lo, band_hi = nvar[j], nvar[nvar[j]]
        while True:
            chosen, marked = [], []
            for _ in range(2):
                if not all(has_in[band_lo:band_hi]):
                    h = rng.randrange(band_lo, min(band_hi + 1, total))
                else:
                    h = rng.randrange(band_lo, total)
                    tries = 0
                    # a single candidate cannot be avoided; the redundant test is reduced away
                    while chosen and h == chosen[0] and total - band_lo > 1 and tries < p.max_reselect:
                        tries += 1
                        h = rng.randrange(band_lo, total)
                    if chosen and h == chosen[0] and total - band_lo > 1:
                        break
                chosen.append(h)
                if not has_in[h]:
                    has_in[h] = True
                    marked.append(h)
            if len(chosen) == 2:
                break
            # reselection kept colliding: undo and wire this node again
            for h in marked:
                has_in[h] = False
        a, b = chosen
        if first == 0:
            lo[j], hi[j] = a, b
        else:
            lo[j], hi[j] = b, a
    values = rng.sample(range(k), k)
    keep = [i for i in range(total) if alive[i]]
    index = {i: x for x, i in enumerate(keep)}
    return Omtbdd(
        m, k, 0,
        [var[i] for i in keep],
        [index[lo[i]] if lo[i] >= 0 else -1 for i in keep],
        [index[hi[i]] if hi[i] >= 0 else -1 for i in keep],
        [values[i - inner] if i >= inner else -1 for i in keep],
    )


def generate(p: GenParams) -> Omtbdd:
    """Reduced diagram with exactly ``p.n`` nodes, at most ``p.k`` sinks, deterministic in the seed."""
    p.validate()
    rng = random.Random(p.seed)
    n = p.n
    total = got = n
    for _ in range(p.max_rounds):
        total = min(max(total + (n - got), p.k + 1), 4 * n)
        d = reduce(_draft(rng, total, p))
        got = len(d)
        if got == n:
            return d
    raise GenerationError(
        f"no diagram with {n} nodes after {p.max_rounds} rounds (m={p.m}, k={p.k}, seed={p.seed}, "
        f"last size {got} from {total} drafted nodes)")
