"""Brute-force references that share no code with the library's walkers."""

from itertools import product

from hypothesis import strategies as st

from qlomtbdd.core import Omtbdd


def all_strings(length: int) -> list[str]:
    return ["".join(p) for p in product("01", repeat=length)]


def path_table(d: Omtbdd) -> dict[str, int]:
    """Truth table built by enumerating every root-to-sink path and expanding don't-cares."""
    table: dict[str, int] = {}

    def walk(i: int, fixed: dict[int, str]) -> None:
        if d.var[i] == d.m + 1:
            free = [v for v in range(1, d.m + 1) if v not in fixed]
            for bits in product("01", repeat=len(free)):
                full = {**fixed, **dict(zip(free, bits))}
                key = "".join(full[v] for v in range(1, d.m + 1))
                assert key not in table
                table[key] = d.value[i]
            return
        v = d.var[i]
        walk(d.lo[i], {**fixed, v: "0"})
        walk(d.hi[i], {**fixed, v: "1"})

    walk(d.root, {})
    assert len(table) == 2 ** d.m
    return table


def residual(table: dict[str, int], prefix: str, m: int) -> tuple[int, ...]:
    return tuple(table[prefix + s] for s in all_strings(m - len(prefix)))


def table_fn(table: dict[str, int]):
    return table.__getitem__


@st.composite
def diagrams(draw, max_m: int = 6, max_k: int = 4, max_inner: int = 14, min_m: int = 1):
    """Arbitrary order-respecting diagrams, reduced or not, possibly with unreachable nodes."""
    m = draw(st.integers(min_m, max_m))
    k = draw(st.integers(1, max_k))
    sinks = draw(st.lists(st.integers(0, k - 1), min_size=1, max_size=k + 1))
    var = [m + 1] * len(sinks)
    lo = [-1] * len(sinks)
    hi = [-1] * len(sinks)
    value = list(sinks)
    for _ in range(draw(st.integers(0, max_inner))):
        v = draw(st.integers(1, m))
        deeper = [i for i in range(len(var)) if var[i] > v]
        var.append(v)
        lo.append(draw(st.sampled_from(deeper)))
        hi.append(draw(st.sampled_from(deeper)))
        value.append(-1)
    root = draw(st.integers(0, len(var) - 1))
    return Omtbdd(m, k, root, var, lo, hi, value)
