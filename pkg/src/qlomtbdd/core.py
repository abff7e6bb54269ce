"""Bit strings and the immutable ordered multi-terminal BDD.

Bit strings are plain ``str`` objects over ``'0'``/``'1'``; the empty string
is the null string.  Variables are numbered ``1..m`` and tested in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping

from . import kernels

__all__ = [
    "pre",
    "suf",
    "cro",
    "flip_first",
    "Omtbdd",
    "EqResult",
    "FormatError",
    "evaluate",
    "trace_to_node",
    "reduce",
    "equivalent",
    "encode",
    "decode",
    "export_dot",
    "constant",
    "from_function",
]


def pre(a: str, i: int) -> str:
    """Prefix of length ``i``."""
    if not 0 <= i <= len(a):
        raise ValueError(f"prefix length {i} out of range for |a|={len(a)}")
    return a[:i]


def suf(a: str, i: int) -> str:
    """Suffix of length ``i``."""
    if not 0 <= i <= len(a):
        raise ValueError(f"suffix length {i} out of range for |a|={len(a)}")
    return a[len(a) - i:]


def cro(a: str, b: str, j: int) -> str:
    """Crossover ``pre(a, |a|-j) + suf(b, j)`` for equal-length ``a`` and ``b``.

    ``j`` may be ``0`` (gives ``a``) or ``|a|`` (gives ``b``).
    """
    if len(a) != len(b):
        raise ValueError(f"cro needs equal lengths, got {len(a)} and {len(b)}")
    if not 0 <= j <= len(a):
        raise ValueError(f"crossover point {j} out of range for length {len(a)}")
    return a[:len(a) - j] + b[len(b) - j:]


def flip_first(a: str) -> str:
    if not a:
        raise ValueError("cannot flip the first bit of the empty string")
    return ("1" if a[0] == "0" else "0") + a[1:]


class FormatError(ValueError):
    """Malformed diagram or classifier document."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class EqResult:
    equal: bool
    counterexample: str | None = None

    @property
    def verdict(self) -> str:
        return "YES" if self.equal else "NO"

    def __bool__(self) -> bool:
        return self.equal


class Omtbdd:
    """Immutable ordered MTBDD stored as parallel arrays indexed by node id.

    Node ``i`` is a sink iff ``var[i] == m + 1``; then ``value[i]`` holds its
    value and ``lo[i] == hi[i] == -1``.  Internal nodes have ``value[i] == -1``.
    Equality is structural over ``(m, root, var, lo, hi, value)``; ``k`` is
    carried along but does not take part in comparisons.
    """

    __slots__ = ("m", "k", "root", "var", "lo", "hi", "value", "_flat")

    def __init__(self, m: int, k: int, root: int, var, lo, hi, value):
        self.m = m
        self.k = k
        self.root = root
        self.var = tuple(var)
        self.lo = tuple(lo)
        self.hi = tuple(hi)
        self.value = tuple(value)
        self._flat = None
        self._validate()

    def _validate(self) -> None:
        m, n = self.m, len(self.var)
        if m < 0:
            raise ValueError("m must be non-negative")
        if not (len(self.lo) == len(self.hi) == len(self.value) == n):
            raise ValueError("node arrays have different lengths")
        if not 0 <= self.root < n:
            raise ValueError(f"root {self.root} is not a node")
        for i in range(n):
            v = self.var[i]
            if v == m + 1:
                if not 0 <= self.value[i] < self.k:
                    raise ValueError(f"sink {i} value {self.value[i]} outside 0..{self.k - 1}")
                continue
            if not 1 <= v <= m:
                raise ValueError(f"node {i} tests variable {v} outside 1..{m}")
            for c in (self.lo[i], self.hi[i]):
                if not 0 <= c < n:
                    raise ValueError(f"node {i} has dangling child {c}")
                if self.var[c] <= v:
                    raise ValueError(f"edge {i}->{c} violates the variable order")

    @classmethod
    def from_spec(cls, m: int, k: int, root: Hashable,
                  nodes: Mapping[Hashable, int | tuple[int, Hashable, Hashable]]) -> "Omtbdd":
        """Build from ``{key: value}`` for sinks and ``{key: (var, lo, hi)}`` otherwise.

        >>> d = Omtbdd.from_spec(2, 3, "a", {"a": (1, "s0", "b"), "b": (2, "s1", "s2"),
        ...                                  "s0": 0, "s1": 1, "s2": 2})
        >>> [evaluate(d, x) for x in ("00", "10", "11")]
        [0, 1, 2]
        """
        keys = list(nodes)
        index = {key: i for i, key in enumerate(keys)}
        var, lo, hi, value = [], [], [], []
        for key in keys:
            spec = nodes[key]
            if isinstance(spec, tuple):
                v, c0, c1 = spec
                try:
                    var.append(v), lo.append(index[c0]), hi.append(index[c1]), value.append(-1)
                except KeyError as exc:
                    raise ValueError(f"node {key!r} refers to unknown child {exc.args[0]!r}") from None
            else:
                var.append(m + 1), lo.append(-1), hi.append(-1), value.append(int(spec))
        if root not in index:
            raise ValueError(f"unknown root {root!r}")
        return cls(m, k, index[root], var, lo, hi, value)

    def __len__(self) -> int:
        return len(self.var)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Omtbdd):
            return NotImplemented
        return (self.m, self.root, self.var, self.lo, self.hi, self.value) == (
            other.m, other.root, other.var, other.lo, other.hi, other.value)

    def __hash__(self) -> int:
        return hash((self.m, self.root, self.var, self.lo, self.hi, self.value))

    def __repr__(self) -> str:
        return f"Omtbdd(m={self.m}, k={self.k}, nodes={len(self)}, sinks={self.sink_count})"

    def is_sink(self, i: int) -> bool:
        return self.var[i] == self.m + 1

    @property
    def sink_count(self) -> int:
        return sum(1 for v in self.var if v == self.m + 1)

    @property
    def is_constant(self) -> bool:
        return self.is_sink(self.root)

    def flat(self):
        """Typed arrays consumed by the evaluation kernels (built once)."""
        if self._flat is None:
            self._flat = kernels.flatten(self.var, self.lo, self.hi, self.value)
        return self._flat

    def __call__(self, a: str) -> int:
        return evaluate(self, a)

    def reachable(self) -> list[int]:
        seen = {self.root}
        stack = [self.root]
        while stack:
            i = stack.pop()
            if self.var[i] <= self.m:
                for c in (self.lo[i], self.hi[i]):
                    if c not in seen:
                        seen.add(c)
                        stack.append(c)
        return sorted(seen)


def constant(m: int, value: int, k: int | None = None) -> Omtbdd:
    """Single-sink diagram."""
    return Omtbdd(m, max(k or 0, value + 1), 0, [m + 1], [-1], [-1], [value])


def from_function(m: int, fn: Callable[[str], int], k: int | None = None) -> Omtbdd:
    """Complete (unreduced) decision tree of ``fn`` over all ``2**m`` inputs."""
    var, lo, hi, value = [], [], [], []

    def build(prefix: str) -> int:
        i = len(var)
        if len(prefix) == m:
            var.append(m + 1), lo.append(-1), hi.append(-1), value.append(fn(prefix))
            return i
        var.append(len(prefix) + 1), lo.append(-1), hi.append(-1), value.append(-1)
        lo[i] = build(prefix + "0")
        hi[i] = build(prefix + "1")
        return i

    build("")
    kk = max(max(value) + 1, k or 0)
    return Omtbdd(m, kk, 0, var, lo, hi, value)


def evaluate(d: Omtbdd, a: str) -> int:
    """Value of ``d`` at the full assignment ``a``; skipped variables are don't-cares."""
    if len(a) != d.m:
        raise ValueError(f"input has length {len(a)}, expected {d.m}")
    return kernels.evaluate(d.flat(), d.root, a)


def trace_to_node(d: Omtbdd, a: str) -> int | None:
    """Node for which ``a`` is an access string, or ``None``.

    A string of length ``L`` reaches node ``N`` exactly when the walk lands on
    ``N`` and ``N`` tests ``x_{L+1}`` (or ``N`` is a sink and ``L == m``).
    Strings ending strictly inside a variable-skipping edge reach nothing.
    """
    if len(a) > d.m:
        return None
    r = kernels.trace(d.flat(), d.root, a)
    return None if r < 0 else r


def reduce(d: Omtbdd) -> Omtbdd:
    """Canonical reduced form with deterministic (preorder, lo-first) numbering."""
    m = d.m
    order = sorted(d.reachable(), key=lambda i: -d.var[i])
    table: dict[tuple, int] = {}
    rep: dict[int, int] = {}
    # provisional arrays for unique nodes
    var, lo, hi, value = [], [], [], []
    for i in order:
        if d.var[i] == m + 1:
            key = ("s", d.value[i])
        else:
            c0, c1 = rep[d.lo[i]], rep[d.hi[i]]
            if c0 == c1:
                rep[i] = c0
                continue
            key = (d.var[i], c0, c1)
        u = table.get(key)
        if u is None:
            u = table[key] = len(var)
            if key[0] == "s":
                var.append(m + 1), lo.append(-1), hi.append(-1), value.append(key[1])
            else:
                var.append(key[0]), lo.append(key[1]), hi.append(key[2]), value.append(-1)
        rep[i] = u
    return _renumber(m, d.k, rep[d.root], var, lo, hi, value)


def _renumber(m, k, root, var, lo, hi, value) -> Omtbdd:
    new = {}
    order = []
    stack = [root]
    while stack:
        i = stack.pop()
        if i in new:
            continue
        new[i] = len(order)
        order.append(i)
        if var[i] <= m:
            stack.append(hi[i])
            stack.append(lo[i])
    return Omtbdd(
        m, k, 0,
        [var[i] for i in order],
        [new[lo[i]] if lo[i] >= 0 else -1 for i in order],
        [new[hi[i]] if hi[i] >= 0 else -1 for i in order],
        [value[i] for i in order],
    )


def equivalent(d1: Omtbdd, d2: Omtbdd) -> EqResult:
    """Exact equivalence by a memoized product walk.

    On disagreement the counterexample fixes every tested variable along the
    distinguishing product path and sets all other variables to 0.
    """
    if d1.m != d2.m:
        raise ValueError(f"variable counts differ: {d1.m} vs {d2.m}")
    m = d1.m
    var1, lo1, hi1, val1 = d1.var, d1.lo, d1.hi, d1.value
    var2, lo2, hi2, val2 = d2.var, d2.lo, d2.hi, d2.value
    start = (d1.root, d2.root)
    parent: dict[tuple[int, int], tuple | None] = {start: None}
    stack = [start]
    while stack:
        u, v = pair = stack.pop()
        vu, vv = var1[u], var2[v]
        if vu > m and vv > m:
            if val1[u] != val2[v]:
                return EqResult(False, _path_bits(m, parent, pair))
            continue
        top = vu if vu < vv else vv
        for bit in (1, 0):
            cu = (hi1[u] if bit else lo1[u]) if vu == top else u
            cv = (hi2[v] if bit else lo2[v]) if vv == top else v
            child = (cu, cv)
            if child not in parent:
                parent[child] = (pair, top, bit)
                stack.append(child)
    return EqResult(True)


def _path_bits(m, parent, pair) -> str:
    bits = ["0"] * m
    link = parent[pair]
    while link is not None:
        pair, top, bit = link
        bits[top - 1] = "1" if bit else "0"
        link = parent[pair]
    return "".join(bits)


def encode(d: Omtbdd, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"omtbdd m={d.m} k={d.k} root={d.root}")
    for i in range(len(d)):
        if d.is_sink(i):
            lines.append(f"sink {i} value={d.value[i]}")
        else:
            lines.append(f"node {i} var={d.var[i]} lo={d.lo[i]} hi={d.hi[i]}")
    return "\n".join(lines) + "\n"


def _fields(tokens: list[str], names: Iterable[str], lineno: int) -> dict[str, int]:
    out = {}
    for tok, name in zip(tokens, names):
        key, sep, val = tok.partition("=")
        if key != name or not sep:
            raise FormatError(f"expected {name}=<int>, got {tok!r}", lineno)
        try:
            out[name] = int(val)
        except ValueError:
            raise FormatError(f"{name} is not an integer: {val!r}", lineno) from None
    return out


def decode(text: str) -> Omtbdd:
    header = None
    nodes: dict[int, int | tuple[int, int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        kind = tokens[0]
        if header is None:
            if kind != "omtbdd" or len(tokens) != 4:
                raise FormatError("expected header 'omtbdd m=<int> k=<int> root=<id>'", lineno)
            header = _fields(tokens[1:], ("m", "k", "root"), lineno)
            continue
        if kind == "node" and len(tokens) == 5:
            f = _fields(tokens[2:], ("var", "lo", "hi"), lineno)
            spec: int | tuple[int, int, int] = (f["var"], f["lo"], f["hi"])
        elif kind == "sink" and len(tokens) == 3:
            spec = _fields(tokens[2:], ("value",), lineno)["value"]
        else:
            raise FormatError(f"unrecognised line {line!r}", lineno)
        try:
            ident = int(tokens[1])
        except ValueError:
            raise FormatError(f"node id is not an integer: {tokens[1]!r}", lineno) from None
        if ident in nodes:
            raise FormatError(f"duplicate node id {ident}", lineno)
        nodes[ident] = spec
    if header is None:
        raise FormatError("missing header line")
    try:
        return Omtbdd.from_spec(header["m"], header["k"], header["root"], nodes)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def export_dot(d: Omtbdd, name: str = "omtbdd") -> str:
    lines = [f"digraph {name} {{"]
    for i in range(len(d)):
        if d.is_sink(i):
            lines.append(f'  n{i} [shape=box, label="{d.value[i]}"];')
        else:
            lines.append(f'  n{i} [shape=circle, label="x{d.var[i]}"];')
    for i in range(len(d)):
        if not d.is_sink(i):
            lines.append(f"  n{i} -> n{d.lo[i]} [style=dashed, label=\"0\"];")
            lines.append(f"  n{i} -> n{d.hi[i]} [label=\"1\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
