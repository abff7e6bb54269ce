"""Hypothesis diagram whose nodes are named by access strings.

Edges carry bit-string labels whose length equals the level gap between the
two endpoints.  The root has the empty id; while it is a dummy it owns exactly
one outgoing edge that is followed unconditionally.

An edge is identified by its source and the first bit of its label, so two
edges of one node may share a target (the hypothesis can temporarily point
both branches of a node at the same place until a later split separates
them).
"""

from __future__ import annotations

from .core import Omtbdd

LAMBDA = ""


class StructureError(RuntimeError):
    """An edit would break a structural invariant of the hypothesis."""


def show(ident: str) -> str:
    return ident if ident else "λ"


class Omtbddas:
    def __init__(self, m: int, dummy: bool = True):
        self.m = m
        self.dummy = dummy
        self.internal: set[str] = {LAMBDA}
        self.sinks: dict[str, int] = {}
        # out[u][first bit] = (target id, label)
        self.out: dict[str, dict[str, tuple[str, str]]] = {LAMBDA: {}}
        # inc[v][(u, first bit)] = label
        self.inc: dict[str, dict[tuple[str, str], str]] = {LAMBDA: {}}

    # -- queries ---------------------------------------------------------

    def __contains__(self, ident: str) -> bool:
        return ident in self.internal or ident in self.sinks

    @property
    def node_count(self) -> int:
        """Number of ids in the node id set (the dummy root is not counted)."""
        return len(self.internal) + len(self.sinks) - (1 if self.dummy else 0)

    def ids(self) -> list[str]:
        out = sorted(self.internal | set(self.sinks), key=lambda s: (len(s), s))
        if self.dummy:
            out.remove(LAMBDA)
        return out

    def label(self, u: str, bit: str) -> str:
        return self.successor(u, bit)[1]

    def bit_at(self, u: str, e: str) -> str:
        """First bit of the edge that ``e`` takes out of ``u``."""
        if u == LAMBDA and self.dummy:
            (bit,) = self.out[LAMBDA]
            return bit
        return e[len(u)]

    def edges(self):
        """Yield ``(u, v, label)`` for every edge, sources in id order."""
        for u in sorted(self.out, key=lambda s: (len(s), s)):
            for bit in sorted(self.out[u]):
                v, lab = self.out[u][bit]
                yield u, v, lab

    def incoming(self, v: str) -> list[tuple[str, str]]:
        """``(source, label)`` for every edge entering ``v``, in insertion order."""
        return [(u, lab) for (u, _), lab in self.inc[v].items()]

    def successor(self, u: str, bit: str) -> tuple[str, str]:
        try:
            return self.out[u][bit]
        except KeyError:
            raise StructureError(f"node {show(u)} has no edge starting with {bit}") from None

    # -- edits -----------------------------------------------------------

    def add_node(self, ident: str) -> None:
        if ident in self:
            raise StructureError(f"duplicate node id {show(ident)}")
        if len(ident) >= self.m:
            raise StructureError(f"internal node id {show(ident)} must be shorter than m={self.m}")
        self.internal.add(ident)
        self.out[ident] = {}
        self.inc[ident] = {}

    def add_sink(self, ident: str, value: int) -> None:
        if ident in self:
            raise StructureError(f"duplicate node id {show(ident)}")
        if len(ident) != self.m:
            raise StructureError(f"sink id {show(ident)} must have length m={self.m}")
        self.sinks[ident] = value
        self.inc[ident] = {}

    def add_edge(self, u: str, v: str, label: str) -> None:
        if u not in self.internal:
            raise StructureError(f"edge source {show(u)} is not an internal node")
        if v not in self:
            raise StructureError(f"edge target {show(v)} is not a node")
        if len(label) != len(v) - len(u) or not label:
            raise StructureError(
                f"label {label!r} on ({show(u)},{show(v)}) must have length {len(v) - len(u)}")
        outs = self.out[u]
        if u == LAMBDA and self.dummy and outs:
            raise StructureError("a dummy root has exactly one outgoing edge")
        if label[0] in outs:
            raise StructureError(f"node {show(u)} already has an edge starting with {label[0]}")
        outs[label[0]] = (v, label)
        self.inc[v][u, label[0]] = label

    def remove_edge(self, u: str, bit: str) -> tuple[str, str]:
        """Remove the edge leaving ``u`` whose label starts with ``bit``; return ``(target, label)``."""
        try:
            v, label = self.out[u].pop(bit)
        except KeyError:
            raise StructureError(f"node {show(u)} has no edge starting with {bit}") from None
        del self.inc[v][u, bit]
        return v, label

    def promote_root(self) -> None:
        if not self.dummy:
            raise StructureError("root is already a real node")
        self.dummy = False

    # -- walking ---------------------------------------------------------

    def trace_path(self, e: str) -> list[str]:
        """Ids of the nodes passed by ``e``, starting at the root and ending at a sink."""
        if len(e) != self.m:
            raise ValueError(f"input has length {len(e)}, expected {self.m}")
        u = LAMBDA
        path = [u]
        if self.dummy:
            ((u, _),) = self.out[LAMBDA].values()
            path.append(u)
        out, sinks = self.out, self.sinks
        while u not in sinks:
            u = out[u][e[len(u)]][0]
            path.append(u)
        return path

    def __call__(self, e: str) -> int:
        """Value of the reached sink; needs no queries."""
        if len(e) != self.m:
            raise ValueError(f"input has length {len(e)}, expected {self.m}")
        u = LAMBDA
        out, sinks = self.out, self.sinks
        if self.dummy:
            ((u, _),) = out[LAMBDA].values()
        while u not in sinks:
            u = out[u][e[len(u)]][0]
        return sinks[u]

    # -- export ----------------------------------------------------------

    def to_omtbdd(self, k: int | None = None) -> Omtbdd:
        """Drop the dummy root and keep only the first bit of every label."""
        ids = self.ids()
        index = {v: i for i, v in enumerate(ids)}
        m = self.m
        var, lo, hi, value = [], [], [], []
        for v in ids:
            if v in self.sinks:
                var.append(m + 1), lo.append(-1), hi.append(-1), value.append(self.sinks[v])
                continue
            outs = self.out[v]
            if set(outs) != {"0", "1"}:
                raise StructureError(f"node {show(v)} does not have both outgoing edges")
            var.append(len(v) + 1)
            lo.append(index[outs["0"][0]])
            hi.append(index[outs["1"][0]])
            value.append(-1)
        if self.dummy:
            ((root, _),) = self.out[LAMBDA].values()
        else:
            root = LAMBDA
        kk = max([k or 0] + [x + 1 for x in self.sinks.values()])
        return Omtbdd(m, kk, index[root], var, lo, hi, value)

    def dump(self) -> str:
        lines = [f"omtbddas m={self.m} dummy={int(self.dummy)} root={show(LAMBDA)}"]
        for v in sorted(self.internal, key=lambda s: (len(s), s)):
            if v == LAMBDA and self.dummy:
                lines.append(f"dummy id={show(v)}")
            else:
                lines.append(f"node id={show(v)} var={len(v) + 1}")
        for v in sorted(self.sinks, key=lambda s: (len(s), s)):
            lines.append(f"sink id={show(v)} value={self.sinks[v]}")
        for u, v, lab in self.edges():
            lines.append(f"edge {show(u)} {show(v)} label={lab}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        lines = ["digraph omtbddas {"]
        names = {}
        for i, v in enumerate(sorted(self.internal | set(self.sinks), key=lambda s: (len(s), s))):
            names[v] = f"n{i}"
            if v in self.sinks:
                lines.append(f'  n{i} [shape=box, label="{self.sinks[v]}\\n{show(v)}"];')
            elif v == LAMBDA and self.dummy:
                lines.append(f'  n{i} [shape=point, label=""];')
            else:
                lines.append(f'  n{i} [label="x{len(v) + 1}\\n{show(v)}"];')
        for u, v, lab in self.edges():
            lines.append(f'  {names[u]} -> {names[v]} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
