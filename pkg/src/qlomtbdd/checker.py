"""White-box verification of a learner state against a known target.

Checks node, classification-tree and edge conditions.  Membership queries made
here go straight to the target and are not counted anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import kernels
from .core import Omtbdd, reduce, trace_to_node
from .ctree import LEAF, MU
from .omtbddas import LAMBDA, show


@dataclass
class ConditionReport:
    violations: list[str] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)
    exhaustive: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def _count(self, name: str) -> None:
        self.checked[name] = self.checked.get(name, 0) + 1


class ConditionChecker:
    """Reusable checker for one target.

    ``exhaustive_limit`` bounds ``m`` for the enumeration of non-access strings;
    above it that check is skipped and the report says so.
    """

    def __init__(self, target: Omtbdd, exhaustive_limit: int = 12):
        self.target = reduce(target)
        m = self.m = target.m
        flat, root = self.target.flat(), self.target.root
        self._mq = lambda a: kernels.evaluate(flat, root, a)
        self.exhaustive = m <= exhaustive_limit
        self.non_access: dict[int, list[str]] = {}
        if self.exhaustive:
            for level in range(1, m):
                self.non_access[level] = [
                    a for a in map("".join, product("01", repeat=level))
                    if kernels.trace(flat, root, a) < 0]

    def node_of(self, a: str) -> int | None:
        return trace_to_node(self.target, a)

    def check(self, learner) -> ConditionReport:
        s, trees, mq = learner.s, learner.trees, self._mq
        rep = ConditionReport(exhaustive=self.exhaustive)
        bad = rep.violations.append
        ids = s.ids()
        owners: dict[int, str] = {}
        for v in ids:
            rep._count("CN1")
            node = self.node_of(v)
            if node is None:
                bad(f"CN1: {show(v)} is not an access string")
                continue
            if v in s.sinks:
                rep._count("CN2")
                want = mq(v)
                if s.sinks[v] != want:
                    bad(f"CN2: sink {v} stores {s.sinks[v]}, target gives {want}")
            rep._count("CN3")
            if node in owners:
                bad(f"CN3: {show(owners[node])} and {show(v)} reach the same target node")
            owners[node] = v
        for v in ids:
            if not v:
                continue
            rep._count("CT1")
            out = trees[len(v)].classify(v, mq)
            if out.kind != LEAF or out.leaf != v:
                bad(f"CT1: T_{len(v)} classifies {show(v)} as {out!r}")
        for level, strings in self.non_access.items():
            tree = trees[level]
            if tree.trivial:
                continue
            for a in strings:
                rep._count("CT2")
                out = tree.classify(a, mq)
                if out.kind != MU:
                    bad(f"CT2: non-access string {a} classified as {out!r}")
        for u, v, lab in s.edges():
            rep._count("CE1")
            out = trees[len(v)].classify(u + lab, mq)
            if out.kind != LEAF or out.leaf != v:
                bad(f"CE1: edge ({show(u)},{show(v)}) label {lab}: T_{len(v)} gives {out!r}")
            for j in range(1, len(lab)):
                rep._count("CE2")
                out = trees[len(u) + j].classify(u + lab[:j], mq)
                if out.kind != MU:
                    bad(f"CE2: edge ({show(u)},{show(v)}) prefix {lab[:j]} gives {out!r}")
        if s.dummy and len(s.out[LAMBDA]) != 1:
            bad("dummy root does not have exactly one edge")
        for u in s.internal:
            if (u != LAMBDA or not s.dummy) and set(s.out[u]) != {"0", "1"}:
                bad(f"node {show(u)} lacks an outgoing edge")
        return rep


def check_conditions(learner, target: Omtbdd, exhaustive_limit: int = 12) -> ConditionReport:
    return ConditionChecker(target, exhaustive_limit).check(learner)
