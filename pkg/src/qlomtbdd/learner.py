"""Exact learning of an OMTBDD from membership and equivalence queries.

The learner keeps a hypothesis :class:`~qlomtbdd.omtbddas.Omtbddas` plus one
classification tree per level and refines them with counterexamples until the
equivalence oracle says YES.
"""

from __future__ import annotations

import bisect
from typing import Callable

from .core import EqResult, Omtbdd, constant, cro, flip_first, reduce
from .ctree import (
    LEAF, MU, ClassificationTree, Leaf, MuLeaf, SingleTest, TwinTest, classify_from,
)
from .omtbddas import LAMBDA, Omtbddas, show

NODE_SPLIT = "NodeSplit"
NEW_BRANCHING_NODE = "NewBranchingNode"


class ProtocolError(RuntimeError):
    """The oracles answered inconsistently, or an internal invariant broke."""


class InvariantViolation(AssertionError):
    def __init__(self, report):
        self.report = report
        super().__init__("hypothesis conditions violated:\n" + "\n".join(report.violations))


def ceil_log2(m: int) -> int:
    return (m - 1).bit_length() if m > 1 else 0


def query_bounds(n: int, m: int) -> tuple[int, int]:
    """``(membership bound, equivalence bound)`` for a reduced target with ``n`` nodes."""
    return 2 * n * (ceil_log2(m) + 3 * n), n


def find_flip(g: Callable[[int], bool], lo: int, hi: int, at_lo: bool) -> tuple[int, int]:
    """Adjacent ``(i, i + 1)`` with ``g(i) != g(i + 1)`` by bisection.

    ``at_lo`` is the known value of ``g(lo)``; ``g(hi)`` is assumed to differ.
    Neither endpoint is evaluated, and the returned ``i`` always satisfies
    ``g(i) == at_lo``.  At most ``ceil(log2(hi - lo))`` probes.
    """
    if hi <= lo:
        raise ValueError(f"empty search interval [{lo}, {hi}]")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if g(mid) == at_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


class QLearner:
    """One learning run.  Oracles are owned exclusively by the run.

    ``events`` receives one dict per equivalence query, membership query and
    hypothesis update.  ``invariant_hook`` is called after every update with
    the learner; the white-box condition checker plugs in here.
    """

    def __init__(self, m: int, mq: Callable[[str], int], eq: Callable[[Omtbdd], EqResult],
                 k_hint: int | None = None, addedge_suffix: bool = False,
                 events: Callable[[dict], None] | None = None,
                 log_mq: bool = True,
                 invariant_hook: Callable[["QLearner"], None] | None = None):
        self.m = m
        self._mq = mq
        self._eq = eq
        self.k = k_hint or 0
        self.addedge_suffix = addedge_suffix
        self.events = events
        self.log_mq = log_mq and events is not None
        self.invariant_hook = invariant_hook
        self.mq_count = 0
        self.eq_count = 0
        self.updates = 0
        self.s: Omtbddas | None = None
        self.trees: list[ClassificationTree | None] = [None] + [
            ClassificationTree(j) for j in range(1, m + 1)]
        # levels whose tree is more than a lone μ leaf, ascending
        self.active: list[int] = []
        self.result: Omtbdd | None = None

    # -- queries ---------------------------------------------------------

    def mq(self, a: str) -> int:
        self.mq_count += 1
        value = self._mq(a)
        if self.log_mq:
            self.events({"kind": "mq", "input": a, "value": value})
        return value

    def eq(self, h: Omtbdd) -> EqResult:
        self.eq_count += 1
        res = self._eq(h)
        if self.events is not None:
            self.events({"kind": "eq", "answer": res.verdict, "counterexample": res.counterexample,
                         "nodes": len(h)})
        return res

    def _emit(self, **record) -> None:
        if self.events is not None:
            record.update(mq=self.mq_count, eq=self.eq_count)
            self.events(record)

    def _activate(self, level: int) -> None:
        pos = bisect.bisect_left(self.active, level)
        if pos == len(self.active) or self.active[pos] != level:
            self.active.insert(pos, level)

    # -- driver ----------------------------------------------------------

    def run(self) -> Omtbdd:
        m = self.m
        res = self.eq(constant(m, 0, self.k))
        if res.equal:
            return self._finish(constant(m, 0, self.k))
        e1 = self._counterexample(res)
        l1 = self.mq(e1)
        if l1 == 0:
            raise ProtocolError(f"counterexample {e1} for the constant 0 has value 0")
        self.k = max(self.k, l1 + 1)
        res = self.eq(constant(m, l1, self.k))
        if res.equal:
            return self._finish(constant(m, l1, self.k))
        e = self._counterexample(res)
        ell = self.mq(e)
        if ell == l1:
            raise ProtocolError(f"counterexample {e} for the constant {l1} has value {l1}")
        self.initial_hypothesis(e1, l1, e, ell)
        while True:
            if self.s(e) == ell:
                h = self.hypothesis()
                res = self.eq(h)
                if res.equal:
                    return self._finish(reduce(h))
                e = self._counterexample(res)
                ell = self.mq(e)
                if self.s(e) == ell:
                    raise ProtocolError(f"equivalence oracle returned {e}, which is not a counterexample")
            before = self.s.node_count
            self.update_hypothesis(e, ell)
            if self.s.node_count <= before:
                raise ProtocolError("an update did not add a node to the hypothesis")
            if self.invariant_hook is not None:
                self.invariant_hook(self)

    def _counterexample(self, res: EqResult) -> str:
        e = res.counterexample
        if e is None or len(e) != self.m or e.strip("01"):
            raise ProtocolError(f"malformed counterexample {e!r}")
        return e

    def _finish(self, d: Omtbdd) -> Omtbdd:
        self.result = d
        return d

    def hypothesis(self) -> Omtbdd:
        return self.s.to_omtbdd(self.k)

    # -- construction ----------------------------------------------------

    def initial_hypothesis(self, e1: str, l1: int, e: str, ell: int) -> None:
        m = self.m
        seen: dict[int, int] = {}

        def g(x: int) -> bool:
            seen[x] = self.mq(cro(e1, e, x))
            return seen[x] == l1

        _, i = find_flip(g, 0, m, True)
        l2 = ell if i == m else seen[i]
        v = e1[:m - i]
        r = e1[m - i] + e[m - i + 1:]
        rd = flip_first(r)
        s = self.s = Omtbddas(m, dummy=bool(v))
        if v:
            s.add_node(v)
            s.add_edge(LAMBDA, v, v)
        s.add_sink(v + r, l1)
        s.add_sink(v + rd, l2)
        s.add_edge(v, v + r, r)
        s.add_edge(v, v + rd, rd)
        self.k = max(self.k, l1 + 1, l2 + 1)
        if v:
            self.trees[len(v)] = ClassificationTree(len(v), TwinTest(r, (l1, l2), Leaf(v), MuLeaf()))
            self._activate(len(v))
        self.trees[m] = ClassificationTree(m, SingleTest(LAMBDA, {l1: Leaf(v + r), l2: Leaf(v + rd)}))
        self._activate(m)
        self._emit(kind="init", i=i, node=v, r=r, sinks=[v + r, v + rd], values=[l1, l2])

    def update_hypothesis(self, e: str, ell: int) -> None:
        s = self.s
        path = s.trace_path(e)
        k = len(path)
        dk = s.sinks[path[-1]]
        seen: dict[int, int] = {1: ell}

        def g(x: int) -> bool:
            p = path[x - 1]
            seen[x] = self.mq(p + e[len(p):])
            return seen[x] == dk

        i, _ = find_flip(g, 1, k, False)
        p_i, p_next = path[i - 1], path[i]
        q = s.label(p_i, s.bit_at(p_i, e))
        probe = self.mq(p_i + q + e[len(p_next):])
        self.updates += 1
        if probe != dk:
            v = self.node_split(e, p_i, p_next, dk, probe)
            self._emit(kind="update", proc=NODE_SPLIT, i=i, p_i=p_i, p_next=p_next, node=v,
                       level=len(v), promoted=False, nodes=s.node_count)
        else:
            v, j, promoted = self.new_branching_node(e, p_i, p_next, dk, seen[i])
            self._emit(kind="update", proc=NEW_BRANCHING_NODE, i=i, j=j, p_i=p_i, p_next=p_next,
                       node=v, level=len(v), promoted=promoted, nodes=s.node_count)

    def node_split(self, e: str, p_i: str, p_next: str, dk: int, dv: int) -> str:
        s = self.s
        e_next = e[len(p_next):]
        _, q = s.remove_edge(p_i, s.bit_at(p_i, e))
        v = p_i + q
        if len(v) >= self.m:
            raise ProtocolError(f"node split would create a sink {v}")
        s.add_node(v)
        s.add_edge(p_i, v, q)
        local = SingleTest(e_next, {dk: Leaf(p_next), dv: Leaf(v)})
        tree = self.trees[len(v)]
        t = tree.last_twin_test_label(p_next)
        td = flip_first(t)
        self.add_edge(v, t)
        self.add_edge(v, td)
        for v1, q1 in s.incoming(p_next):
            y = self.mq(v1 + q1 + e_next)
            child = local.children.get(y)
            if child is not None:
                if y != dk:
                    s.remove_edge(v1, q1[0])
                    s.add_edge(v1, child.id, q1)
            else:
                v2 = v1 + q1
                s.remove_edge(v1, q1[0])
                s.add_node(v2)
                s.add_edge(v1, v2, q1)
                local.add_child(y, Leaf(v2))
                self.add_edge(v2, t)
                self.add_edge(v2, td)
        tree.replace_leaf(p_next, local)
        return v

    def new_branching_node(self, e: str, p_i: str, p_next: str, dk: int,
                           d_pi_ei: int) -> tuple[str, int, bool]:
        s = self.s
        e_i = e[len(p_i):]
        e_next = e[len(p_next):]
        bit = s.bit_at(p_i, e)
        q = s.label(p_i, bit)
        f = e_i[:len(q)]
        seen: dict[int, int] = {len(q): d_pi_ei}

        def h(x: int) -> bool:
            seen[x] = self.mq(p_i + cro(q, f, x) + e_next)
            return seen[x] == dk

        _, j = find_flip(h, 0, len(q), True)
        keep = len(q) - j
        v = p_i + q[:keep]
        r = e[len(v):]
        if j == len(q):
            if not (p_i == LAMBDA and s.dummy):
                raise ProtocolError(f"branching point coincides with the real node {show(p_i)}")
            s.promote_root()
            promoted = True
        else:
            s.remove_edge(p_i, bit)
            s.add_node(v)
            s.add_edge(p_i, v, q[:keep])
            s.add_edge(v, p_next, q[keep:])
            level = len(v)
            sub = TwinTest(r, (seen[j], dk), Leaf(v), MuLeaf())
            crossing = [(v1, lab) for v2, srcs in s.inc.items() if len(v2) > level
                        for (v1, _), lab in srcs.items() if len(v1) < level]
            for v1, lab in crossing:
                g = lab[:level - len(v1)]
                out = classify_from(sub, v1 + g, self.mq)
                if out.kind == LEAF:
                    s.remove_edge(v1, lab[0])
                    s.add_edge(v1, v, g)
            self.trees[level].replace_mu(sub)
            self._activate(level)
            promoted = False
        self.add_edge(v, r)
        return v, j, promoted

    def add_edge(self, v: str, t: str) -> None:
        """Find the target of the edge leaving ``v`` along ``t``, creating nodes on the way.

        Work-list version of the recursive procedure; nodes created here get
        both outgoing edges before control returns to the caller.
        """
        s, m, trees, active = self.s, self.m, self.trees, self.active
        work = [(v, t)]
        while work:
            v, t = work.pop()
            base = len(v)
            top = min(base + len(t), m)
            pos = bisect.bisect_right(active, base)
            for level in active[pos:]:
                if level > top:
                    break
                j = level - base
                a = v + t[:j]
                out = trees[level].classify(a, self.mq)
                if out.kind == MU:
                    continue
                if out.kind == LEAF:
                    s.add_edge(v, out.leaf, t[:j])
                    break
                trees[level].add_value_edge(out.node, out.value, a)
                if level == m:
                    value = out.value if out.node.label == LAMBDA else self.mq(a)
                    s.add_sink(a, value)
                    s.add_edge(v, a, t[:j])
                    self.k = max(self.k, value + 1)
                else:
                    s.add_node(a)
                    s.add_edge(v, a, t[:j])
                    rest = t[j:] if self.addedge_suffix else t
                    work.append((a, flip_first(rest)))
                    work.append((a, rest))
                break
            else:
                raise ProtocolError(f"every prefix of {t} from {show(v)} classified as μ")


def learn(m: int, mq: Callable[[str], int], eq: Callable[[Omtbdd], EqResult],
          k_hint: int | None = None, **options) -> Omtbdd:
    """Learn the target behind ``mq``/``eq``; returns the reduced diagram."""
    return QLearner(m, mq, eq, k_hint=k_hint, **options).run()
