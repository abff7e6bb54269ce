"""Compile a threshold-split tree classifier into an OMTBDD.

Each distinct ``(feature, threshold)`` split becomes one Boolean variable whose
bit is 1 exactly when ``value <= threshold``.  Variables are ordered by how
often one condition sits above another in the trees, then the diagram is
learned with the classifier as membership oracle and the correctly predicted
rows as equivalence set.
"""

from __future__ import annotations

import csv
import heapq
import io
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .core import EqResult, FormatError, Omtbdd, equivalent, from_function, reduce
from .learner import QLearner
from .oracles import EquivalenceOracle, MembershipOracle, eq_from_dataset


class Condition(NamedTuple):
    feature: int
    threshold: float


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    true: int
    false: int


@dataclass(frozen=True)
class ClassLeaf:
    cls: int


@dataclass
class Tree:
    root: int
    nodes: dict[int, Split | ClassLeaf]

    def walk(self, go_true) -> int:
        node = self.nodes[self.root]
        while isinstance(node, Split):
            node = self.nodes[node.true if go_true(node) else node.false]
        return node.cls

    def preorder(self):
        """``(node, ancestors)`` pairs, true child before false child."""
        stack = [(self.root, ())]
        while stack:
            ident, above = stack.pop()
            node = self.nodes[ident]
            yield node, above
            if isinstance(node, Split):
                here = above + (Condition(node.feature, node.threshold),)
                stack.append((node.false, here))
                stack.append((node.true, here))


@dataclass
class TreeClassifier:
    trees: list[Tree]
    classes: int
    features: int

    def vote(self, labels: Iterable[int]) -> int:
        tally = Counter(labels)
        best = max(tally.values())
        return min(c for c, n in tally.items() if n == best)

    def predict(self, x: Sequence[float]) -> int:
        if len(x) != self.features:
            raise ValueError(f"sample has {len(x)} features, expected {self.features}")
        return self.vote(t.walk(lambda s: x[s.feature] <= s.threshold) for t in self.trees)

    def split_count(self) -> int:
        return sum(isinstance(n, Split) for t in self.trees for n in t.nodes.values())

    def shared_leaf_size(self) -> int:
        """Split nodes plus one shared leaf per class that some tree can output."""
        used = {n.cls for t in self.trees for n in t.nodes.values() if isinstance(n, ClassLeaf)}
        return self.split_count() + len(used)


# -- document format ---------------------------------------------------------

def _kv(tokens: list[str], names: Sequence[str], lineno: int) -> dict[str, str]:
    out = {}
    for tok in tokens:
        key, eq, val = tok.partition("=")
        if not eq or key not in names or key in out:
            raise FormatError(f"unexpected field {tok!r}", lineno)
        out[key] = val
    missing = [n for n in names if n not in out]
    if missing:
        raise FormatError(f"missing field(s) {', '.join(missing)}", lineno)
    return out


def load_classifier(text: str) -> TreeClassifier:
    header = None
    trees: list[Tree] = []
    current: Tree | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        try:
            if header is None:
                if head != "forest":
                    raise FormatError("document must start with a forest line", lineno)
                f = _kv(rest, ("trees", "classes", "features"), lineno)
                header = {k: int(v) for k, v in f.items()}
            elif head == "tree":
                idx, *fields = rest
                f = _kv(fields, ("root",), lineno)
                if int(idx) != len(trees):
                    raise FormatError(f"tree index {idx} out of sequence", lineno)
                current = Tree(int(f["root"]), {})
                trees.append(current)
            elif head in ("split", "leaf"):
                if current is None:
                    raise FormatError(f"{head} before any tree line", lineno)
                ident, *fields = rest
                ident = int(ident)
                if ident in current.nodes:
                    raise FormatError(f"duplicate node {ident} in tree {len(trees) - 1}", lineno)
                if head == "split":
                    f = _kv(fields, ("feature", "threshold", "true", "false"), lineno)
                    feat = int(f["feature"])
                    if not 0 <= feat < header["features"]:
                        raise FormatError(f"feature {feat} outside 0..{header['features'] - 1}", lineno)
                    current.nodes[ident] = Split(feat, float(f["threshold"]), int(f["true"]), int(f["false"]))
                else:
                    f = _kv(fields, ("class",), lineno)
                    cls = int(f["class"])
                    if not 0 <= cls < header["classes"]:
                        raise FormatError(f"class {cls} outside 0..{header['classes'] - 1}", lineno)
                    current.nodes[ident] = ClassLeaf(cls)
            else:
                raise FormatError(f"unknown record {head!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(str(exc), lineno) from None
    if header is None:
        raise FormatError("empty classifier document")
    if len(trees) != header["trees"]:
        raise FormatError(f"header announces {header['trees']} trees, found {len(trees)}")
    for i, t in enumerate(trees):
        _check_tree(t, i)
    return TreeClassifier(trees, header["classes"], header["features"])


def _check_tree(t: Tree, idx: int) -> None:
    if t.root not in t.nodes:
        raise FormatError(f"tree {idx}: root {t.root} is not defined")
    seen = set()
    stack = [t.root]
    while stack:
        ident = stack.pop()
        if ident in seen:
            raise FormatError(f"tree {idx}: node {ident} is reached twice")
        seen.add(ident)
        node = t.nodes.get(ident)
        if node is None:
            raise FormatError(f"tree {idx}: node {ident} is referenced but not defined")
        if isinstance(node, Split):
            stack += [node.false, node.true]
    if seen != set(t.nodes):
        raise FormatError(f"tree {idx}: nodes {sorted(set(t.nodes) - seen)} are unreachable")


def dump_classifier(c: TreeClassifier) -> str:
    lines = [f"forest trees={len(c.trees)} classes={c.classes} features={c.features}"]
    for i, t in enumerate(c.trees):
        lines.append(f"tree {i} root={t.root}")
        for ident in sorted(t.nodes):
            node = t.nodes[ident]
            if isinstance(node, Split):
                lines.append(f"split {ident} feature={node.feature} threshold={node.threshold!r} "
                             f"true={node.true} false={node.false}")
            else:
                lines.append(f"leaf {ident} class={node.cls}")
    return "\n".join(lines) + "\n"


def load_dataset(text: str) -> list[tuple[list[float], int]]:
    """Numeric feature columns then an integer label; a non-numeric first row is a header."""
    rows = []
    for lineno, rec in enumerate(csv.reader(io.StringIO(text)), 1):
        if not rec or all(not f.strip() for f in rec):
            continue
        try:
            values = [float(f) for f in rec[:-1]]
            label = int(rec[-1])
        except ValueError:
            if lineno == 1 and not rows:
                continue
            raise FormatError(f"non-numeric record {rec!r}", lineno) from None
        rows.append((values, label))
    return rows


# -- conditions and ordering -------------------------------------------------

def extract_conditions(c: TreeClassifier) -> list[Condition]:
    seen: dict[Condition, None] = {}
    for t in c.trees:
        for node, _ in t.preorder():
            if isinstance(node, Split):
                seen.setdefault(Condition(node.feature, node.threshold), None)
    return list(seen)


def ancestor_counts(c: TreeClassifier, conds: Sequence[Condition]) -> dict[tuple[int, int], int]:
    """``counts[a, b]``: over all split nodes testing ``b``, how many ancestors test ``a``."""
    index = {cond: i for i, cond in enumerate(conds)}
    counts: Counter = Counter()
    for t in c.trees:
        for node, above in t.preorder():
            if isinstance(node, Split):
                b = index[Condition(node.feature, node.threshold)]
                for cond in above:
                    a = index[cond]
                    if a != b:
                        counts[a, b] += 1
    return dict(counts)


def _topological(n: int, edges: list[tuple[int, int]]) -> list[int] | None:
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        succ[a].append(b)
        indeg[b] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        a = heapq.heappop(ready)
        order.append(a)
        for b in succ[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(ready, b)
    return order if len(order) == n else None


def order_edges(n: int, counts: dict[tuple[int, int], int]) -> list[tuple[int, int, int]]:
    """``(source, target, weight)`` from the more frequent ancestor, in discovery order."""
    edges = []
    for a in range(n):
        for b in range(a + 1, n):
            diff = counts.get((a, b), 0) - counts.get((b, a), 0)
            if diff > 0:
                edges.append((a, b, diff))
            elif diff < 0:
                edges.append((b, a, -diff))
    return edges


def order_variables(c: TreeClassifier, conds: Sequence[Condition]) -> list[Condition]:
    n = len(conds)
    edges = order_edges(n, ancestor_counts(c, conds))
    # lightest first; among equal weights, the earlier-discovered edge goes first
    removal = sorted(range(len(edges)), key=lambda i: (edges[i][2], i))
    order = _topological(n, [(a, b) for a, b, _ in edges])
    if order is None:
        # dropping more edges never creates a cycle, so bisect the shortest removal prefix
        lo, hi = 0, len(removal)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            gone = set(removal[:mid])
            if _topological(n, [(a, b) for i, (a, b, _) in enumerate(edges) if i not in gone]) is None:
                lo = mid
            else:
                hi = mid
        gone = set(removal[:hi])
        order = _topological(n, [(a, b) for i, (a, b, _) in enumerate(edges) if i not in gone])
    return [conds[i] for i in order]


# -- oracles -----------------------------------------------------------------

def binarize(x: Sequence[float], conds: Sequence[Condition], features: int | None = None) -> str:
    if features is not None and len(x) != features:
        raise ValueError(f"sample has {len(x)} features, expected {features}")
    try:
        return "".join("1" if x[f] <= thr else "0" for f, thr in conds)
    except IndexError:
        raise ValueError(f"sample with {len(x)} features is too short for the conditions") from None


def classifier_mq(c: TreeClassifier, conds: Sequence[Condition]) -> MembershipOracle:
    position = {cond: i for i, cond in enumerate(conds)}
    where = [{ident: position[Condition(n.feature, n.threshold)]
              for ident, n in t.nodes.items() if isinstance(n, Split)} for t in c.trees]
    m = len(conds)

    def answer(bits: str) -> int:
        if len(bits) != m:
            raise ValueError(f"query has length {len(bits)}, expected {m}")
        labels = []
        for t, pos in zip(c.trees, where):
            ident = t.root
            node = t.nodes[ident]
            while isinstance(node, Split):
                ident = node.true if bits[pos[ident]] == "1" else node.false
                node = t.nodes[ident]
            labels.append(node.cls)
        return c.vote(labels)

    return MembershipOracle(answer, m)


def exact_eq(fn, m: int, k: int) -> EquivalenceOracle:
    """Equivalence against the full truth table of ``fn``; only sensible for small ``m``."""
    target = reduce(from_function(m, fn, k))
    oracle = EquivalenceOracle(lambda h: equivalent(h, target))
    oracle.target = target
    return oracle


@dataclass
class CompileReport:
    conditions: int
    splits: int
    nodes: int
    mq: int
    eq: int
    samples: int
    rows: int
    agreement: float
    exact: bool

    def render(self) -> str:
        return (f"compile conditions={self.conditions} splits={self.splits} nodes={self.nodes} "
                f"mq={self.mq} eq={self.eq} samples={self.samples} rows={self.rows} "
                f"agreement={self.agreement:.6f} exact={int(self.exact)}\n")


def compile_classifier(c: TreeClassifier, rows: Sequence[tuple[Sequence[float], int]] = (),
                       exact: bool = False, **learn_options) -> tuple[Omtbdd, CompileReport]:
    """Learn the classifier's diagram; ``exact`` swaps the dataset check for the full truth table."""
    conds = order_variables(c, extract_conditions(c))
    m = len(conds)
    mq = classifier_mq(c, conds)
    samples = []
    for x, label in rows:
        if len(x) != c.features:
            raise ValueError(f"row has {len(x)} features, expected {c.features}")
        if c.predict(x) == label:
            samples.append((binarize(x, conds), label))
    eq = exact_eq(mq.fn, m, c.classes) if exact else eq_from_dataset(samples)
    learner = QLearner(m, mq, eq, k_hint=c.classes, **learn_options)
    d = learner.run()
    agree = sum(d(bits) == label for bits, label in samples)
    report = CompileReport(
        conditions=m, splits=c.split_count(), nodes=len(d), mq=learner.mq_count,
        eq=learner.eq_count, samples=len(samples), rows=len(rows),
        agreement=agree / len(samples) if samples else 1.0, exact=exact)
    return d, report
