"""Node classification trees.

The tree for level ``j`` sorts length-``j`` strings into the hypothesis node
they reach, or into ``μ`` when they reach no node, by asking membership
queries for the string extended with each test label.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

from .core import flip_first
from .omtbddas import show

MembershipFn = Callable[[str], int]

LEAF = "leaf"
MU = "mu"
STUCK = "stuck"


class TreeError(RuntimeError):
    pass


class Leaf:
    __slots__ = ("id", "parent")

    def __init__(self, ident: str):
        self.id = ident
        self.parent = None


class MuLeaf:
    __slots__ = ("parent",)

    def __init__(self):
        self.parent = None


class TwinTest:
    """Asks for ``a·r`` and ``a·ṙ``; one edge keyed by a value pair, one unlabeled."""

    __slots__ = ("label", "pair", "match", "other", "parent")

    def __init__(self, label: str, pair: tuple[int, int], match, other):
        self.label = label
        self.pair = pair
        self.match = match
        self.other = other
        self.parent = None
        match.parent = self
        other.parent = self


class SingleTest:
    """Asks for ``a·r``; at most one child per answer value."""

    __slots__ = ("label", "children", "parent")

    def __init__(self, label: str, children: dict | None = None):
        self.label = label
        self.children: dict[int, object] = {}
        self.parent = None
        for value, child in (children or {}).items():
            self.add_child(value, child)

    def add_child(self, value: int, child) -> None:
        if value in self.children:
            raise TreeError(f"single test {show(self.label)} already has an edge labeled {value}")
        self.children[value] = child
        child.parent = self


class Outcome(NamedTuple):
    kind: str
    leaf: str | None = None
    node: SingleTest | None = None
    value: int | None = None

    def __repr__(self) -> str:
        if self.kind == LEAF:
            return f"LEAF({show(self.leaf)})"
        if self.kind == MU:
            return "MU"
        return f"STUCK({show(self.node.label)}, {self.value})"


def classify_from(node, a: str, mq: MembershipFn) -> Outcome:
    """Sift ``a`` down from ``node`` (which need not be attached to a tree)."""
    while True:
        if isinstance(node, TwinTest):
            r = node.label
            pair = (mq(a + r), mq(a + flip_first(r)))
            node = node.match if pair == node.pair else node.other
        elif isinstance(node, SingleTest):
            value = mq(a + node.label)
            child = node.children.get(value)
            if child is None:
                return Outcome(STUCK, node=node, value=value)
            node = child
        elif isinstance(node, Leaf):
            return Outcome(LEAF, leaf=node.id)
        else:
            return Outcome(MU)


def _walk(node):
    stack = [node]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, TwinTest):
            stack.append(node.other)
            stack.append(node.match)
        elif isinstance(node, SingleTest):
            stack.extend(node.children[v] for v in sorted(node.children, reverse=True))


class ClassificationTree:
    def __init__(self, level: int, root=None):
        self.level = level
        self.root = None
        self.leaves: dict[str, Leaf] = {}
        self.mu: MuLeaf | None = None
        self._set_root(root if root is not None else MuLeaf())

    def _set_root(self, node) -> None:
        self.root = node
        node.parent = None
        self.leaves.clear()
        self.mu = None
        self._register(node)

    def _register(self, subtree) -> None:
        for node in _walk(subtree):
            if isinstance(node, Leaf):
                if node.id in self.leaves:
                    raise TreeError(f"T_{self.level} already has a leaf {show(node.id)}")
                if len(node.id) != self.level:
                    raise TreeError(f"leaf {show(node.id)} does not have length {self.level}")
                self.leaves[node.id] = node
            elif isinstance(node, MuLeaf):
                if self.mu is not None:
                    raise TreeError(f"T_{self.level} would have two μ leaves")
                self.mu = node

    @property
    def trivial(self) -> bool:
        """True while the tree is a lone μ leaf, which classifies everything as μ for free."""
        return isinstance(self.root, MuLeaf)

    def classify(self, a: str, mq: MembershipFn) -> Outcome:
        if len(a) != self.level:
            raise ValueError(f"T_{self.level} cannot classify a string of length {len(a)}")
        return classify_from(self.root, a, mq)

    def nodes(self):
        return _walk(self.root)

    def internal_count(self) -> int:
        return sum(1 for n in self.nodes() if isinstance(n, (TwinTest, SingleTest)))

    def last_twin_test_label(self, ident: str) -> str:
        """Label of the deepest twin test above the leaf ``ident``."""
        node = self.leaf(ident).parent
        while node is not None and not isinstance(node, TwinTest):
            node = node.parent
        if node is None:
            raise TreeError(f"no twin test above leaf {show(ident)} in T_{self.level}")
        return node.label

    def leaf(self, ident: str) -> Leaf:
        try:
            return self.leaves[ident]
        except KeyError:
            raise TreeError(f"T_{self.level} has no leaf {show(ident)}") from None

    def _replace(self, old, new) -> None:
        parent = old.parent
        if parent is None:
            self.root = new
            new.parent = None
        elif isinstance(parent, TwinTest):
            if parent.match is old:
                parent.match = new
            else:
                parent.other = new
            new.parent = parent
        else:
            for value, child in parent.children.items():
                if child is old:
                    parent.children[value] = new
                    break
            new.parent = parent

    def replace_leaf(self, ident: str, subtree) -> None:
        """Put ``subtree`` where the leaf ``ident`` was; ``subtree`` may reuse that id."""
        old = self.leaf(ident)
        del self.leaves[ident]
        try:
            self._register(subtree)
        except TreeError:
            self.leaves[ident] = old
            raise
        self._replace(old, subtree)

    def graft_single_test(self, ident: str, test: str, branches: list[tuple[int, str]]) -> SingleTest:
        values = [v for v, _ in branches]
        if len(set(values)) != len(values):
            raise TreeError("branch values must be distinct")
        node = SingleTest(test, {v: Leaf(leaf) for v, leaf in branches})
        self.replace_leaf(ident, node)
        return node

    def graft_twin_test(self, test: str, pair: tuple[int, int], ident: str) -> TwinTest:
        """Replace the μ leaf with a twin test leading to ``ident`` or to a fresh μ leaf."""
        if self.mu is None:
            raise TreeError(f"T_{self.level} has no μ leaf")
        return self.replace_mu(TwinTest(test, pair, Leaf(ident), MuLeaf()))

    def replace_mu(self, subtree: TwinTest) -> TwinTest:
        if self.mu is None:
            raise TreeError(f"T_{self.level} has no μ leaf")
        old = self.mu
        self.mu = None
        try:
            self._register(subtree)
        except TreeError:
            self.mu = old
            raise
        self._replace(old, subtree)
        return subtree

    def add_value_edge(self, node: SingleTest, value: int, ident: str) -> Leaf:
        if ident in self.leaves:
            raise TreeError(f"T_{self.level} already has a leaf {show(ident)}")
        if len(ident) != self.level:
            raise TreeError(f"leaf {show(ident)} does not have length {self.level}")
        leaf = Leaf(ident)
        node.add_child(value, leaf)
        self.leaves[ident] = leaf
        return leaf

    def dump(self) -> str:
        lines = [f"ctree level={self.level}"]

        def rec(node, depth, edge):
            pad = "  " * depth + edge
            if isinstance(node, TwinTest):
                lines.append(f"{pad}twin r={show(node.label)}")
                rec(node.match, depth + 1, f"{node.pair} -> ")
                rec(node.other, depth + 1, "* -> ")
            elif isinstance(node, SingleTest):
                lines.append(f"{pad}single r={show(node.label)}")
                for v in sorted(node.children):
                    rec(node.children[v], depth + 1, f"{v} -> ")
            elif isinstance(node, Leaf):
                lines.append(f"{pad}leaf {show(node.id)}")
            else:
                lines.append(f"{pad}mu")

        rec(self.root, 1, "")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        lines = [f"digraph T{self.level} {{"]
        names = {}
        for i, node in enumerate(self.nodes()):
            names[id(node)] = f"t{i}"
            if isinstance(node, TwinTest):
                lines.append(f'  t{i} [shape=doubleoctagon, label="{show(node.label)}"];')
            elif isinstance(node, SingleTest):
                lines.append(f'  t{i} [shape=octagon, label="{show(node.label)}"];')
            elif isinstance(node, Leaf):
                lines.append(f'  t{i} [shape=box, label="{show(node.id)}"];')
            else:
                lines.append(f'  t{i} [shape=box, label="μ"];')
        for node in self.nodes():
            if isinstance(node, TwinTest):
                lines.append(f'  {names[id(node)]} -> {names[id(node.match)]} [label="{node.pair}"];')
                lines.append(f"  {names[id(node)]} -> {names[id(node.other)]};")
            elif isinstance(node, SingleTest):
                for v, child in sorted(node.children.items()):
                    lines.append(f'  {names[id(node)]} -> {names[id(child)]} [label="{v}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
