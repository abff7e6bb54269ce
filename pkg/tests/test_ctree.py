import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlomtbdd.core import flip_first, trace_to_node
from qlomtbdd.ctree import (
    LEAF, MU, STUCK, ClassificationTree, Leaf, MuLeaf, SingleTest, TreeError, TwinTest, classify_from,
)
from qlomtbdd.generator import GenParams, generate
from qlomtbdd.learner import QLearner
from qlomtbdd.oracles import oracles_from_target

from fixtures import trace_learner
from oracles_bf import all_strings


class CountingTable:
    def __init__(self, table):
        self.table = table
        self.calls = 0

    def __call__(self, a):
        self.calls += 1
        return self.table[a]


def example_t4() -> ClassificationTree:
    inner = SingleTest("0001", {1: Leaf("0101"), 0: Leaf("1110")})
    return ClassificationTree(4, TwinTest("0011", (2, 0), inner, MuLeaf()))


def example_t6() -> ClassificationTree:
    return ClassificationTree(6, TwinTest("01", (0, 1), Leaf("000000"),
                                          TwinTest("11", (1, 2), Leaf("111111"), MuLeaf())))


class TestClassify:
    def test_reaches_leaf(self):
        mq = CountingTable({"11000011": 2, "11001011": 0, "11000001": 1})
        out = example_t4().classify("1100", mq)
        assert out.kind == LEAF and out.leaf == "0101"
        assert mq.calls == 3

    def test_reaches_mu(self):
        mq = CountingTable({"10100101": 2, "10100111": 2})
        out = example_t6().classify("101001", mq)
        assert out.kind == MU and repr(out) == "MU"
        assert mq.calls == 4

    def test_stuck_at_last_level(self):
        learner = trace_learner(0)
        out = learner.trees[8].classify("01000101", learner._mq)
        assert out.kind == STUCK and out.value == 2 and out.node.label == ""
        assert repr(out) == "STUCK(λ, 2)"

    def test_length_checked(self):
        with pytest.raises(ValueError):
            example_t4().classify("110", lambda a: 0)

    def test_trivial_tree_asks_nothing(self):
        mq = CountingTable({})
        t = ClassificationTree(3)
        assert t.trivial and t.classify("010", mq).kind == MU and mq.calls == 0

    @settings(max_examples=100)
    @given(st.lists(st.integers(0, 2), min_size=4, max_size=4))
    def test_query_cost(self, values):
        table = dict(zip(("10100101", "10100111", "10100100", "10100110"), values))
        t = example_t6()
        mq = CountingTable(table)
        out = t.classify("101001", mq)
        node, twins = t.root, 0
        while isinstance(node, TwinTest):
            twins += 1
            pair = (table["101001" + node.label], table["101001" + flip_first(node.label)])
            node = node.match if pair == node.pair else node.other
        assert mq.calls == 2 * twins <= 2 * t.internal_count()
        assert out.kind == (MU if isinstance(node, MuLeaf) else LEAF)


class TestStructure:
    def test_last_twin_label_single_root(self):
        t = ClassificationTree(2, TwinTest("11", (0, 1), Leaf("01"), MuLeaf()))
        assert t.last_twin_test_label("01") == "11"

    def test_last_twin_label_chain(self):
        assert example_t6().last_twin_test_label("111111") == "11"
        assert example_t4().last_twin_test_label("0101") == "0011"

    def test_last_twin_label_initial(self):
        t = trace_learner(0).trees[4]
        assert t.last_twin_test_label("1010") == "0100"

    def test_last_twin_label_missing(self):
        t = ClassificationTree(2, SingleTest("11", {0: Leaf("01")}))
        with pytest.raises(TreeError):
            t.last_twin_test_label("01")

    def test_graft_single(self):
        t = trace_learner(2).trees[4]
        before = len(t.leaves)
        t.graft_single_test("1010", "1010", [(0, "1010"), (1, "0110")])
        assert sorted(t.leaves) == ["0110", "1010"] and len(t.leaves) == before + 1
        assert "single r=1010" in t.dump()

    def test_graft_single_errors(self):
        t = example_t4()
        with pytest.raises(TreeError):
            t.graft_single_test("9999", "0", [(0, "0000")])
        with pytest.raises(TreeError):
            t.graft_single_test("0101", "0", [(0, "0000"), (0, "0011")])
        with pytest.raises(TreeError):
            t.graft_single_test("0101", "0", [(0, "1110")])
        assert "0101" in t.leaves

    def test_graft_twin(self):
        t = ClassificationTree(3)
        t.graft_twin_test("01", (1, 0), "010")
        assert isinstance(t.root, TwinTest) and t.mu is not None
        t.graft_twin_test("11", (2, 0), "110")
        self._twin_path(t)

    def test_graft_twin_without_mu(self):
        t = ClassificationTree(1, SingleTest("0", {0: Leaf("1")}))
        with pytest.raises(TreeError):
            t.graft_twin_test("0", (0, 1), "0")

    def test_add_value_edge(self):
        learner = trace_learner(0)
        t = learner.trees[8]
        t.add_value_edge(t.root, 2, "01000101")
        assert t.classify("01000101", learner._mq).leaf == "01000101"
        with pytest.raises(TreeError):
            t.add_value_edge(t.root, 2, "11111111")
        with pytest.raises(TreeError):
            t.add_value_edge(t.root, 3, "01000101")

    def test_dot(self):
        dot = example_t6().to_dot()
        assert dot.count("doubleoctagon") == 2 and dot.count("->") == 4

    @staticmethod
    def _twin_path(t):
        node = t.root
        while isinstance(node, TwinTest):
            assert node.pair[0] != node.pair[1]
            assert not isinstance(node.match, (TwinTest, MuLeaf))
            node = node.other
        for n in t.nodes():
            if isinstance(n, TwinTest):
                assert n.parent is None or isinstance(n.parent, TwinTest)


@pytest.mark.parametrize("seed", range(12))
def test_learned_trees_respect_node_equivalence(seed):
    rng = random.Random(seed)
    m, k = rng.randint(4, 8), rng.randint(2, 4)
    target = generate(GenParams(rng.randint(k + 2, k + 14), m, k, seed))
    mq, eq = oracles_from_target(target)
    learner = QLearner(m, mq, eq)
    learner.run()
    for level in range(1, m + 1):
        tree = learner.trees[level]
        seen = {}
        for a in all_strings(level):
            node = trace_to_node(target, a)
            if node is None:
                continue
            out = tree.classify(a, mq.fn)
            assert seen.setdefault(node, out) == out
        TestStructure._twin_path(tree)
