import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlomtbdd.core import (
    FormatError, Omtbdd, constant, cro, decode, encode, equivalent, evaluate, export_dot,
    flip_first, from_function, pre, reduce, suf, trace_to_node,
)

from fixtures import SMALL
from oracles_bf import all_strings, diagrams, path_table, residual

bits = st.text("01", min_size=0, max_size=12)


class TestStrings:
    def test_pre(self):
        assert pre("10100100", 4) == "1010"
        assert pre("1010", 0) == ""
        assert pre("1010", 4) == "1010"

    def test_suf(self):
        assert suf("01111010", 6) == "111010"
        assert suf("1010", 0) == ""
        assert suf("1010", 4) == "1010"

    def test_cro(self):
        assert cro("1010", "0100", 4) == "0100"
        assert cro("1010", "0100", 3) == "1100"
        assert cro("1010", "0100", 0) == "1010"

    def test_flip_first(self):
        assert flip_first("0100") == "1100"
        assert flip_first("1") == "0"

    @pytest.mark.parametrize("call", [
        lambda: pre("101", 4), lambda: pre("101", -1), lambda: suf("1", 2),
        lambda: cro("10", "1", 1), lambda: cro("10", "01", 3), lambda: flip_first(""),
    ])
    def test_range_errors(self, call):
        with pytest.raises(ValueError):
            call()

    @given(bits)
    def test_flip_is_involution(self, a):
        if a:
            assert flip_first(flip_first(a)) == a

    @given(st.integers(0, 10).flatmap(lambda n: st.tuples(
        st.text("01", min_size=n, max_size=n), st.text("01", min_size=n, max_size=n), st.integers(0, n))))
    def test_cro_splices(self, args):
        a, b, j = args
        out = cro(a, b, j)
        assert out == pre(a, len(a) - j) + suf(b, j)
        assert len(out) == len(a)


class TestEvaluate:
    def test_constant(self):
        d = constant(5, 0)
        assert all(evaluate(d, a) == 0 for a in all_strings(5))

    def test_small(self):
        assert [evaluate(SMALL, a) for a in ("00", "01", "10", "11")] == [0, 0, 1, 2]

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            evaluate(SMALL, "0")

    @settings(max_examples=150)
    @given(diagrams(max_m=8))
    def test_matches_path_enumeration(self, d):
        table = path_table(d)
        assert all(evaluate(d, a) == v for a, v in table.items())


class TestTrace:
    def test_root_on_x1(self):
        assert trace_to_node(SMALL, "") == SMALL.root

    def test_root_skipping_x1(self):
        d = Omtbdd.from_spec(3, 2, "r", {"r": (2, "a", "b"), "a": 0, "b": 1})
        assert trace_to_node(d, "0") == d.root
        assert trace_to_node(d, "") is None
        assert trace_to_node(d, "01") is None
        assert trace_to_node(d, "010") is not None

    def test_too_long(self):
        assert trace_to_node(SMALL, "000") is None

    @settings(max_examples=120)
    @given(diagrams(max_m=7))
    def test_access_classes_match_residuals(self, raw):
        d = reduce(raw)
        m = d.m
        table = path_table(d)
        for length in range(m + 1):
            owners: dict[int, tuple] = {}
            for a in all_strings(length):
                node = trace_to_node(d, a)
                res = residual(table, a, m)
                if node is None:
                    # a lands strictly inside a skip: the residual ignores the next variable
                    half = len(res) // 2
                    assert length < m and res[:half] == res[half:]
                    continue
                assert d.var[node] == length + 1
                if node in owners:
                    assert owners[node] == res
                else:
                    assert res not in owners.values()
                    owners[node] = res

    @settings(max_examples=80)
    @given(diagrams(max_m=7), st.data())
    def test_prefixes_on_evaluation_path(self, d, data):
        a = data.draw(st.text("01", min_size=d.m, max_size=d.m))
        i = d.root
        while True:
            assert trace_to_node(d, a[:d.var[i] - 1]) == i
            if d.is_sink(i):
                break
            i = d.hi[i] if a[d.var[i] - 1] == "1" else d.lo[i]


class TestReduce:
    def test_redundant_test_removed(self):
        d = Omtbdd.from_spec(2, 2, "r", {"r": (1, "s", "s"), "s": 1})
        r = reduce(d)
        assert len(r) == 1 and r.is_constant and r.value[r.root] == 1

    @settings(max_examples=200)
    @given(diagrams(max_m=8))
    def test_semantics_and_shape(self, d):
        r = reduce(d)
        assert path_table(r) == path_table(d)
        assert reduce(r) == r
        internal = [(r.var[i], r.lo[i], r.hi[i]) for i in range(len(r)) if not r.is_sink(i)]
        assert all(lo != hi for _, lo, hi in internal)
        assert len(set(internal)) == len(internal)
        values = [r.value[i] for i in range(len(r)) if r.is_sink(i)]
        assert len(set(values)) == len(values)
        assert sorted(r.reachable()) == list(range(len(r)))

    @settings(max_examples=150)
    @given(diagrams(max_m=5, max_k=2), diagrams(max_m=5, max_k=2))
    def test_canonical(self, d1, d2):
        if d1.m != d2.m:
            return
        same = path_table(d1) == path_table(d2)
        assert (reduce(d1) == reduce(d2)) == same

    @settings(max_examples=60)
    @given(st.integers(1, 6), st.integers(2, 4), st.randoms(use_true_random=False))
    def test_from_function(self, m, k, rnd):
        table = {a: rnd.randrange(k) for a in all_strings(m)}
        d = from_function(m, table.__getitem__, k)
        assert path_table(d) == table
        assert path_table(reduce(d)) == table


class TestEquivalent:
    def test_self(self):
        assert equivalent(SMALL, SMALL).verdict == "YES"

    def test_changed_sink(self):
        other = Omtbdd.from_spec(2, 4, "a", {"a": (1, "s0", "b"), "b": (2, "s1", "s2"), "s0": 0, "s1": 1, "s2": 3})
        res = equivalent(SMALL, other)
        assert res.verdict == "NO" and not res
        assert evaluate(SMALL, res.counterexample) != evaluate(other, res.counterexample)
        assert res.counterexample == "11"

    def test_padding_is_zero(self):
        a = Omtbdd.from_spec(4, 2, "r", {"r": (3, "s0", "s1"), "s0": 0, "s1": 1})
        assert equivalent(a, constant(4, 0, 2)).counterexample == "0010"

    def test_m_mismatch(self):
        with pytest.raises(ValueError):
            equivalent(constant(2, 0), constant(3, 0))

    @settings(max_examples=200)
    @given(diagrams(max_m=6, max_k=2), diagrams(max_m=6, max_k=2))
    def test_against_brute_force(self, d1, d2):
        if d1.m != d2.m:
            return
        t1, t2 = path_table(d1), path_table(d2)
        res = equivalent(d1, d2)
        assert res.equal == (t1 == t2)
        assert res.equal == (reduce(d1) == reduce(d2))
        if not res.equal:
            e = res.counterexample
            assert len(e) == d1.m and t1[e] != t2[e]


class TestFormat:
    @settings(max_examples=100)
    @given(diagrams(max_m=7))
    def test_round_trip(self, d):
        r = reduce(d)
        assert decode(encode(r)) == r
        back = decode(encode(d, comment="two\nlines"))
        assert back == d and back.k == d.k

    def test_constant_document(self):
        text = encode(constant(3, 0, 1))
        body = [ln for ln in text.splitlines() if not ln.startswith("#")]
        assert body == ["omtbdd m=3 k=1 root=0", "sink 0 value=0"]

    @pytest.mark.parametrize("text, line", [
        ("", None),
        ("nonsense\n", 1),
        ("omtbdd m=2 k=2 root=0\nsink 0 value=x\n", 2),
        ("omtbdd m=2 k=2 root=0\nsink 0 value=0\nsink 0 value=1\n", 3),
        ("# c\nomtbdd m=2 k=2 root=0\nnode 0 var=1 lo=1\n", 3),
    ])
    def test_parse_errors_carry_location(self, text, line):
        with pytest.raises(FormatError) as info:
            decode(text)
        assert info.value.line == line

    def test_semantic_error(self):
        with pytest.raises(FormatError):
            decode("omtbdd m=2 k=2 root=0\nnode 0 var=2 lo=1 hi=1\nnode 1 var=1 lo=2 hi=2\nsink 2 value=0\n")

    def test_dot(self):
        dot = export_dot(SMALL)
        assert dot.startswith("digraph") and dot.rstrip().endswith("}")
        vertices = re.findall(r"^\s+n\d+ \[", dot, re.M)
        edges = re.findall(r"->", dot)
        assert len(vertices) == 5 and len(edges) == 4
        assert dot.count("shape=box") == 3
        for v in (0, 1, 2):
            assert f'shape=box, label="{v}"' in dot


class TestValidation:
    def test_order_violation(self):
        with pytest.raises(ValueError):
            Omtbdd(2, 2, 0, [2, 1, 3], [1, 2, -1], [1, 2, -1], [-1, -1, 0])

    def test_sink_value_range(self):
        with pytest.raises(ValueError):
            Omtbdd(1, 2, 0, [2], [-1], [-1], [2])

    @given(diagrams())
    def test_generated_respect_order(self, d):
        for i in range(len(d)):
            if not d.is_sink(i):
                assert d.var[d.lo[i]] > d.var[i] and d.var[d.hi[i]] > d.var[i]
