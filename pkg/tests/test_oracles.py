import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlomtbdd.core import constant, reduce
from qlomtbdd.oracles import (
    MembershipOracle, OracleError, eq_by_sampling, eq_from_dataset, oracles_from_target, scripted_eq,
    with_cache,
)

from fixtures import SMALL, TRACE_TARGET
from oracles_bf import all_strings, diagrams, path_table


@settings(max_examples=80)
@given(diagrams(max_m=7))
def test_target_oracles_match_truth_table(d):
    mq, eq = oracles_from_target(d)
    table = path_table(d)
    assert all(mq(a) == v for a, v in table.items())
    assert mq.calls == len(table)
    assert eq(d).equal and eq(reduce(d)).equal
    assert eq.calls == 2


def test_membership_length_checked():
    mq, _ = oracles_from_target(SMALL)
    with pytest.raises(ValueError):
        mq("0")


def test_equivalence_counterexample():
    _, eq = oracles_from_target(SMALL)
    res = eq(constant(2, 0, 3))
    assert not res.equal and path_table(SMALL)[res.counterexample] != 0


def test_cache_counts():
    inner = MembershipOracle(lambda a: a.count("1"))
    mq = with_cache(inner)
    for a in ["01", "01", "11", "01"]:
        mq(a)
    assert (mq.calls, mq.distinct, inner.calls) == (4, 2, 2)
    assert mq("11") == 2


class TestDatasetOracle:
    def test_first_disagreement_in_order(self):
        samples = [("00", 0), ("11", 1), ("10", 1), ("11", 1)]
        eq = eq_from_dataset(samples)
        res = eq(SMALL)
        assert not res.equal and res.counterexample == "11"
        assert eq.samples == [("00", 0), ("11", 1), ("10", 1)]

    def test_agreement(self):
        eq = eq_from_dataset([(a, v) for a, v in path_table(SMALL).items()])
        assert eq(SMALL).equal

    def test_contradiction(self):
        with pytest.raises(OracleError):
            eq_from_dataset([("01", 0), ("01", 1)])

    def test_empty_set_accepts_anything(self):
        assert eq_from_dataset([])(SMALL).equal


def test_sampling_oracle():
    mq, _ = oracles_from_target(TRACE_TARGET)
    eq = eq_by_sampling(mq.fn, 8, trials=2000, seed=3)
    assert eq(TRACE_TARGET).equal
    res = eq(constant(8, 0, 3))
    assert not res.equal and mq.fn(res.counterexample) != 0
    with pytest.raises(ValueError):
        eq_by_sampling(mq.fn, 8, trials=0)


def test_scripted():
    mq, eq = oracles_from_target(SMALL)
    script = scripted_eq(["11", "00"], eq, mq.fn)
    zero = constant(2, 0, 3)
    assert script(zero).counterexample == "11"
    with pytest.raises(OracleError):
        script(zero)
    assert script(SMALL).equal
