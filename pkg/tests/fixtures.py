"""Shared diagrams for the test suite."""

from qlomtbdd.core import Omtbdd

# Eight-variable, three-valued target consistent with every value quoted in
# the worked learning trace; nodes are named by one of their access strings.
TRACE_TARGET = Omtbdd.from_spec(8, 3, "root", {
    "root": (1, "0", "1"),
    "0": (3, "s2", "011"),
    "1": (5, "101001", "s0"),
    "011": (5, "101001", "01101"),
    "01101": (6, "s1", "s0"),
    "101001": (7, "s1", "s0"),
    "s0": 0, "s1": 1, "s2": 2,
})

TRACE_SCRIPT = ["10100100", "01111100", "01000101", "00100000", "01111010", "10100010"]

# x1 ? (x2 ? 2 : 1) : 0
SMALL = Omtbdd.from_spec(2, 3, "a", {"a": (1, "s0", "b"), "b": (2, "s1", "s2"), "s0": 0, "s1": 1, "s2": 2})

TRACE_UPDATES = ["01000101", "00100000", "01111010", "01111010", "10100010"]


def trace_learner(updates: int):
    """Learner state of the worked trace after the initial hypothesis and ``updates`` updates."""
    from qlomtbdd.learner import QLearner
    from qlomtbdd.oracles import oracles_from_target

    mq, _ = oracles_from_target(TRACE_TARGET)
    learner = QLearner(8, mq, lambda h: None)
    learner.initial_hypothesis("10100100", 1, "01111100", 0)
    for e in TRACE_UPDATES[:updates]:
        learner.update_hypothesis(e, mq.fn(e))
    return learner
