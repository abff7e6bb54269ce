"""Exact query learning of ordered multi-terminal binary decision diagrams."""

from .checker import ConditionChecker, ConditionReport, check_conditions
from .core import (
    EqResult, FormatError, Omtbdd, constant, cro, decode, encode, equivalent, evaluate,
    export_dot, flip_first, from_function, pre, reduce, suf, trace_to_node,
)
from .ctree import ClassificationTree, Leaf, MuLeaf, Outcome, SingleTest, TwinTest
from .generator import GenerationError, GenParams, generate
from .kernels import BACKEND
from .learner import InvariantViolation, ProtocolError, QLearner, find_flip, learn, query_bounds
from .omtbddas import LAMBDA, Omtbddas, StructureError
from .oracles import (
    CachedMembershipOracle, EquivalenceOracle, MembershipOracle, OracleError,
    eq_by_sampling, eq_from_dataset, oracles_from_target, scripted_eq, with_cache,
)

__all__ = [
    "BACKEND", "CachedMembershipOracle", "ClassificationTree", "ConditionChecker", "ConditionReport",
    "EqResult", "EquivalenceOracle", "FormatError", "GenParams", "GenerationError",
    "InvariantViolation", "LAMBDA", "Leaf", "MembershipOracle", "MuLeaf", "Omtbdd", "Omtbddas",
    "OracleError", "Outcome", "ProtocolError", "QLearner", "SingleTest", "StructureError", "TwinTest",
    "check_conditions", "constant", "cro", "decode", "encode", "eq_by_sampling", "eq_from_dataset",
    "equivalent", "evaluate", "export_dot", "find_flip", "flip_first", "from_function", "generate",
    "learn", "oracles_from_target", "pre", "query_bounds", "reduce", "scripted_eq", "suf",
    "trace_to_node", "with_cache",
]
