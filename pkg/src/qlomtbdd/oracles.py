"""Membership and equivalence oracles with query counters."""

from __future__ import annotations

import random
from typing import Callable, Iterable

from . import kernels
from .core import EqResult, Omtbdd, equivalent, evaluate, reduce


class OracleError(ValueError):
    pass


class MembershipOracle:
    """Counts every call; ``fn`` must be deterministic."""

    def __init__(self, fn: Callable[[str], int], m: int | None = None):
        self.fn = fn
        self.m = m
        self.calls = 0

    def __call__(self, a: str) -> int:
        self.calls += 1
        return self.fn(a)


class CachedMembershipOracle(MembershipOracle):
    """Memoizing wrapper.

    ``calls`` counts every request made to the wrapper; ``distinct`` counts the
    requests forwarded to the wrapped oracle.
    """

    def __init__(self, inner: Callable[[str], int]):
        super().__init__(inner, getattr(inner, "m", None))
        self.cache: dict[str, int] = {}

    @property
    def distinct(self) -> int:
        return len(self.cache)

    def __call__(self, a: str) -> int:
        self.calls += 1
        try:
            return self.cache[a]
        except KeyError:
            value = self.cache[a] = self.fn(a)
            return value


def with_cache(mq: Callable[[str], int]) -> CachedMembershipOracle:
    return CachedMembershipOracle(mq)


class EquivalenceOracle:
    def __init__(self, fn: Callable[[Omtbdd], EqResult]):
        self.fn = fn
        self.calls = 0

    def __call__(self, h: Omtbdd) -> EqResult:
        self.calls += 1
        return self.fn(h)


def oracles_from_target(d: Omtbdd) -> tuple[MembershipOracle, EquivalenceOracle]:
    """Exact oracles for a known diagram."""
    target = reduce(d)
    flat, root = target.flat(), target.root
    evaluate_fn = kernels.evaluate

    def member(a: str) -> int:
        if len(a) != target.m:
            raise ValueError(f"query has length {len(a)}, expected {target.m}")
        return evaluate_fn(flat, root, a)

    return MembershipOracle(member, target.m), EquivalenceOracle(lambda h: equivalent(h, target))


def eq_from_dataset(samples: Iterable[tuple[str, int]]) -> EquivalenceOracle:
    """Answers YES when the hypothesis agrees with every sample.

    Otherwise the first disagreeing sample, in input order, is the
    counterexample.  Repeated inputs must carry the same label.
    """
    seen: dict[str, int] = {}
    for lineno, (bits, label) in enumerate(samples):
        prev = seen.get(bits)
        if prev is not None and prev != label:
            raise OracleError(f"sample {lineno}: input {bits} labeled both {prev} and {label}")
        seen.setdefault(bits, label)
    inputs = list(seen)
    labels = [seen[b] for b in inputs]

    def check(h: Omtbdd) -> EqResult:
        values = kernels.evaluate_many(h.flat(), h.root, inputs)
        for bits, got, want in zip(inputs, values, labels):
            if got != want:
                return EqResult(False, bits)
        return EqResult(True)

    oracle = EquivalenceOracle(check)
    oracle.samples = list(zip(inputs, labels))
    return oracle


def eq_by_sampling(mq: Callable[[str], int], m: int, trials: int, seed: int = 0) -> EquivalenceOracle:
    """Random-testing surrogate: YES after ``trials`` agreeing uniform draws.

    Draws go to ``mq`` directly; wrap it separately if those should be counted
    apart from the learner's queries.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)

    def check(h: Omtbdd) -> EqResult:
        for _ in range(trials):
            a = format(rng.getrandbits(m), f"0{m}b") if m else ""
            if evaluate(h, a) != mq(a):
                return EqResult(False, a)
        return EqResult(True)

    return EquivalenceOracle(check)


def scripted_eq(script: Iterable[str], fallback: EquivalenceOracle,
                mq: Callable[[str], int]) -> EquivalenceOracle:
    """Hands out the scripted counterexamples first, then defers to ``fallback``.

    A scripted string that is not a counterexample for the current hypothesis
    raises :class:`OracleError`.
    """
    queue = list(script)

    def check(h: Omtbdd) -> EqResult:
        if queue:
            e = queue.pop(0)
            if evaluate(h, e) == mq(e):
                raise OracleError(f"scripted counterexample {e} agrees with the hypothesis")
            return EqResult(False, e)
        return fallback.fn(h)

    return EquivalenceOracle(check)
