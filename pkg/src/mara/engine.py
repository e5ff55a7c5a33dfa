"""Negotiation dynamics: find admissible deals, pick one, repeat until stuck."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Optional

from .core import Allocation, Deal, Scenario, classify_deal
from .oracle import AllocationSpace
from .rationality import Criterion, PaymentFunction, local_admits, witness_payment
from .welfare import Leximin, Lorenz, WelfareSnapshot, compare_leximin_vectors, compare_lorenz_vectors


class StructuralFilter(enum.Enum):
    ANY = "any"
    ONE_DEAL = "one_deal"
    SWAP = "swap"
    CLUSTER = "cluster"
    NOT_INDEPENDENTLY_DECOMPOSABLE = "not_independently_decomposable"

    @classmethod
    def parse(cls, name: "str | StructuralFilter") -> "StructuralFilter":
        if isinstance(name, cls):
            return name
        key = name.lower().replace("-", "_")
        if key == "not_decomposable":
            return cls.NOT_INDEPENDENTLY_DECOMPOSABLE
        return cls(key)


class PolicyKind(enum.Enum):
    UNIFORM_RANDOM = "uniform_random"
    FIRST_IN_CANONICAL_ORDER = "first_in_canonical_order"
    GREEDY_WELFARE_GAIN = "greedy_welfare_gain"


_POLICY_ALIASES = {
    "random": PolicyKind.UNIFORM_RANDOM,
    "first": PolicyKind.FIRST_IN_CANONICAL_ORDER,
    "greedy": PolicyKind.GREEDY_WELFARE_GAIN,
}


@dataclass(frozen=True)
class Policy:
    kind: PolicyKind = PolicyKind.UNIFORM_RANDOM
    rng_seed: int = 0

    def __post_init__(self):
        kind = self.kind
        if isinstance(kind, str):
            kind = _POLICY_ALIASES.get(kind) or PolicyKind(kind)
        object.__setattr__(self, "kind", kind)
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")


class TerminationReason(enum.Enum):
    NO_ADMISSIBLE_DEAL = "no_admissible_deal"
    STEP_CAP_REACHED = "step_cap_reached"


@dataclass(frozen=True)
class Step:
    deal: Deal
    payment: Optional[PaymentFunction]
    after: WelfareSnapshot


@dataclass
class NegotiationTrace:
    initial: Allocation
    initial_snapshot: WelfareSnapshot
    steps: list = field(default_factory=list)
    terminal: Optional[Allocation] = None
    termination_reason: Optional[TerminationReason] = None
    criterion: Optional[Criterion] = None
    filter: Optional[StructuralFilter] = None
    policy: Optional[Policy] = None

    @property
    def terminal_snapshot(self) -> WelfareSnapshot:
        return self.steps[-1].after if self.steps else self.initial_snapshot

    def snapshots(self) -> list:
        return [self.initial_snapshot] + [s.after for s in self.steps]


def _structure_ok(flt: StructuralFilter, o0: tuple, o1: tuple, deal_factory) -> bool:
    if flt is StructuralFilter.ANY:
        return True
    diff = [k for k in range(len(o0)) if o0[k] != o1[k]]
    if flt is StructuralFilter.ONE_DEAL:
        return len(diff) == 1
    if flt is StructuralFilter.SWAP:
        if len(diff) != 2:
            return False
        k, l = diff
        return o0[k] == o1[l] and o0[l] == o1[k]
    structure = classify_deal(deal_factory())
    if flt is StructuralFilter.CLUSTER:
        return structure.is_cluster
    return not structure.is_independently_decomposable


def _admissible_indices(space: AllocationSpace, current: int, criterion, flt, relaxed_mean=False) -> list:
    o0 = space.owners[current]
    p0 = space.profiles[current]
    agents = space.scenario.agents
    out = []
    for j, o1 in enumerate(space.owners):
        if j == current:
            continue
        p1 = space.profiles[j]
        b0, b1 = space.allocations[current].bundles, space.allocations[j].bundles
        triples = [(agents[i], p0[i], p1[i]) for i in range(len(agents)) if b0[i] != b1[i]]
        moved = sum(1 for k in range(len(o0)) if o0[k] != o1[k])
        if not local_admits(criterion, triples, is_one_deal=moved == 1, relaxed_mean=relaxed_mean):
            continue
        if not _structure_ok(flt, o0, o1, lambda: Deal(space.allocations[current], space.allocations[j])):
            continue
        out.append(j)
    return out


def enumerate_admissible(
    scenario: Scenario,
    current: Allocation,
    criterion,
    filter=StructuralFilter.ANY,
    *,
    space: AllocationSpace | None = None,
    relaxed_mean: bool = False,
) -> list:
    """All deals from ``current`` passing the structural filter and the criterion.

    Deals come in canonical order of their target allocation.
    """
    space = space or AllocationSpace(scenario)
    criterion = Criterion.parse(criterion)
    flt = StructuralFilter.parse(filter)
    i = space.index_of(current)
    return [
        Deal(current, space.allocations[j])
        for j in _admissible_indices(space, i, criterion, flt, relaxed_mean)
    ]


def _greedy_key(criterion: Criterion, profile: tuple):
    ordered = tuple(sorted(profile))
    if criterion is Criterion.EQUITABLE:
        return ordered
    if criterion is Criterion.SIMPLE_PARETO_PIGOU_DALTON or criterion is Criterion.PIGOU_DALTON:
        return (sum(profile), ordered)
    if criterion is Criterion.ELITIST:
        return ordered[-1]
    return sum(profile)


def run_negotiation(
    scenario: Scenario,
    initial: Allocation,
    criterion,
    filter=StructuralFilter.ANY,
    policy: Policy | None = None,
    step_cap: int | None = None,
    *,
    space: AllocationSpace | None = None,
    relaxed_mean: bool = False,
) -> NegotiationTrace:
    """Apply admissible deals chosen by ``policy`` until none is left or ``step_cap`` is hit.

    ``step_cap`` defaults to the number of allocations. Individually rational
    steps carry the even-split payment from :func:`witness_payment`.
    """
    criterion = Criterion.parse(criterion)
    flt = StructuralFilter.parse(filter)
    policy = policy or Policy()
    space = space or AllocationSpace(scenario)
    if step_cap is None:
        step_cap = len(space)
    if step_cap < 1:
        raise ValueError("step_cap must be at least 1")

    rng = random.Random(policy.rng_seed)
    current = space.index_of(initial)
    trace = NegotiationTrace(
        initial=initial,
        initial_snapshot=WelfareSnapshot.from_profile(space.profiles[current]),
        criterion=criterion,
        filter=flt,
        policy=policy,
    )
    reason = TerminationReason.STEP_CAP_REACHED
    for _ in range(step_cap):
        options = _admissible_indices(space, current, criterion, flt, relaxed_mean)
        if not options:
            reason = TerminationReason.NO_ADMISSIBLE_DEAL
            break
        if policy.kind is PolicyKind.UNIFORM_RANDOM:
            nxt = options[rng.randrange(len(options))]
        elif policy.kind is PolicyKind.FIRST_IN_CANONICAL_ORDER:
            nxt = options[0]
        else:
            # max() keeps the first of equal keys, i.e. canonical order
            nxt = max(options, key=lambda j: _greedy_key(criterion, space.profiles[j]))
        deal = Deal(space.allocations[current], space.allocations[nxt])
        payment = witness_payment(scenario, deal) if criterion is Criterion.INDIVIDUALLY_RATIONAL else None
        trace.steps.append(Step(deal, payment, WelfareSnapshot.from_profile(space.profiles[nxt])))
        current = nxt
    else:
        # the cap was used up; a fixed point reached on the last step still counts as one
        if not _admissible_indices(space, current, criterion, flt, relaxed_mean):
            reason = TerminationReason.NO_ADMISSIBLE_DEAL
    trace.terminal = space.allocations[current]
    trace.termination_reason = reason
    return trace


def check_monotone(trace: NegotiationTrace, criterion=None) -> bool:
    """Whether the criterion's progress measure strictly improves at every step.

    Individual and cooperative rationality track utilitarian welfare,
    equitable deals the leximin ordering, simple Pareto-Pigou-Dalton deals
    Lorenz domination. Elitist deals are only checked locally: the best-off
    involved agent must end up better off.
    """
    criterion = Criterion.parse(criterion if criterion is not None else trace.criterion)
    prev = trace.initial_snapshot
    expected_start = trace.initial
    for step in trace.steps:
        if step.deal.before != expected_start:
            return False
        cur = step.after
        if criterion in (Criterion.INDIVIDUALLY_RATIONAL, Criterion.COOPERATIVELY_RATIONAL):
            ok = prev.utilitarian < cur.utilitarian
        elif criterion is Criterion.EQUITABLE:
            ok = compare_leximin_vectors(prev.ordered_vector, cur.ordered_vector) is Leximin.PRECEDES
        elif criterion in (Criterion.SIMPLE_PARETO_PIGOU_DALTON, Criterion.PIGOU_DALTON):
            ok = compare_lorenz_vectors(prev.ordered_vector, cur.ordered_vector) is Lorenz.DOMINATED_BY
        else:
            involved = step.deal.involved_indices()
            ok = max(prev.utilities[i] for i in involved) < max(cur.utilities[i] for i in involved)
        if not ok:
            return False
        prev = cur
        expected_start = step.deal.after
    return True
