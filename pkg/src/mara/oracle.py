"""Ground truth by exhaustive enumeration of all allocations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .core import Allocation, MaraError, Scenario, utility_profile
from .welfare import Lorenz, compare_lorenz_vectors, envy_report, profile_pareto_improves

MAX_ALLOCATIONS = 2**20


class TooLargeError(MaraError, ValueError):
    pass


def check_enumerable(scenario: Scenario) -> None:
    if scenario.allocation_count > MAX_ALLOCATIONS:
        raise TooLargeError(
            f"{len(scenario.agents)}^{len(scenario.resources)} allocations exceeds {MAX_ALLOCATIONS}"
        )


def owner_tuples(scenario: Scenario) -> Iterator[tuple]:
    """Owner-index tuples in canonical mixed-radix order (first resource most significant)."""
    return itertools.product(range(len(scenario.agents)), repeat=len(scenario.resources))


def enumerate_allocations(scenario: Scenario) -> Iterator[Allocation]:
    """Every allocation of the scenario, each exactly once, in canonical order."""
    check_enumerable(scenario)
    for owners in owner_tuples(scenario):
        yield Allocation.from_owners(scenario, owners)


class AllocationSpace:
    """All allocations of a scenario with their utility profiles, indexed canonically."""

    def __init__(self, scenario: Scenario):
        check_enumerable(scenario)
        self.scenario = scenario
        self.owners = list(owner_tuples(scenario))
        self.allocations = [Allocation.from_owners(scenario, o) for o in self.owners]
        self.profiles = [utility_profile(scenario, a) for a in self.allocations]
        self.index = {a: i for i, a in enumerate(self.allocations)}
        self.radix = len(scenario.agents)

    def __len__(self) -> int:
        return len(self.allocations)

    def index_of(self, alloc: Allocation) -> int:
        return self.index[alloc]


@dataclass(frozen=True)
class OptimaReport:
    max_utilitarian: Fraction
    utilitarian_optimal: frozenset
    max_egalitarian: Fraction
    egalitarian_optimal: frozenset
    max_elitist: Fraction
    elitist_optimal: frozenset
    leximin_maximal: frozenset
    pareto_optimal: frozenset
    lorenz_optimal: frozenset
    envy_free: frozenset
    allocation_count: int


def compute_optima(scenario: Scenario, space: AllocationSpace | None = None) -> OptimaReport:
    """Optimal values and optimal allocation sets for every welfare notion.

    Pareto and Lorenz optimality use plain pairwise comparison over all
    allocations.
    """
    space = space or AllocationSpace(scenario)
    allocs, profiles = space.allocations, space.profiles
    sums = [sum(p, Fraction(0)) for p in profiles]
    mins = [min(p) for p in profiles]
    maxs = [max(p) for p in profiles]
    ordered = [tuple(sorted(p)) for p in profiles]

    max_u, max_e, max_el = max(sums), max(mins), max(maxs)
    best_vector = max(ordered)

    pareto = []
    for i, p in enumerate(profiles):
        if not any(profile_pareto_improves(p, q) for q in profiles):
            pareto.append(allocs[i])

    lorenz = []
    for i, v in enumerate(ordered):
        dominated = any(compare_lorenz_vectors(v, w) is Lorenz.DOMINATED_BY for w in ordered)
        if not dominated:
            lorenz.append(allocs[i])

    return OptimaReport(
        max_utilitarian=max_u,
        utilitarian_optimal=frozenset(a for a, s in zip(allocs, sums) if s == max_u),
        max_egalitarian=max_e,
        egalitarian_optimal=frozenset(a for a, m in zip(allocs, mins) if m == max_e),
        max_elitist=max_el,
        elitist_optimal=frozenset(a for a, m in zip(allocs, maxs) if m == max_el),
        leximin_maximal=frozenset(a for a, v in zip(allocs, ordered) if v == best_vector),
        pareto_optimal=frozenset(pareto),
        lorenz_optimal=frozenset(lorenz),
        envy_free=frozenset(a for a in allocs if envy_report(scenario, a).is_envy_free),
        allocation_count=len(allocs),
    )
