"""Social welfare measures and orderings over allocations."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from .core import Allocation, Scenario, utility_profile


class Leximin(enum.Enum):
    PRECEDES = "precedes"
    EQUAL = "equal"
    FOLLOWS = "follows"


class Lorenz(enum.Enum):
    DOMINATED_BY = "dominated_by"
    DOMINATES = "dominates"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class WelfareSnapshot:
    utilitarian: Fraction
    egalitarian: Fraction
    elitist: Fraction
    ordered_vector: tuple
    # per-agent utilities in scenario agent order
    utilities: tuple

    @classmethod
    def from_profile(cls, profile) -> "WelfareSnapshot":
        profile = tuple(profile)
        ordered = tuple(sorted(profile))
        return cls(
            utilitarian=sum(profile, Fraction(0)),
            egalitarian=ordered[0],
            elitist=ordered[-1],
            ordered_vector=ordered,
            utilities=profile,
        )


def ordered_vector(profile) -> tuple:
    return tuple(sorted(profile))


def snapshot(scenario: Scenario, alloc: Allocation) -> WelfareSnapshot:
    return WelfareSnapshot.from_profile(utility_profile(scenario, alloc))


def utilitarian(scenario: Scenario, alloc: Allocation) -> Fraction:
    return sum(utility_profile(scenario, alloc), Fraction(0))


def egalitarian(scenario: Scenario, alloc: Allocation) -> Fraction:
    return min(utility_profile(scenario, alloc))


def elitist(scenario: Scenario, alloc: Allocation) -> Fraction:
    return max(utility_profile(scenario, alloc))


def lorenz_vector(profile) -> tuple:
    """Prefix sums of the ordered utility vector."""
    return tuple(accumulate(sorted(profile)))


def compare_leximin_vectors(x, y) -> Leximin:
    """Lexicographic comparison of two equal-length ordered vectors."""
    x, y = tuple(x), tuple(y)
    if x == y:
        return Leximin.EQUAL
    return Leximin.PRECEDES if x < y else Leximin.FOLLOWS


def compare_lorenz_vectors(x, y) -> Lorenz:
    """Compare ordered vectors ``x`` and ``y`` by Lorenz domination.

    ``DOMINATED_BY`` means ``x`` is Lorenz dominated by ``y``.
    """
    below = above = False
    for a, b in zip(accumulate(x), accumulate(y)):
        if a < b:
            below = True
        elif a > b:
            above = True
        if below and above:
            return Lorenz.INCOMPARABLE
    if below:
        return Lorenz.DOMINATED_BY
    if above:
        return Lorenz.DOMINATES
    return Lorenz.EQUIVALENT


def leximin_compare(scenario: Scenario, a1: Allocation, a2: Allocation) -> Leximin:
    return compare_leximin_vectors(snapshot(scenario, a1).ordered_vector, snapshot(scenario, a2).ordered_vector)


def lorenz_compare(scenario: Scenario, a1: Allocation, a2: Allocation) -> Lorenz:
    return compare_lorenz_vectors(snapshot(scenario, a1).ordered_vector, snapshot(scenario, a2).ordered_vector)


def profile_pareto_improves(p1, p2) -> bool:
    return sum(p1) < sum(p2) and all(a <= b for a, b in zip(p1, p2))


def pareto_improves(scenario: Scenario, a1: Allocation, a2: Allocation) -> bool:
    """True iff moving from ``a1`` to ``a2`` raises the utility sum and hurts nobody."""
    return profile_pareto_improves(utility_profile(scenario, a1), utility_profile(scenario, a2))


@dataclass(frozen=True)
class EnvyReport:
    is_envy_free: bool
    envious_count: int
    total_envy: Fraction
    max_envy: Fraction
    # agent -> how much more it values the best other bundle than its own
    per_agent: dict


def envy_report(scenario: Scenario, alloc: Allocation) -> EnvyReport:
    per_agent = {}
    for agent, own in zip(alloc.agents, alloc.bundles):
        u = scenario.utilities[agent]
        mine = u(own)
        best_other = max(u(b) for a, b in zip(alloc.agents, alloc.bundles) if a != agent)
        per_agent[agent] = max(best_other - mine, Fraction(0))
    envious = sum(1 for v in per_agent.values() if v > 0)
    return EnvyReport(
        is_envy_free=envious == 0,
        envious_count=envious,
        total_envy=sum(per_agent.values(), Fraction(0)),
        max_envy=max(per_agent.values()),
        per_agent=per_agent,
    )
