"""Scenarios, allocations, deals and utility functions.

All utility values are exact rationals (:class:`fractions.Fraction`); nothing
in the package ever rounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Agent = str
Resource = str
Bundle = frozenset

MAX_EXPLICIT_RESOURCES = 12


class MaraError(Exception):
    """Base class for all errors raised by this package."""


class AllocationError(MaraError, ValueError):
    pass


class DuplicateResourceError(AllocationError):
    def __init__(self, resource: Resource):
        super().__init__(f"resource {resource!r} assigned to more than one agent")
        self.resource = resource


class MissingResourceError(AllocationError):
    def __init__(self, resource: Resource):
        super().__init__(f"resource {resource!r} is not assigned to any agent")
        self.resource = resource


class UnknownAgentError(AllocationError):
    def __init__(self, agent):
        super().__init__(f"unknown agent {agent!r}")
        self.agent = agent


class UnknownResourceError(AllocationError):
    def __init__(self, resource):
        super().__init__(f"unknown resource {resource!r}")
        self.resource = resource


class ScenarioError(MaraError, ValueError):
    pass


class NonTotalExplicitTableError(ScenarioError):
    pass


class DealError(MaraError, ValueError):
    pass


class MidpointMismatchError(DealError):
    pass


class DegenerateCompositionError(DealError):
    pass


def to_rational(value) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Accepts ints, Fractions, Decimals, strings (``"7"``, ``"-3/4"``, ``"9.5"``)
    and floats. Floats go through their shortest repr, so ``7.5`` becomes
    ``15/2`` rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not utility values")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(value: Fraction) -> str:
    """``"p/q"``, or just ``"p"`` for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def bundle_key(bundle: Iterable[Resource]) -> str:
    """Canonical table key: identifiers sorted lexicographically, comma-joined."""
    return ",".join(sorted(bundle))


def all_bundles(resources: Iterable[Resource]) -> Iterator[frozenset]:
    """Every subset of ``resources``, smallest first."""
    resources = tuple(resources)
    for size in range(len(resources) + 1):
        for combo in itertools.combinations(resources, size):
            yield frozenset(combo)


@dataclass(frozen=True)
class UtilityFunction:
    """A utility function over bundles.

    ``kind`` is ``"explicit"`` (``values`` maps every bundle, as a frozenset,
    to its value) or ``"additive"`` (``values`` maps single resources to
    their values and a bundle is worth the sum).
    """

    kind: str
    values: Mapping

    def __post_init__(self):
        if self.kind not in ("explicit", "additive"):
            raise ScenarioError(f"unknown utility representation {self.kind!r}")
        if self.kind == "explicit":
            table = {frozenset(k): to_rational(v) for k, v in self.values.items()}
        else:
            table = {r: to_rational(v) for r, v in self.values.items()}
        object.__setattr__(self, "values", table)

    @classmethod
    def explicit(cls, values: Mapping) -> "UtilityFunction":
        return cls("explicit", values)

    @classmethod
    def additive(cls, values: Mapping) -> "UtilityFunction":
        return cls("additive", values)

    def __call__(self, bundle: Iterable[Resource]) -> Fraction:
        if self.kind == "explicit":
            return self.values[frozenset(bundle)]
        return sum((self.values[r] for r in bundle), Fraction(0))

    def to_explicit(self, resources: Iterable[Resource]) -> "UtilityFunction":
        """Tabulate this function over every subset of ``resources``."""
        return UtilityFunction.explicit({b: self(b) for b in all_bundles(resources)})


@dataclass(frozen=True)
class Scenario:
    agents: tuple
    resources: tuple
    utilities: Mapping[Agent, UtilityFunction]
    _agent_index: dict = field(init=False, repr=False, compare=False)
    _resource_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        agents = tuple(self.agents)
        resources = tuple(self.resources)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "resources", resources)
        if len(agents) < 2:
            raise ScenarioError("a scenario needs at least two agents")
        if len(resources) < 1:
            raise ScenarioError("a scenario needs at least one resource")
        if len(set(agents)) != len(agents):
            raise ScenarioError("agent identifiers must be unique")
        if len(set(resources)) != len(resources):
            raise ScenarioError("resource identifiers must be unique")
        if set(self.utilities) != set(agents):
            raise ScenarioError("every agent needs exactly one utility function")
        resource_set = frozenset(resources)
        for agent in agents:
            u = self.utilities[agent]
            if u.kind == "additive":
                if set(u.values) != resource_set:
                    raise ScenarioError(
                        f"additive utility of agent {agent!r} must value exactly the scenario resources"
                    )
            else:
                if len(resources) > MAX_EXPLICIT_RESOURCES:
                    raise ScenarioError(
                        f"explicit utility tables are limited to {MAX_EXPLICIT_RESOURCES} resources"
                    )
                for key in u.values:
                    if not key <= resource_set:
                        raise UnknownResourceError(sorted(key - resource_set)[0])
                if len(u.values) != 2 ** len(resources):
                    raise NonTotalExplicitTableError(
                        f"explicit utility of agent {agent!r} is not total over all bundles"
                    )
        object.__setattr__(self, "utilities", {a: self.utilities[a] for a in agents})
        object.__setattr__(self, "_agent_index", {a: i for i, a in enumerate(agents)})
        object.__setattr__(self, "_resource_set", resource_set)

    @property
    def resource_set(self) -> frozenset:
        return self._resource_set

    def agent_index(self, agent: Agent) -> int:
        try:
            return self._agent_index[agent]
        except KeyError:
            raise UnknownAgentError(agent) from None

    @property
    def allocation_count(self) -> int:
        return len(self.agents) ** len(self.resources)


@dataclass(frozen=True)
class Allocation:
    """An assignment of every resource to exactly one agent.

    ``bundles`` is aligned with ``agents``. Build instances through
    :func:`validate_allocation` or :meth:`from_owners`; the constructor does
    not check the partition property.
    """

    agents: tuple
    bundles: tuple

    def __getitem__(self, agent: Agent) -> frozenset:
        try:
            return self.bundles[self.agents.index(agent)]
        except ValueError:
            raise UnknownAgentError(agent) from None

    def as_dict(self) -> dict:
        return dict(zip(self.agents, self.bundles))

    def owner(self, resource: Resource) -> Agent:
        for agent, bundle in zip(self.agents, self.bundles):
            if resource in bundle:
                return agent
        raise UnknownResourceError(resource)

    def owners(self, resources: Iterable[Resource]) -> tuple:
        """Owner index of each resource, in the given resource order."""
        where = {}
        for i, bundle in enumerate(self.bundles):
            for r in bundle:
                where[r] = i
        return tuple(where[r] for r in resources)

    @classmethod
    def from_owners(cls, scenario: Scenario, owners: Iterable[int]) -> "Allocation":
        """Allocation giving ``scenario.resources[k]`` to agent index ``owners[k]``."""
        held = [[] for _ in scenario.agents]
        for resource, i in zip(scenario.resources, owners):
            held[i].append(resource)
        return cls(scenario.agents, tuple(frozenset(b) for b in held))

    def describe(self) -> str:
        parts = []
        for agent, bundle in zip(self.agents, self.bundles):
            parts.append(f"{agent}:{{{bundle_key(bundle)}}}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Allocation({self.describe()})"


def validate_allocation(scenario: Scenario, bundles: Mapping) -> Allocation:
    """Check that ``bundles`` partitions the scenario's resources over its agents."""
    for agent in bundles:
        if agent not in scenario._agent_index:
            raise UnknownAgentError(agent)
    for agent in scenario.agents:
        if agent not in bundles:
            raise UnknownAgentError(agent)
    seen = set()
    for agent in scenario.agents:
        for r in bundles[agent]:
            if r not in scenario.resource_set:
                raise UnknownResourceError(r)
            if r in seen:
                raise DuplicateResourceError(r)
            seen.add(r)
    for r in scenario.resources:
        if r not in seen:
            raise MissingResourceError(r)
    return Allocation(scenario.agents, tuple(frozenset(bundles[a]) for a in scenario.agents))


def utility_of(scenario: Scenario, agent: Agent, bundle: Iterable[Resource]) -> Fraction:
    """Value agent ``agent`` assigns to ``bundle``."""
    if agent not in scenario._agent_index:
        raise UnknownAgentError(agent)
    bundle = frozenset(bundle)
    extra = bundle - scenario.resource_set
    if extra:
        raise UnknownResourceError(sorted(extra)[0])
    return scenario.utilities[agent](bundle)


def utility_profile(scenario: Scenario, alloc: Allocation) -> tuple:
    """Per-agent utilities of ``alloc`` in agent order."""
    return tuple(scenario.utilities[a](b) for a, b in zip(alloc.agents, alloc.bundles))


@dataclass(frozen=True)
class UtilityClassification:
    non_negative: bool
    positive: bool
    monotonic: bool
    additive: bool
    zero_one: bool
    dichotomous: bool


def classify_utility(scenario: Scenario, agent: Agent) -> UtilityClassification:
    """Decide class membership of an agent's utility by exhaustive check."""
    u = scenario.utilities[scenario.agents[scenario.agent_index(agent)]]
    bundles = list(all_bundles(scenario.resources))
    value = {b: u(b) for b in bundles}
    singles = {r: value[frozenset([r])] for r in scenario.resources}

    non_negative = all(v >= 0 for v in value.values())
    positive = non_negative and all(v != 0 for b, v in value.items() if b)
    # R1 <= R2 for all pairs reduces to single-resource extensions
    monotonic = all(
        value[b] <= value[b | {r}] for b in bundles for r in scenario.resources if r not in b
    )
    additive = all(value[b] == sum((singles[r] for r in b), Fraction(0)) for b in bundles)
    zero_one = additive and all(v in (0, 1) for v in singles.values())
    dichotomous = all(v in (0, 1) for v in value.values())
    return UtilityClassification(non_negative, positive, monotonic, additive, zero_one, dichotomous)


@dataclass(frozen=True)
class Deal:
    before: Allocation
    after: Allocation

    def __post_init__(self):
        if self.before.agents != self.after.agents:
            raise DealError("both allocations of a deal must range over the same agents")
        if self.before == self.after:
            raise DealError("a deal needs two distinct allocations")

    @property
    def involved_agents(self) -> frozenset:
        return frozenset(
            a
            for a, b0, b1 in zip(self.before.agents, self.before.bundles, self.after.bundles)
            if b0 != b1
        )

    def involved_indices(self) -> tuple:
        return tuple(
            i for i, (b0, b1) in enumerate(zip(self.before.bundles, self.after.bundles)) if b0 != b1
        )

    def __repr__(self) -> str:
        return f"Deal({self.before.describe()} -> {self.after.describe()})"


@dataclass(frozen=True)
class DealStructure:
    involved_agents: frozenset
    moved_resource_count: int
    is_one_deal: bool
    is_swap: bool
    is_cluster: bool
    is_multiagent: bool
    is_independently_decomposable: bool


def _moves(deal: Deal) -> list:
    """(resource, giver, receiver) for every resource that changes hands."""
    before = deal.before.as_dict()
    after = deal.after.as_dict()
    owner_before = {r: a for a, b in before.items() for r in b}
    owner_after = {r: a for a, b in after.items() for r in b}
    return [
        (r, owner_before[r], owner_after[r])
        for r in sorted(owner_before)
        if owner_before[r] != owner_after[r]
    ]


def decomposition(deal: Deal):
    """Return ``(d1, d2)`` with disjoint involved agents and ``d1 o d2 == deal``, or None.

    Searches every nonempty proper subset of the involved agents for an
    intermediate allocation.
    """
    involved = deal.involved_indices()
    before, after = deal.before.bundles, deal.after.bundles
    for size in range(1, len(involved)):
        for subset in itertools.combinations(involved, size):
            chosen = set(subset)
            middle = tuple(after[i] if i in chosen else before[i] for i in range(len(before)))
            # partition check: all bundles disjoint and covering
            total = sum(len(b) for b in middle)
            union = frozenset().union(*middle)
            if total != len(union) or union != frozenset().union(*before):
                continue
            mid = Allocation(deal.before.agents, middle)
            if mid == deal.before or mid == deal.after:
                continue
            return Deal(deal.before, mid), Deal(mid, deal.after)
    return None


def classify_deal(deal: Deal) -> DealStructure:
    moves = _moves(deal)
    involved = deal.involved_agents
    givers = {g for _, g, _ in moves}
    receivers = {t for _, _, t in moves}
    pair_counts: dict = {}
    for _, g, t in moves:
        pair_counts[(g, t)] = pair_counts.get((g, t), 0) + 1

    two = len(involved) == 2
    one_deal = len(moves) == 1
    swap = (
        two
        and len(moves) == 2
        and len(pair_counts) == 2
        and all(n == 1 for n in pair_counts.values())
    )
    cluster = two and len(givers) == 1 and len(receivers) == 1
    multiagent = all(n <= 1 for n in pair_counts.values())
    return DealStructure(
        involved_agents=involved,
        moved_resource_count=len(moves),
        is_one_deal=one_deal,
        is_swap=swap,
        is_cluster=cluster,
        is_multiagent=multiagent,
        is_independently_decomposable=decomposition(deal) is not None,
    )


def compose(d1: Deal, d2: Deal) -> Deal:
    if d1.after != d2.before:
        raise MidpointMismatchError("first deal must end where the second one starts")
    if d1.before == d2.after:
        raise DegenerateCompositionError("composition returns to the starting allocation")
    return Deal(d1.before, d2.after)
