"""Random scenarios per utility class, and the adversarial necessity constructions."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Allocation,
    Deal,
    MaraError,
    Scenario,
    UtilityFunction,
    all_bundles,
    decomposition,
    to_rational,
    utility_profile,
)

UTILITY_CLASSES = (
    "unrestricted",
    "non_negative",
    "positive",
    "monotonic",
    "additive",
    "zero_one",
    "dichotomous",
)

NECESSITY_VARIANTS = ("monotonic", "dichotomous", "egalitarian")


class InvalidSpecError(MaraError, ValueError):
    pass


class DecomposableDealError(MaraError, ValueError):
    pass


class EpsilonOutOfRangeError(MaraError, ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    agent_count: int
    resource_count: int
    utility_class: str = "unrestricted"
    value_range: tuple = (-10, 10)
    seed: int = 0


def agent_names(n: int) -> tuple:
    return tuple(str(i + 1) for i in range(n))


def resource_names(m: int) -> tuple:
    return tuple(f"r{k + 1}" for k in range(m))


def _check_spec(spec: GeneratorSpec) -> None:
    if spec.utility_class not in UTILITY_CLASSES:
        raise InvalidSpecError(f"unknown utility class {spec.utility_class!r}")
    if spec.agent_count < 2:
        raise InvalidSpecError("need at least two agents")
    if spec.resource_count < 1:
        raise InvalidSpecError("need at least one resource")
    if not 0 <= spec.seed < 2**64:
        raise InvalidSpecError("seed must be a 64-bit unsigned integer")
    if spec.utility_class in ("zero_one", "dichotomous"):
        return
    lo, hi = spec.value_range
    if lo > hi:
        raise InvalidSpecError("empty value range")
    if spec.utility_class == "non_negative" and hi < 0:
        raise InvalidSpecError("non-negative utilities need an upper bound >= 0")
    if spec.utility_class == "positive" and hi < 1:
        raise InvalidSpecError("positive utilities need an upper bound >= 1")


def _random_utility(rng: random.Random, spec: GeneratorSpec, resources: tuple) -> UtilityFunction:
    cls = spec.utility_class
    lo, hi = spec.value_range
    if cls == "additive":
        return UtilityFunction.additive({r: rng.randint(lo, hi) for r in resources})
    if cls == "zero_one":
        return UtilityFunction.additive({r: rng.randint(0, 1) for r in resources})
    if cls == "dichotomous":
        return UtilityFunction.explicit({b: rng.randint(0, 1) for b in all_bundles(resources)})

    table = {}
    for b in all_bundles(resources):
        if cls == "unrestricted":
            table[b] = rng.randint(lo, hi)
        elif cls == "non_negative":
            table[b] = rng.randint(max(lo, 0), hi)
        elif cls == "positive":
            table[b] = rng.randint(max(lo, 1), hi) if b else rng.randint(max(lo, 0), hi)
        else:
            # monotonic: running max over the immediate subsets, smallest bundles first
            draw = rng.randint(lo, hi)
            table[b] = max([draw] + [table[b - {r}] for r in b])
    return UtilityFunction.explicit(table)


def generate(spec: GeneratorSpec) -> Scenario:
    """A random scenario whose utility functions all belong to ``spec.utility_class``."""
    _check_spec(spec)
    rng = random.Random(spec.seed)
    agents = agent_names(spec.agent_count)
    resources = resource_names(spec.resource_count)
    utilities = {a: _random_utility(rng, spec, resources) for a in agents}
    return Scenario(agents, resources, utilities)


def random_allocation(scenario: Scenario, rng: random.Random) -> Allocation:
    owners = [rng.randrange(len(scenario.agents)) for _ in scenario.resources]
    return Allocation.from_owners(scenario, owners)


def random_deal(scenario: Scenario, rng: random.Random, *, decomposable: bool | None = False) -> Deal:
    """A random deal; by default one that is not independently decomposable."""
    while True:
        a = random_allocation(scenario, rng)
        b = random_allocation(scenario, rng)
        if a == b:
            continue
        deal = Deal(a, b)
        if decomposable is None or (decomposition(deal) is not None) == decomposable:
            return deal


@dataclass(frozen=True)
class NecessityInstance:
    scenario: Scenario
    initial: Allocation
    deal: Deal
    variant: str
    distinguished_agent: str
    epsilon: Fraction | None


def necessity_construction(
    agents,
    resources,
    deal: Deal,
    variant: str = "monotonic",
    epsilon=Fraction(1, 2),
) -> NecessityInstance:
    """Utilities under which ``deal`` is the only way up from its starting allocation.

    Every agent values its bundle in ``deal.after`` and (except one
    distinguished agent ``j`` whose bundle changes) its bundle in
    ``deal.before`` a bit above every other bundle of the same size
    (``monotonic``: ``|R| + epsilon`` vs ``|R|``) or at 1 instead of 0
    (``dichotomous`` and ``egalitarian``). ``j`` is the first agent in
    scenario order whose bundle changes.
    """
    if variant not in NECESSITY_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    agents = tuple(agents)
    resources = tuple(resources)
    if decomposition(deal) is not None:
        raise DecomposableDealError("an independently decomposable deal is never necessary")
    if deal.before.agents != agents:
        raise ValueError("deal agents do not match the given agents")
    eps = None
    if variant == "monotonic":
        eps = to_rational(epsilon)
        if not 0 < eps < 1:
            raise EpsilonOutOfRangeError("epsilon must lie strictly between 0 and 1")

    before, after = deal.before.as_dict(), deal.after.as_dict()
    j = next(a for a in agents if before[a] != after[a])
    utilities = {}
    for i in agents:
        special = {after[i]} | ({before[i]} if i != j else set())
        table = {}
        for b in all_bundles(resources):
            if variant == "monotonic":
                table[b] = len(b) + eps if b in special else Fraction(len(b))
            else:
                table[b] = 1 if b in special else 0
        utilities[i] = UtilityFunction.explicit(table)
    scenario = Scenario(agents, resources, utilities)
    _verify_construction(scenario, deal, variant, eps)
    return NecessityInstance(scenario, deal.before, deal, variant, j, eps)


def predicted_welfare(agent_count: int, resource_count: int, variant: str, epsilon=None) -> dict:
    """Welfare values the construction is designed to produce."""
    n, m = agent_count, resource_count
    if variant == "monotonic":
        eps = to_rational(epsilon)
        top = m + eps * n
        return {"utilitarian_after": top, "utilitarian_before": top - eps}
    if variant == "dichotomous":
        return {"utilitarian_after": Fraction(n), "utilitarian_before": Fraction(n - 1)}
    return {"egalitarian_after": Fraction(1), "egalitarian_before": Fraction(0)}


def _verify_construction(scenario: Scenario, deal: Deal, variant: str, eps) -> None:
    before = utility_profile(scenario, deal.before)
    after = utility_profile(scenario, deal.after)
    want = predicted_welfare(len(scenario.agents), len(scenario.resources), variant, eps)
    if variant == "egalitarian":
        got = {"egalitarian_after": min(after), "egalitarian_before": min(before)}
    else:
        got = {"utilitarian_after": sum(after), "utilitarian_before": sum(before)}
    if got != want:
        raise AssertionError(f"construction produced {got}, expected {want}")
