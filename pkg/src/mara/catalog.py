"""Small hand-made scenarios that each isolate one phenomenon.

Every function returns ``(scenario, initial_allocation)``. Agents are named
``"1"``, ``"2"``, ... and resources ``"r1"``, ``"r2"``, ...
"""

from __future__ import annotations

from .core import Allocation, Scenario, UtilityFunction, validate_allocation


def _table(r1, r2, both, empty=0):
    return UtilityFunction.explicit(
        {frozenset(): empty, frozenset({"r1"}): r1, frozenset({"r2"}): r2, frozenset({"r1", "r2"}): both}
    )


def _scenario(tables: dict, initial: dict, resources=("r1", "r2")):
    scenario = Scenario(tuple(tables), resources, tables)
    return scenario, validate_allocation(scenario, initial)


def cluster_deal_needed():
    """Two agents; only moving both resources at once raises welfare (7 -> 8)."""
    return _scenario(
        {"1": _table(2, 3, 7), "2": _table(3, 3, 8)},
        {"1": {"r1", "r2"}, "2": set()},
    )


def three_agent_orderings():
    """Three agents, two resources; agent 2 holding everything maximises the utility sum."""
    return _scenario(
        {"1": _table(5, 3, 8), "2": _table(4, 2, 17), "3": _table(2, 6, 7)},
        {"1": set(), "2": {"r1", "r2"}, "3": set()},
    )


def single_resource_transfer():
    """One resource worth 4 to its holder and 7 to the other agent."""
    scenario = Scenario(
        ("1", "2"),
        ("r",),
        {
            "1": UtilityFunction.explicit({frozenset(): 0, frozenset({"r"}): 4}),
            "2": UtilityFunction.explicit({frozenset(): 0, frozenset({"r"}): 7}),
        },
    )
    return scenario, validate_allocation(scenario, {"1": {"r"}, "2": set()})


def least_unequal_not_fairest():
    """Inequality is already minimal, yet swapping raises the worst-off utility 3 -> 5."""
    return _scenario(
        {"1": UtilityFunction.additive({"r1": 3, "r2": 12}), "2": _table(5, 7, 17)},
        {"1": {"r1"}, "2": {"r2"}},
    )


def equitable_after_optimum():
    """Equitable deals remain after the egalitarian optimum has been reached."""
    return _scenario(
        {
            "1": _table(5, 0, 5),
            "2": _table(7, "6.5", "7.5", empty=6),
            "3": _table(9, "8.5", "9.5", empty=8),
        },
        {"1": set(), "2": set(), "3": {"r1", "r2"}},
    )


def lorenz_needs_three_agents():
    """Agent 3 holds everything; only a three-agent deal gives a Lorenz improvement."""
    return _scenario(
        {"1": _table(6, 1, 7), "2": _table(1, 6, 7), "3": _table(1, 1, 10)},
        {"1": set(), "2": set(), "3": {"r1", "r2"}},
    )


def envy_versus_pareto():
    """Identical agents; the envy-free allocations are exactly the non-Pareto-optimal ones."""
    return _scenario(
        {"1": _table(1, 2, 0), "2": _table(1, 2, 0)},
        {"1": {"r1", "r2"}, "2": set()},
    )


def contested_single_resource():
    """Two agents who both want the only resource: no envy-free allocation exists."""
    u = UtilityFunction.explicit({frozenset(): 0, frozenset({"r"}): 1})
    scenario = Scenario(("1", "2"), ("r",), {"1": u, "2": u})
    return scenario, validate_allocation(scenario, {"1": {"r"}, "2": set()})


def allocation(scenario: Scenario, **bundles) -> Allocation:
    """``allocation(s, a1={"r1"}, a2=set())`` with agent ``"k"`` spelled ``ak``."""
    return validate_allocation(scenario, {k[1:]: set(v) for k, v in bundles.items()})


ALL = {
    "cluster_deal_needed": cluster_deal_needed,
    "three_agent_orderings": three_agent_orderings,
    "single_resource_transfer": single_resource_transfer,
    "least_unequal_not_fairest": least_unequal_not_fairest,
    "equitable_after_optimum": equitable_after_optimum,
    "lorenz_needs_three_agents": lorenz_needs_three_agents,
    "envy_versus_pareto": envy_versus_pareto,
    "contested_single_resource": contested_single_resource,
}
