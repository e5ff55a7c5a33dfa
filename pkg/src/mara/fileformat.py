"""JSON scenario files and negotiation trace files.

Scenario layout::

    {"agents": ["1", "2"],
     "resources": ["r1", "r2"],
     "utilities": {
        "1": {"type": "explicit", "values": {"": "0", "r1": "2", "r2": "3", "r1,r2": "7"}},
        "2": {"type": "additive", "values": {"r1": "3", "r2": "3"}}},
     "initial_allocation": {"1": ["r1", "r2"], "2": []}}

Bundle keys are sorted resource identifiers joined by commas (``""`` is the
empty bundle). Values are integers, ``"p/q"`` fractions or exact decimals.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .core import (
    AllocationError,
    MaraError,
    NonTotalExplicitTableError,
    Scenario,
    ScenarioError,
    UtilityFunction,
    bundle_key,
    format_rational,
    to_rational,
    validate_allocation,
)


class ScenarioSyntaxError(MaraError, ValueError):
    pass


class UnknownResourceInBundleKeyError(ScenarioSyntaxError):
    pass


class InvalidAllocationError(ScenarioSyntaxError):
    pass


def _number(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ScenarioSyntaxError(f"{where}: expected a number, got {value!r}")
    try:
        return to_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioSyntaxError(f"{where}: bad number {value!r}") from exc


def _string_list(obj, name: str) -> tuple:
    value = obj.get(name)
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise ScenarioSyntaxError(f"{name!r} must be a list of strings")
    return tuple(value)


def _parse_bundle_key(key: str, resources: frozenset) -> frozenset:
    if key == "":
        return frozenset()
    items = [k.strip() for k in key.split(",")]
    for r in items:
        if r not in resources:
            raise UnknownResourceInBundleKeyError(f"bundle key {key!r} names unknown resource {r!r}")
    if len(set(items)) != len(items):
        raise ScenarioSyntaxError(f"bundle key {key!r} repeats a resource")
    return frozenset(items)


def _parse_utility(agent: str, obj, resources: tuple) -> UtilityFunction:
    if not isinstance(obj, dict) or not isinstance(obj.get("values"), dict):
        raise ScenarioSyntaxError(f"utility of agent {agent!r} must be an object with 'values'")
    kind = obj.get("type")
    rset = frozenset(resources)
    if kind == "additive":
        values = {}
        for r, v in obj["values"].items():
            if r not in rset:
                raise UnknownResourceInBundleKeyError(f"agent {agent!r}: unknown resource {r!r}")
            values[r] = _number(v, f"agent {agent!r}, resource {r!r}")
        missing = [r for r in resources if r not in values]
        if missing:
            raise ScenarioSyntaxError(f"agent {agent!r}: additive utility lacks {missing[0]!r}")
        return UtilityFunction.additive(values)
    if kind == "explicit":
        table = {}
        for key, v in obj["values"].items():
            b = _parse_bundle_key(key, rset)
            if b in table:
                raise ScenarioSyntaxError(f"agent {agent!r}: bundle {key!r} listed twice")
            table[b] = _number(v, f"agent {agent!r}, bundle {key!r}")
        if len(table) != 2 ** len(resources):
            raise NonTotalExplicitTableError(
                f"agent {agent!r}: explicit table has {len(table)} of {2 ** len(resources)} bundles"
            )
        return UtilityFunction.explicit(table)
    raise ScenarioSyntaxError(f"agent {agent!r}: unknown utility type {kind!r}")


def scenario_from_dict(obj: dict):
    if not isinstance(obj, dict):
        raise ScenarioSyntaxError("scenario must be a JSON object")
    agents = _string_list(obj, "agents")
    resources = _string_list(obj, "resources")
    raw = obj.get("utilities")
    if not isinstance(raw, dict):
        raise ScenarioSyntaxError("'utilities' must be an object")
    unknown = set(raw) - set(agents)
    if unknown:
        raise ScenarioSyntaxError(f"utility given for unknown agent {sorted(unknown)[0]!r}")
    missing = [a for a in agents if a not in raw]
    if missing:
        raise ScenarioSyntaxError(f"no utility for agent {missing[0]!r}")
    utilities = {a: _parse_utility(a, raw[a], resources) for a in agents}
    try:
        scenario = Scenario(agents, resources, utilities)
    except NonTotalExplicitTableError:
        raise
    except ScenarioError as exc:
        raise ScenarioSyntaxError(str(exc)) from exc

    initial = None
    if obj.get("initial_allocation") is not None:
        initial = allocation_from_dict(scenario, obj["initial_allocation"])
    return scenario, initial


def allocation_from_dict(scenario: Scenario, obj):
    if not isinstance(obj, dict) or not all(isinstance(v, list) for v in obj.values()):
        raise InvalidAllocationError("an allocation maps each agent to a list of resources")
    try:
        return validate_allocation(scenario, {a: list(v) for a, v in obj.items()})
    except AllocationError as exc:
        raise InvalidAllocationError(str(exc)) from exc


def allocation_to_dict(alloc) -> dict:
    return {a: sorted(b) for a, b in zip(alloc.agents, alloc.bundles)}


def scenario_to_dict(scenario: Scenario, initial=None) -> dict:
    utilities = {}
    for agent in scenario.agents:
        u = scenario.utilities[agent]
        if u.kind == "additive":
            values = {r: format_rational(u.values[r]) for r in scenario.resources}
        else:
            keyed = {bundle_key(b): format_rational(v) for b, v in u.values.items()}
            values = {k: keyed[k] for k in sorted(keyed, key=lambda k: (k.count(",") + bool(k), k))}
        utilities[agent] = {"type": u.kind, "values": values}
    out = {
        "agents": list(scenario.agents),
        "resources": list(scenario.resources),
        "utilities": utilities,
    }
    if initial is not None:
        out["initial_allocation"] = allocation_to_dict(initial)
    return out


def parse_scenario(text: str):
    """Parse scenario text; returns ``(scenario, initial_allocation_or_None)``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(f"not valid JSON: {exc}") from exc
    return scenario_from_dict(obj)


def serialize_scenario(scenario: Scenario, initial=None) -> str:
    return json.dumps(scenario_to_dict(scenario, initial), indent=2) + "\n"


def load_scenario(path):
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _snapshot_dict(snap) -> dict:
    return {
        "utilitarian": format_rational(snap.utilitarian),
        "egalitarian": format_rational(snap.egalitarian),
        "elitist": format_rational(snap.elitist),
        "ordered_vector": [format_rational(v) for v in snap.ordered_vector],
        "utilities": [format_rational(v) for v in snap.utilities],
    }


def trace_to_dict(trace) -> dict:
    steps = []
    for step in trace.steps:
        entry = {"after": allocation_to_dict(step.deal.after), "welfare": _snapshot_dict(step.after)}
        if step.payment is not None:
            entry["payment"] = {a: format_rational(v) for a, v in step.payment.payments.items()}
        steps.append(entry)
    policy = trace.policy
    return {
        "criterion": trace.criterion.value if trace.criterion else None,
        "filter": trace.filter.value if trace.filter else None,
        "policy": {"kind": policy.kind.value, "seed": policy.rng_seed} if policy else None,
        "initial": allocation_to_dict(trace.initial),
        "initial_welfare": _snapshot_dict(trace.initial_snapshot),
        "steps": steps,
        "terminal": allocation_to_dict(trace.terminal),
        "termination_reason": trace.termination_reason.value,
    }


def serialize_trace(trace) -> str:
    return json.dumps(trace_to_dict(trace), indent=2) + "\n"


def trace_from_dict(scenario: Scenario, obj: dict):
    """Rebuild a trace against ``scenario``; welfare values are recomputed, not trusted."""
    from .core import Deal
    from .engine import NegotiationTrace, Policy, Step, StructuralFilter, TerminationReason
    from .rationality import Criterion, PaymentFunction
    from .welfare import snapshot

    initial = allocation_from_dict(scenario, obj["initial"])
    trace = NegotiationTrace(initial=initial, initial_snapshot=snapshot(scenario, initial))
    if obj.get("criterion"):
        trace.criterion = Criterion(obj["criterion"])
    if obj.get("filter"):
        trace.filter = StructuralFilter(obj["filter"])
    if obj.get("policy"):
        trace.policy = Policy(obj["policy"]["kind"], obj["policy"]["seed"])
    current = initial
    for entry in obj["steps"]:
        nxt = allocation_from_dict(scenario, entry["after"])
        payment = PaymentFunction(entry["payment"]) if "payment" in entry else None
        trace.steps.append(Step(Deal(current, nxt), payment, snapshot(scenario, nxt)))
        current = nxt
    trace.terminal = allocation_from_dict(scenario, obj["terminal"])
    trace.termination_reason = TerminationReason(obj["termination_reason"])
    return trace
