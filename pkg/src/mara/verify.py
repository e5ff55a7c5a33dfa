"""Randomized verification campaigns for the convergence, lemma and necessity results.

Each campaign draws ``trials`` scenarios from seeds ``seed, seed+1, ...``,
runs the property and checks the outcome against the exhaustive oracle.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .core import Deal, Scenario
from .engine import Policy, PolicyKind, StructuralFilter, TerminationReason, check_monotone, run_negotiation
from .fileformat import allocation_to_dict, scenario_to_dict, trace_to_dict
from .oracle import AllocationSpace, compute_optima
from .rationality import (
    Criterion,
    NotIndividuallyRationalError,
    local_admits,
    validate_payment,
    witness_payment,
)
from .scengen import GeneratorSpec, generate, necessity_construction, random_allocation, random_deal
from .welfare import Leximin, Lorenz, compare_leximin_vectors, compare_lorenz_vectors

DEFAULT_RANGE = (-5, 10)


@dataclass
class VerificationReport:
    theorem: str
    trials_run: int
    trials_passed: int
    counterexample: Optional[dict]
    duration: float

    @property
    def ok(self) -> bool:
        return self.trials_passed == self.trials_run


class TrialFailure(Exception):
    """Raised inside a trial with the data needed to reproduce it."""

    def __init__(self, message: str, **detail):
        super().__init__(message)
        self.detail = {"message": message, **detail}


def _size(spec, rng: random.Random) -> int:
    if isinstance(spec, int):
        return spec
    lo, hi = spec
    return rng.randint(lo, hi)


def trial_scenario(trial_seed: int, agents, resources, utility_class: str, value_range=DEFAULT_RANGE) -> Scenario:
    rng = random.Random(f"size:{trial_seed}")
    spec = GeneratorSpec(_size(agents, rng), _size(resources, rng), utility_class, value_range, trial_seed)
    return generate(spec)


def policy_seeds(trial_seed: int, count: int) -> list:
    return [(trial_seed * 1_000_003 + k) % 2**64 for k in range(count)]


# convergence properties: id -> (utility class, criterion, filter, what the terminal must satisfy)
CONVERGENCE = {
    "t1": ("unrestricted", Criterion.INDIVIDUALLY_RATIONAL, StructuralFilter.ANY, "max_utilitarian"),
    "t-additive": ("additive", Criterion.INDIVIDUALLY_RATIONAL, StructuralFilter.ONE_DEAL, "max_utilitarian"),
    "t3": ("unrestricted", Criterion.COOPERATIVELY_RATIONAL, StructuralFilter.ANY, "pareto"),
    "t-zeroone": ("zero_one", Criterion.COOPERATIVELY_RATIONAL, StructuralFilter.ONE_DEAL, "max_utilitarian"),
    "t-eswmax": ("unrestricted", Criterion.EQUITABLE, StructuralFilter.ANY, "max_egalitarian"),
    "t-lorenz": ("zero_one", Criterion.SIMPLE_PARETO_PIGOU_DALTON, StructuralFilter.ANY, "lorenz"),
}


def terminal_is_optimal(goal: str, report, terminal, snap) -> bool:
    if goal == "max_utilitarian":
        return snap.utilitarian == report.max_utilitarian
    if goal == "max_egalitarian":
        return snap.egalitarian == report.max_egalitarian
    if goal == "pareto":
        return terminal in report.pareto_optimal
    if goal == "lorenz":
        return terminal in report.lorenz_optimal
    if goal == "max_elitist":
        return snap.elitist == report.max_elitist
    raise ValueError(goal)


def convergence_trial(theorem: str, trial_seed: int, agents, resources, seeds_per_trial: int = 3) -> None:
    cls, criterion, flt, goal = CONVERGENCE[theorem]
    scenario = trial_scenario(trial_seed, agents, resources, cls)
    space = AllocationSpace(scenario)
    report = compute_optima(scenario, space)
    initial = random_allocation(scenario, random.Random(f"init:{trial_seed}"))
    for s in policy_seeds(trial_seed, seeds_per_trial):
        trace = run_negotiation(scenario, initial, criterion, flt, Policy(PolicyKind.UNIFORM_RANDOM, s), space=space)
        snap = trace.terminal_snapshot
        problem = None
        if trace.termination_reason is not TerminationReason.NO_ADMISSIBLE_DEAL:
            problem = "negotiation did not terminate within the step cap"
        elif not check_monotone(trace, criterion):
            problem = "progress measure did not strictly improve"
        elif not terminal_is_optimal(goal, report, trace.terminal, snap):
            problem = f"terminal allocation is not optimal ({goal})"
        if problem:
            raise TrialFailure(
                problem,
                scenario=scenario_to_dict(scenario, initial),
                trace=trace_to_dict(trace),
            )


def _pairs(space: AllocationSpace):
    for i, p0 in enumerate(space.profiles):
        for j, p1 in enumerate(space.profiles):
            if i != j:
                yield i, j, p0, p1


def _triples(space, i, j):
    b0, b1 = space.allocations[i].bundles, space.allocations[j].bundles
    p0, p1 = space.profiles[i], space.profiles[j]
    agents = space.scenario.agents
    return [(agents[k], p0[k], p1[k]) for k in range(len(agents)) if b0[k] != b1[k]]


def _deal_failure(message, space, i, j):
    return TrialFailure(
        message,
        scenario=scenario_to_dict(space.scenario),
        before=allocation_to_dict(space.allocations[i]),
        after=allocation_to_dict(space.allocations[j]),
    )


def lemma1_trial(trial_seed: int, agents, resources) -> None:
    scenario = trial_scenario(trial_seed, agents, resources, "unrestricted")
    space = AllocationSpace(scenario)
    for i, j, p0, p1 in _pairs(space):
        rises = sum(p0) < sum(p1)
        ir = local_admits(Criterion.INDIVIDUALLY_RATIONAL, _triples(space, i, j))
        if ir != rises:
            raise _deal_failure("individual rationality disagrees with welfare rise", space, i, j)
        deal = Deal(space.allocations[i], space.allocations[j])
        if rises:
            if not validate_payment(scenario, deal, witness_payment(scenario, deal)):
                raise _deal_failure("witness payment does not validate", space, i, j)
        else:
            try:
                witness_payment(scenario, deal)
            except NotIndividuallyRationalError:
                pass
            else:
                raise _deal_failure("payment produced for a non-improving deal", space, i, j)


def deal_lemma_checks(space: AllocationSpace, which=None) -> None:
    """Check the local/global links on every deal of ``space``.

    ``which`` restricts the checks to a subset of: ``eswequ``,
    ``equleximin``, ``pd``, ``cr-lorenz``, ``eq-swe``.
    """
    which = set(which or ("eswequ", "equleximin", "pd", "cr-lorenz", "eq-swe"))
    for i, j, p0, p1 in _pairs(space):
        t = _triples(space, i, j)
        v0, v1 = tuple(sorted(p0)), tuple(sorted(p1))
        equitable = local_admits(Criterion.EQUITABLE, t)
        if "eswequ" in which and v0[0] < v1[0] and not equitable:
            raise _deal_failure("egalitarian rise without an equitable deal", space, i, j)
        if "equleximin" in which and equitable and compare_leximin_vectors(v0, v1) is not Leximin.PRECEDES:
            raise _deal_failure("equitable deal without a leximin rise", space, i, j)
        if "eq-swe" in which and equitable and v1[0] < v0[0]:
            raise _deal_failure("equitable deal lowered egalitarian welfare", space, i, j)
        if "pd" in which and local_admits(Criterion.PIGOU_DALTON, t):
            if not equitable:
                raise _deal_failure("Pigou-Dalton transfer is not equitable", space, i, j)
            if compare_lorenz_vectors(v0, v1) is not Lorenz.DOMINATED_BY:
                raise _deal_failure("Pigou-Dalton transfer without Lorenz improvement", space, i, j)
        if "cr-lorenz" in which and local_admits(Criterion.COOPERATIVELY_RATIONAL, t):
            if compare_lorenz_vectors(v0, v1) is not Lorenz.DOMINATED_BY:
                raise _deal_failure("cooperatively rational deal without Lorenz improvement", space, i, j)


def deal_lemma_trial(trial_seed: int, agents, resources, which=None) -> None:
    scenario = trial_scenario(trial_seed, agents, resources, "unrestricted")
    deal_lemma_checks(AllocationSpace(scenario), which)


NECESSITY = {
    "necessity-ir": (("monotonic", Criterion.INDIVIDUALLY_RATIONAL), ("dichotomous", Criterion.INDIVIDUALLY_RATIONAL)),
    "necessity-cr": (("dichotomous", Criterion.COOPERATIVELY_RATIONAL),),
    "necessity-eq": (("egalitarian", Criterion.EQUITABLE),),
}


def necessity_check(variant: str, criterion: Criterion, scenario_shape: Scenario, deal: Deal, epsilon=Fraction(1, 2)):
    from .engine import enumerate_admissible

    inst = necessity_construction(scenario_shape.agents, scenario_shape.resources, deal, variant, epsilon)
    sc = inst.scenario
    space = AllocationSpace(sc)
    admissible = enumerate_admissible(sc, inst.initial, criterion, space=space)

    def fail(msg):
        return TrialFailure(
            msg,
            variant=variant,
            scenario=scenario_to_dict(sc, inst.initial),
            target=allocation_to_dict(deal.after),
        )

    if admissible != [deal]:
        raise fail(f"expected exactly the constructed deal, found {len(admissible)} admissible deals")
    report = compute_optima(sc, space)
    if criterion is Criterion.EQUITABLE:
        if report.egalitarian_optimal != {deal.after}:
            raise fail("target is not the unique egalitarian optimum")
    elif criterion is Criterion.COOPERATIVELY_RATIONAL:
        if deal.after not in report.pareto_optimal or deal.before in report.pareto_optimal:
            raise fail("Pareto status of start and target is wrong")
    else:
        if report.utilitarian_optimal != {deal.after}:
            raise fail("target is not the unique utilitarian optimum")
    return inst


def necessity_trial(theorem: str, trial_seed: int, agents, resources) -> None:
    shape = trial_scenario(trial_seed, agents, resources, "unrestricted")
    deal = random_deal(shape, random.Random(f"deal:{trial_seed}"))
    for variant, criterion in NECESSITY[theorem]:
        necessity_check(variant, criterion, shape, deal)


THEOREMS = tuple(CONVERGENCE) + ("lemma1", "lemma-eswequ", "lemma-equleximin") + tuple(NECESSITY)


def _trial_runner(theorem: str, seeds_per_trial: int) -> Callable:
    if theorem in CONVERGENCE:
        return lambda s, a, r: convergence_trial(theorem, s, a, r, seeds_per_trial)
    if theorem == "lemma1":
        return lemma1_trial
    if theorem == "lemma-eswequ":
        return lambda s, a, r: deal_lemma_trial(s, a, r, ("eswequ",))
    if theorem == "lemma-equleximin":
        return lambda s, a, r: deal_lemma_trial(s, a, r, ("equleximin",))
    if theorem in NECESSITY:
        return lambda s, a, r: necessity_trial(theorem, s, a, r)
    raise ValueError(f"unknown theorem id {theorem!r}")


def run_campaign(
    theorem: str,
    trials: int,
    agents=3,
    resources=3,
    seed: int = 0,
    *,
    seeds_per_trial: int = 3,
    stop_at_first_failure: bool = True,
) -> VerificationReport:
    """Run ``trials`` randomized instances of ``theorem``; trial ``k`` uses seed ``seed + k``."""
    runner = _trial_runner(theorem, seeds_per_trial)
    start = time.perf_counter()
    passed = 0
    run = 0
    counterexample = None
    for k in range(trials):
        run += 1
        try:
            runner(seed + k, agents, resources)
        except TrialFailure as exc:
            if counterexample is None:
                counterexample = {"trial": k, "trial_seed": seed + k, **exc.detail}
            if stop_at_first_failure:
                break
        else:
            passed += 1
    return VerificationReport(theorem, run, passed, counterexample, time.perf_counter() - start)
