import random
from fractions import Fraction as F

import pytest

from mara import (
    Criterion,
    Deal,
    NegotiationTrace,
    Policy,
    PolicyKind,
    StructuralFilter,
    TerminationReason,
    check_monotone,
    compute_optima,
    enumerate_admissible,
    is_admissible,
    run_negotiation,
    snapshot,
)
from mara.catalog import allocation
from mara.core import classify_deal
from mara.engine import Step
from mara.fileformat import serialize_trace

from oracles import all_allocations, small_scenario


class TestEnumerateAdmissible:
    def test_no_rational_one_deal(self, cluster):
        scenario, start = cluster
        assert enumerate_admissible(scenario, start, "ir", "one_deal") == []

    def test_cluster_deal_found(self, cluster):
        scenario, start = cluster
        deals = enumerate_admissible(scenario, start, "ir")
        assert [d.after for d in deals] == [allocation(scenario, a1=set(), a2={"r1", "r2"})]

    def test_pareto_optimal_start_has_no_cooperative_deal(self, lorenz3):
        scenario, start = lorenz3
        assert enumerate_admissible(scenario, start, "cr") == []

    def test_matches_brute_force(self):
        for seed in range(20):
            scenario = small_scenario(seed)
            allocs = list(all_allocations(scenario))
            start = allocs[seed % len(allocs)]
            for crit in Criterion:
                got = enumerate_admissible(scenario, start, crit)
                want = [Deal(start, b) for b in allocs if b != start and is_admissible(scenario, Deal(start, b), crit)]
                assert got == want

    def test_filters(self):
        scenario = small_scenario(3, agents=3, resources=3)
        start = next(iter(all_allocations(scenario)))
        for flt in StructuralFilter:
            for deal in enumerate_admissible(scenario, start, "ir", flt):
                s = classify_deal(deal)
                if flt is StructuralFilter.ONE_DEAL:
                    assert s.is_one_deal
                elif flt is StructuralFilter.SWAP:
                    assert s.is_swap
                elif flt is StructuralFilter.CLUSTER:
                    assert s.is_cluster
                elif flt is StructuralFilter.NOT_INDEPENDENTLY_DECOMPOSABLE:
                    assert not s.is_independently_decomposable


class TestRun:
    @pytest.mark.parametrize("seed", range(5))
    def test_cluster_reaches_eight(self, cluster, seed):
        scenario, start = cluster
        trace = run_negotiation(scenario, start, "ir", policy=Policy("random", seed))
        assert trace.terminal_snapshot.utilitarian == 8
        assert trace.steps[0].payment.payments == {"1": F(-15, 2), "2": F(15, 2)}

    def test_equitable_greedy_matches_worked_trace_end(self, equitable_tail):
        scenario, start = equitable_tail
        trace = run_negotiation(scenario, start, "equitable", policy=Policy("greedy"))
        assert trace.terminal_snapshot.ordered_vector == (5, F(13, 2), 8)
        assert len(trace.steps) <= 2
        assert trace.termination_reason is TerminationReason.NO_ADMISSIBLE_DEAL

    @pytest.mark.parametrize("kind", ["first", "greedy", "random"])
    @pytest.mark.parametrize("seed", range(4))
    def test_equitable_value_is_policy_independent(self, equitable_tail, kind, seed):
        scenario, start = equitable_tail
        trace = run_negotiation(scenario, start, "equitable", policy=Policy(kind, seed))
        assert trace.terminal_snapshot.egalitarian == 5
        assert check_monotone(trace)

    def test_fixed_point(self, cluster):
        scenario, _ = cluster
        best = allocation(scenario, a1=set(), a2={"r1", "r2"})
        trace = run_negotiation(scenario, best, "ir")
        assert trace.steps == [] and trace.terminal == best
        assert trace.termination_reason is TerminationReason.NO_ADMISSIBLE_DEAL

    def test_step_cap(self):
        scenario, start = None, None
        for seed in range(50):
            scenario = small_scenario(seed, agents=3, resources=3)
            start = next(iter(all_allocations(scenario)))
            full = run_negotiation(scenario, start, "ir", policy=Policy("first"))
            if len(full.steps) >= 2:
                break
        capped = run_negotiation(scenario, start, "ir", policy=Policy("first"), step_cap=1)
        assert len(capped.steps) == 1
        assert capped.termination_reason is TerminationReason.STEP_CAP_REACHED
        with pytest.raises(ValueError):
            run_negotiation(scenario, start, "ir", step_cap=0)

    def test_deterministic(self):
        scenario = small_scenario(9, agents=3, resources=3)
        start = next(iter(all_allocations(scenario)))
        a = run_negotiation(scenario, start, "ir", policy=Policy("random", 42))
        b = run_negotiation(scenario, start, "ir", policy=Policy("random", 42))
        assert serialize_trace(a) == serialize_trace(b)

    def test_trace_invariants(self):
        for seed in range(10):
            scenario = small_scenario(seed)
            start = next(iter(all_allocations(scenario)))
            for crit in ("ir", "cr", "equitable", "ppd"):
                trace = run_negotiation(scenario, start, crit, policy=Policy("random", seed))
                prev = start
                for step in trace.steps:
                    assert step.deal.before == prev
                    assert is_admissible(scenario, step.deal, crit)
                    prev = step.deal.after
                assert trace.terminal == prev
                assert check_monotone(trace)

    def test_policy_rejects_bad_seed(self):
        with pytest.raises(ValueError):
            Policy(PolicyKind.UNIFORM_RANDOM, -1)


class TestMonotone:
    def test_worked_equitable_trace(self, equitable_tail):
        scenario, start = equitable_tail
        mid = allocation(scenario, a1={"r1"}, a2=set(), a3={"r2"})
        end = allocation(scenario, a1={"r1"}, a2={"r2"}, a3=set())
        trace = NegotiationTrace(start, snapshot(scenario, start), criterion=Criterion.EQUITABLE)
        for before, after in ((start, mid), (mid, end)):
            deal = Deal(before, after)
            assert is_admissible(scenario, deal, "equitable")
            trace.steps.append(Step(deal, None, snapshot(scenario, after)))
        trace.terminal = end
        assert [s.ordered_vector for s in trace.snapshots()] == [
            (0, 6, F(19, 2)),
            (5, 6, F(17, 2)),
            (5, F(13, 2), 8),
        ]
        assert check_monotone(trace)
        assert enumerate_admissible(scenario, end, "equitable") == []

    def test_flat_step_detected(self, orderings):
        scenario, _ = orderings
        a = allocation(scenario, a1={"r1"}, a2={"r2"}, a3=set())
        b = allocation(scenario, a1={"r2"}, a2={"r1"}, a3=set())
        assert snapshot(scenario, a).utilitarian == snapshot(scenario, b).utilitarian == 7
        trace = NegotiationTrace(a, snapshot(scenario, a), criterion=Criterion.INDIVIDUALLY_RATIONAL)
        trace.steps.append(Step(Deal(a, b), None, snapshot(scenario, b)))
        trace.terminal = b
        assert not check_monotone(trace)

    def test_broken_chain_detected(self, orderings):
        scenario, top = orderings
        a = allocation(scenario, a1={"r1"}, a2={"r2"}, a3=set())
        b = allocation(scenario, a1=set(), a2={"r2"}, a3={"r1"})
        trace = NegotiationTrace(b, snapshot(scenario, b), criterion=Criterion.INDIVIDUALLY_RATIONAL)
        trace.steps.append(Step(Deal(a, top), None, snapshot(scenario, top)))
        assert not check_monotone(trace)


def test_elitist_runs_are_reported_not_asserted():
    scenario = small_scenario(5, agents=3, resources=2)
    start = next(iter(all_allocations(scenario)))
    trace = run_negotiation(scenario, start, "elitist", policy=Policy("first"))
    assert check_monotone(trace)
    assert trace.terminal_snapshot.elitist <= compute_optima(scenario).max_elitist


def _brute_lorenz_optimal(scenario):
    """Independent check: allocations whose prefix-sum vector nobody weakly beats with a strict gain."""
    vecs = {}
    for a in all_allocations(scenario):
        ordered = sorted(scenario.utilities[x](a[x]) for x in scenario.agents)
        vecs[a] = [sum(ordered[: k + 1]) for k in range(len(ordered))]
    return {
        a
        for a, v in vecs.items()
        if not any(all(x <= y for x, y in zip(v, w)) and v != w for w in vecs.values())
    }


def test_simple_ppd_can_stall_below_the_lorenz_optimum():
    """Three agents, 0-1 utilities: the only move toward <1,1,1> swaps utilities 0 and 1.

    Such a move keeps the gap at 1, so it is not a Pigou-Dalton transfer, and
    no simple Pareto-Pigou-Dalton deal is left at <0,1,2>.
    """
    from mara import Scenario, UtilityFunction

    s = Scenario(
        ("1", "2", "3"),
        ("r1", "r2", "r3"),
        {
            "1": UtilityFunction.additive({"r1": 0, "r2": 0, "r3": 1}),
            "2": UtilityFunction.additive({"r1": 1, "r2": 0, "r3": 1}),
            "3": UtilityFunction.additive({"r1": 1, "r2": 1, "r3": 1}),
        },
    )
    stuck = allocation(s, a1=set(), a2={"r3"}, a3={"r1", "r2"})
    assert snapshot(s, stuck).ordered_vector == (0, 1, 2)
    assert enumerate_admissible(s, stuck, "ppd") == []
    assert enumerate_admissible(s, stuck, "ppd", relaxed_mean=True) == []
    optimal = _brute_lorenz_optimal(s)
    assert stuck not in optimal
    assert {snapshot(s, a).ordered_vector for a in optimal} == {(1, 1, 1)}
    assert compute_optima(s).lorenz_optimal == optimal
