"""Acceptance criteria, one test per criterion, all comparisons exact.

Each test records a single ``criterion N: PASS|FAIL`` line, printed at the
end of the pytest run (see conftest.py). Running this file directly prints
the same lines.
"""

from __future__ import annotations

import io
import random
import sys
import time
from fractions import Fraction as F

import pytest

from mara import (
    Criterion,
    Deal,
    GeneratorSpec,
    Leximin,
    Lorenz,
    Policy,
    compose,
    compute_optima,
    decomposition,
    enumerate_admissible,
    generate,
    is_admissible,
    leximin_compare,
    lorenz_compare,
    parse_scenario,
    run_negotiation,
    serialize_scenario,
    snapshot,
    validate_payment,
    witness_payment,
)
from mara import catalog
from mara.catalog import allocation
from mara.cli import main
from mara.core import utility_profile
from mara.engine import check_monotone
from mara.oracle import AllocationSpace
from mara.scengen import UTILITY_CLASSES, random_deal
from mara.verify import necessity_check, run_campaign

from conftest import ACCEPTANCE_LINES
from oracles import all_allocations, brute_force_decomposable, four_agent_decomposable


def record(number: int, title: str, failures: list, started: float) -> None:
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {number}: {status}  {title}  ({time.perf_counter() - started:.1f}s)"
    if failures:
        line += "  " + "; ".join(failures[:6])
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, line


def check(failures: list, ok: bool, label: str) -> None:
    if not ok:
        failures.append(label)


# 1 ------------------------------------------------------------------------


def worked_examples(fail: list) -> None:
    # cluster deal: 7 -> 8, no rational 1-deal, payments of 7.5
    s, a = catalog.cluster_deal_needed()
    target = allocation(s, a1=set(), a2={"r1", "r2"})
    check(fail, snapshot(s, a).utilitarian == 7 and snapshot(s, target).utilitarian == 8, "cluster sw_u 7->8")
    check(fail, enumerate_admissible(s, a, "ir", "one_deal") == [], "cluster: IR 1-deal found")
    cluster = Deal(a, target)
    check(fail, is_admissible(s, cluster, "ir"), "cluster deal not IR")
    p = witness_payment(s, cluster)
    check(fail, p.payments == {"1": F(-15, 2), "2": F(15, 2)}, "cluster payments")
    check(fail, validate_payment(s, cluster, p), "cluster payment invalid")

    # ordered vectors, leximin and Lorenz
    s, a = catalog.three_agent_orderings()
    b = allocation(s, a1={"r1"}, a2={"r2"}, a3=set())
    swapped = allocation(s, a1={"r2"}, a2={"r1"}, a3=set())
    check(fail, snapshot(s, a).ordered_vector == (0, 0, 17), "<0,0,17>")
    check(fail, snapshot(s, b).ordered_vector == (0, 2, 5), "<0,2,5>")
    check(fail, leximin_compare(s, a, b) is Leximin.PRECEDES, "leximin precedence")
    check(fail, snapshot(s, swapped).ordered_vector == (0, 3, 4), "<0,3,4>")
    check(fail, lorenz_compare(s, b, swapped) is Lorenz.DOMINATED_BY, "swap not a Lorenz improvement")

    # no money, no cooperative deal; IR deal with payment 5.5
    s, a = catalog.single_resource_transfer()
    give = Deal(a, allocation(s, a1=set(), a2={"r"}))
    check(fail, enumerate_admissible(s, a, "cr") == [], "transfer: CR deal found")
    check(fail, is_admissible(s, give, "ir"), "transfer: not IR")
    check(fail, witness_payment(s, give).payments == {"1": F(-11, 2), "2": F(11, 2)}, "payment 5.5")

    # minimal inequality, yet an equitable swap raises sw_e 3 -> 5
    s, a = catalog.least_unequal_not_fairest()
    swap = Deal(a, allocation(s, a1={"r2"}, a2={"r1"}))
    check(fail, enumerate_admissible(s, a, Criterion.PIGOU_DALTON) == [], "Pigou-Dalton transfer found")
    check(fail, is_admissible(s, swap, "equitable"), "swap not equitable")
    check(fail, (snapshot(s, a).egalitarian, snapshot(s, swap.after).egalitarian) == (3, 5), "sw_e 3->5")

    # equitable trace <0,6,9.5> -> <5,6,8.5> -> <5,6.5,8>
    s, a = catalog.equitable_after_optimum()
    mid = allocation(s, a1={"r1"}, a2=set(), a3={"r2"})
    end = allocation(s, a1={"r1"}, a2={"r2"}, a3=set())
    vectors = [snapshot(s, x).ordered_vector for x in (a, mid, end)]
    check(fail, vectors == [(0, 6, F(19, 2)), (5, 6, F(17, 2)), (5, F(13, 2), 8)], "equitable vectors")
    check(fail, is_admissible(s, Deal(a, mid), "equitable") and is_admissible(s, Deal(mid, end), "equitable"),
          "equitable trace steps")
    check(fail, is_admissible(s, Deal(mid, end), "equitable") and snapshot(s, mid).egalitarian == 5,
          "equitable deal after sw_e optimum")
    greedy = run_negotiation(s, a, "equitable", policy=Policy("greedy"))
    check(fail, greedy.terminal_snapshot.ordered_vector == (5, F(13, 2), 8) and len(greedy.steps) <= 2,
          "greedy equitable run")

    # Pareto optimal but Lorenz dominated; needs three agents
    s, a = catalog.lorenz_needs_three_agents()
    rep = compute_optima(s)
    check(fail, snapshot(s, a).ordered_vector == (0, 0, 10), "<0,0,10>")
    check(fail, a in rep.pareto_optimal, "start not Pareto optimal")
    fair = allocation(s, a1={"r1"}, a2={"r2"}, a3=set())
    check(fail, snapshot(s, fair).ordered_vector == (0, 6, 6), "<0,6,6>")
    check(fail, lorenz_compare(s, a, fair) is Lorenz.DOMINATED_BY, "<0,6,6> does not dominate")
    small = [b for b in all_allocations(s) if b != a and len(Deal(a, b).involved_agents) <= 2]
    check(fail, all(lorenz_compare(s, a, b) is not Lorenz.DOMINATED_BY for b in small),
          "two-agent Lorenz improvement found")

    # envy-freeness versus Pareto optimality
    s, _ = catalog.envy_versus_pareto()
    rep = compute_optima(s)
    check(fail, rep.envy_free and not rep.envy_free & rep.pareto_optimal, "envy-free and Pareto sets")


def test_criterion_1_worked_examples():
    t, fail = time.perf_counter(), []
    worked_examples(fail)
    record(1, "worked-example pack", fail, t)


# 2 ------------------------------------------------------------------------


def test_criterion_2_lemma1():
    t, fail = time.perf_counter(), []
    rep = run_campaign("lemma1", 500, agents=(2, 3), resources=(2, 3), seed=0)
    check(fail, rep.trials_run == 500 and rep.ok, f"lemma1 {rep.trials_passed}/{rep.trials_run}")
    record(2, f"IR iff sw_u rises, witness payments validate: {rep.trials_passed}/500", fail, t)


# 3 ------------------------------------------------------------------------

CONVERGENCE_IDS = ("t1", "t-additive", "t3", "t-zeroone", "t-eswmax", "t-lorenz")


def test_criterion_3_convergence():
    t, fail, parts = time.perf_counter(), [], []
    for theorem in CONVERGENCE_IDS:
        rep = run_campaign(theorem, 200, 3, 3, seed=0, seeds_per_trial=3, stop_at_first_failure=False)
        parts.append(f"{theorem} {rep.trials_passed}/{rep.trials_run}")
        if not rep.ok:
            ce = rep.counterexample
            fail.append(f"{theorem}: first failure at trial seed {ce['trial_seed']} ({ce['message']})")
    record(3, "convergence vs oracle, 3 agents x 3 resources, 3 seeds: " + ", ".join(parts), fail, t)


# 4 ------------------------------------------------------------------------


def test_criterion_4_deal_lemmas():
    from mara.verify import deal_lemma_checks, trial_scenario, TrialFailure

    t, fail = time.perf_counter(), []
    for seed in range(200):
        scenario = trial_scenario(seed, 3, 3, "unrestricted")
        try:
            deal_lemma_checks(AllocationSpace(scenario))
        except TrialFailure as exc:
            fail.append(f"seed {seed}: {exc}")
    record(4, "maximin/equitable/leximin/Pigou-Dalton/CR-Lorenz links on all deals of 200 scenarios", fail, t)


# 5 ------------------------------------------------------------------------


def test_criterion_5_necessity():
    from mara.verify import TrialFailure

    t, fail = time.perf_counter(), []
    shape = generate(GeneratorSpec(3, 3, seed=0))
    n_agents, n_res = 3, 3
    variants = (
        ("monotonic", Criterion.INDIVIDUALLY_RATIONAL),
        ("dichotomous", Criterion.INDIVIDUALLY_RATIONAL),
        ("egalitarian", Criterion.EQUITABLE),
    )
    for variant, criterion in variants:
        rng = random.Random(f"necessity:{variant}")
        for k in range(50):
            deal = random_deal(shape, rng)
            try:
                inst = necessity_check(variant, criterion, shape, deal, F(1, 2))
            except TrialFailure as exc:
                fail.append(f"{variant} #{k}: {exc}")
                continue
            before = utility_profile(inst.scenario, deal.before)
            after = utility_profile(inst.scenario, deal.after)
            if variant == "monotonic":
                ok = sum(after) == n_res + F(1, 2) * n_agents and sum(before) == sum(after) - F(1, 2)
            elif variant == "dichotomous":
                ok = sum(after) == n_agents and sum(before) == n_agents - 1
            else:
                space = AllocationSpace(inst.scenario)
                others = [min(p) for b, p in zip(space.allocations, space.profiles) if b != deal.after]
                ok = min(after) == 1 and set(others) == {0}
            check(fail, ok, f"{variant} #{k}: welfare formula")
    record(5, "necessity: 50 deals x 3 variants, one admissible deal reaching the optimum", fail, t)


# 6 ------------------------------------------------------------------------


def test_criterion_6_structure():
    from mara import Scenario, UtilityFunction

    t, fail = time.perf_counter(), []
    for n, m in ((2, 3), (3, 3), (4, 3)):
        agents = tuple(str(i + 1) for i in range(n))
        resources = tuple(f"r{k + 1}" for k in range(m))
        zero = UtilityFunction.additive({r: 0 for r in resources})
        shape = Scenario(agents, resources, {a: zero for a in agents})
        allocs = list(all_allocations(shape))
        for a in allocs:
            for b in allocs:
                if a == b:
                    continue
                d = Deal(a, b)
                split = decomposition(d)
                if len(d.involved_agents) < 4 and split is not None:
                    fail.append(f"{n}x{m}: deal with {len(d.involved_agents)} agents decomposed")
                if split is not None:
                    d1, d2 = split
                    check(fail, not d1.involved_agents & d2.involved_agents and compose(d1, d2) == d,
                          "witness does not recompose")
        rng = random.Random(n)
        for _ in range(100):
            a, b = rng.sample(allocs, 2)
            d = Deal(a, b)
            check(fail, (decomposition(d) is not None) == brute_force_decomposable(d, shape), "brute force disagrees")
    shape, d = four_agent_decomposable()
    split = decomposition(d)
    check(fail, split is not None and compose(*split) == d, "four-agent example not decomposed")
    record(6, "deal structure and decomposition witnesses", fail, t)


# 7 ------------------------------------------------------------------------


def test_criterion_7_oracle():
    t, fail = time.perf_counter(), []
    scenarios = [generate(GeneratorSpec(2 + k % 3, 2 + k % 2, UTILITY_CLASSES[k % len(UTILITY_CLASSES)], (-5, 10), k))
                 for k in range(100)]
    scenarios += [f()[0] for f in catalog.ALL.values()]
    for s in scenarios:
        rep = compute_optima(s)
        check(fail, rep.allocation_count == len(s.agents) ** len(s.resources), "allocation count")
        check(fail, rep.utilitarian_optimal <= rep.pareto_optimal, "utilitarian optimum not Pareto optimal")
        check(fail, all(snapshot(s, a).egalitarian == rep.max_egalitarian for a in rep.leximin_maximal),
              "leximin-maximal below max sw_e")
        check(fail, bool(rep.lorenz_optimal) and bool(rep.pareto_optimal), "empty optimal set")
    s, _ = catalog.contested_single_resource()
    check(fail, compute_optima(s).envy_free == frozenset(), "contested resource has envy-free allocation")
    record(7, "oracle self-consistency on 108 scenarios", fail, t)


# 8 ------------------------------------------------------------------------


def _cli(*argv):
    out = io.StringIO()
    err, sys.stderr = sys.stderr, io.StringIO()
    try:
        code = main(list(argv), out)
    finally:
        sys.stderr = err
    return code, out.getvalue()


def test_criterion_8_determinism_and_io(tmp_path):
    t, fail = time.perf_counter(), []
    for k in range(100):
        spec = GeneratorSpec(2 + k % 3, 1 + k % 4, UTILITY_CLASSES[k % len(UTILITY_CLASSES)], (-9, 9), 1000 + k)
        s = generate(spec)
        initial = next(iter(all_allocations(s))) if k % 2 else None
        text = serialize_scenario(s, initial)
        check(fail, parse_scenario(text) == (s, initial), f"round trip {k}")
        check(fail, generate(spec) == s, f"generator {k}")

    path = tmp_path / "s.json"
    path.write_text(serialize_scenario(*catalog.three_agent_orderings()))
    for argv in (
        ("negotiate", "--scenario", str(path), "--criterion", "ir", "--seed", "11"),
        ("negotiate", "--scenario", str(path), "--criterion", "equitable", "--policy", "greedy"),
        ("oracle", "--scenario", str(path)),
        ("verify", "--theorem", "t3", "--trials", "10", "--seed", "5"),
        ("construct", "--agents", "3", "--resources", "2", "--deal", "r1;r2;>r2;;r1"),
    ):
        check(fail, _cli(*argv) == _cli(*argv), "CLI output differs: " + " ".join(argv[:1]))

    for theorem in ("t1", "t-lorenz", "lemma-eswequ"):
        a = run_campaign(theorem, 40, 3, 3, seed=7, stop_at_first_failure=False)
        b = run_campaign(theorem, 40, 3, 3, seed=7, stop_at_first_failure=False)
        same = (a.trials_run, a.trials_passed, a.counterexample) == (b.trials_run, b.trials_passed, b.counterexample)
        check(fail, same, f"campaign {theorem} not reproducible")

    s, a = catalog.cluster_deal_needed()
    t1 = run_negotiation(s, a, "ir", policy=Policy("random", 99))
    t2 = run_negotiation(s, a, "ir", policy=Policy("random", 99))
    check(fail, t1 == t2 and check_monotone(t1), "negotiation not reproducible")
    record(8, "round trips, byte-identical CLI output, reproducible campaigns", fail, t)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
