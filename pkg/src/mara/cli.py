"""Command-line front end.

Exit codes: 0 success, 1 operational error (I/O, parse, bad arguments),
2 property violation (oracle mismatch or failed verification trial).
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import Allocation, MaraError, bundle_key, format_rational
from .engine import Policy, StructuralFilter, run_negotiation
from .fileformat import load_scenario, serialize_scenario, serialize_trace
from .oracle import AllocationSpace, compute_optima
from .rationality import Criterion
from .scengen import (
    NECESSITY_VARIANTS,
    agent_names,
    necessity_construction,
    predicted_welfare,
    resource_names,
)
from .verify import THEOREMS, run_campaign, terminal_is_optimal

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2

CRITERIA = {
    "ir": Criterion.INDIVIDUALLY_RATIONAL,
    "cr": Criterion.COOPERATIVELY_RATIONAL,
    "equitable": Criterion.EQUITABLE,
    "ppd": Criterion.SIMPLE_PARETO_PIGOU_DALTON,
    "elitist": Criterion.ELITIST,
}
GOALS = {
    Criterion.INDIVIDUALLY_RATIONAL: "max_utilitarian",
    Criterion.COOPERATIVELY_RATIONAL: "pareto",
    Criterion.EQUITABLE: "max_egalitarian",
    Criterion.SIMPLE_PARETO_PIGOU_DALTON: "lorenz",
    Criterion.ELITIST: "max_elitist",
}
FILTERS = {
    "any": StructuralFilter.ANY,
    "one-deal": StructuralFilter.ONE_DEAL,
    "swap": StructuralFilter.SWAP,
    "cluster": StructuralFilter.CLUSTER,
    "not-decomposable": StructuralFilter.NOT_INDEPENDENTLY_DECOMPOSABLE,
}
REPORTS = ("util", "egal", "leximin", "pareto", "lorenz", "envy", "elitist", "all")


def fmt_vector(values) -> str:
    return "<" + ", ".join(format_rational(v) for v in values) + ">"


def fmt_allocation(alloc: Allocation) -> str:
    return " ".join(f"{a}:{{{bundle_key(b)}}}" for a, b in zip(alloc.agents, alloc.bundles))


def _sorted_allocs(allocs, space: AllocationSpace) -> list:
    return sorted(allocs, key=space.index_of)


def _load(path):
    scenario, initial = load_scenario(path)
    if initial is None:
        # default start: the first agent holds everything
        initial = Allocation.from_owners(scenario, [0] * len(scenario.resources))
    return scenario, initial


def cmd_negotiate(args, out) -> int:
    scenario, initial = _load(args.scenario)
    criterion = CRITERIA[args.criterion]
    space = AllocationSpace(scenario)
    trace = run_negotiation(
        scenario,
        initial,
        criterion,
        FILTERS[args.filter],
        Policy(args.policy, args.seed),
        args.step_cap,
        space=space,
    )
    print(f"initial   {fmt_allocation(trace.initial)}  {fmt_vector(trace.initial_snapshot.ordered_vector)}", file=out)
    for k, step in enumerate(trace.steps, 1):
        line = f"step {k:<4} {fmt_allocation(step.deal.after)}  {fmt_vector(step.after.ordered_vector)}"
        if step.payment is not None:
            pays = ", ".join(f"{a}:{format_rational(v)}" for a, v in step.payment.payments.items())
            line += f"  pay[{pays}]"
        print(line, file=out)
    snap = trace.terminal_snapshot
    print(f"terminal  {fmt_allocation(trace.terminal)}  ({trace.termination_reason.value})", file=out)
    print(
        f"welfare   utilitarian={format_rational(snap.utilitarian)} "
        f"egalitarian={format_rational(snap.egalitarian)} elitist={format_rational(snap.elitist)} "
        f"vector={fmt_vector(snap.ordered_vector)}",
        file=out,
    )
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(serialize_trace(trace))
    if args.check_oracle:
        report = compute_optima(scenario, space)
        goal = GOALS[criterion]
        ok = terminal_is_optimal(goal, report, trace.terminal, snap)
        print(f"oracle    {goal}: {'match' if ok else 'MISMATCH'}", file=out)
        if criterion is Criterion.ELITIST:
            # no convergence guarantee for elitist deals; reported only
            return EXIT_OK
        return EXIT_OK if ok else EXIT_VIOLATION
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    scenario, _ = load_scenario(args.scenario)
    space = AllocationSpace(scenario)
    report = compute_optima(scenario, space)
    want = set(REPORTS[:-1]) if args.report == "all" else {args.report}

    def show_set(title, allocs, extra=None):
        allocs = _sorted_allocs(allocs, space)
        print(f"{title}: {len(allocs)} allocation(s)", file=out)
        for a in allocs:
            vec = fmt_vector(sorted(space.profiles[space.index_of(a)]))
            suffix = extra(a) if extra else ""
            print(f"  {fmt_allocation(a)}  {vec}{suffix}", file=out)

    for name in REPORTS[:-1]:
        if name not in want:
            continue
        if name == "util":
            print(f"max utilitarian welfare: {format_rational(report.max_utilitarian)}", file=out)
            show_set("utilitarian optimal", report.utilitarian_optimal)
        elif name == "egal":
            print(f"max egalitarian welfare: {format_rational(report.max_egalitarian)}", file=out)
            show_set("egalitarian optimal", report.egalitarian_optimal)
        elif name == "leximin":
            show_set("leximin maximal", report.leximin_maximal)
        elif name == "pareto":
            show_set("Pareto optimal", report.pareto_optimal)
        elif name == "lorenz":
            show_set("Lorenz optimal", report.lorenz_optimal)
        elif name == "envy":
            show_set(
                "envy-free",
                report.envy_free,
                lambda a: "  pareto_optimal=" + ("yes" if a in report.pareto_optimal else "no"),
            )
        elif name == "elitist":
            print(f"max elitist welfare: {format_rational(report.max_elitist)}", file=out)
            show_set("elitist optimal", report.elitist_optimal)
    return EXIT_OK


def _parse_size(text: str):
    if "-" in text:
        lo, hi = (int(x) for x in text.split("-", 1))
        return (lo, hi)
    return int(text)


def cmd_verify(args, out) -> int:
    agents, resources = _parse_size(args.agents), _parse_size(args.resources)
    biggest = (agents if isinstance(agents, int) else agents[1]) ** (
        resources if isinstance(resources, int) else resources[1]
    )
    if biggest > 4096:
        print(f"error: {biggest} allocations per scenario is beyond desk scale", file=sys.stderr)
        return EXIT_ERROR
    report = run_campaign(args.theorem, args.trials, agents, resources, args.seed, seeds_per_trial=args.seeds_per_trial)
    print(f"theorem {report.theorem}: {report.trials_passed}/{report.trials_run} passed", file=out)
    print(f"duration {report.duration:.2f}s", file=sys.stderr)
    if report.counterexample is not None:
        print("counterexample:", file=out)
        print(json.dumps(report.counterexample, indent=2), file=out)
        return EXIT_VIOLATION
    return EXIT_OK


def parse_deal_spec(spec: str, agents: tuple, resources: tuple):
    """``"r1;r2>r2;r1"``: per-agent bundles before ``>`` and after, agents in order."""
    from .core import Deal, validate_allocation

    try:
        left, right = spec.split(">")
    except ValueError:
        raise MaraError("deal spec must look like 'BUNDLES>BUNDLES'") from None

    def side(text):
        parts = text.split(";")
        if len(parts) != len(agents):
            raise MaraError(f"deal spec side {text!r} needs {len(agents)} ';'-separated bundles")
        bundles = {a: [r.strip() for r in p.split(",") if r.strip()] for a, p in zip(agents, parts)}
        return validate_allocation(_shape(agents, resources), bundles)

    return Deal(side(left), side(right))


def _shape(agents, resources):
    from .core import Scenario, UtilityFunction

    zero = UtilityFunction.additive({r: 0 for r in resources})
    return Scenario(agents, resources, {a: zero for a in agents})


def cmd_construct(args, out) -> int:
    agents, resources = agent_names(args.agents), resource_names(args.resources)
    deal = parse_deal_spec(args.deal, agents, resources)
    inst = necessity_construction(agents, resources, deal, args.variant, args.epsilon)
    text = serialize_scenario(inst.scenario, inst.initial)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    predicted = predicted_welfare(len(agents), len(resources), args.variant, inst.epsilon)
    print(f"distinguished agent: {inst.distinguished_agent}", file=sys.stderr if not args.out else out)
    for k, v in predicted.items():
        print(f"predicted {k}: {format_rational(v)}", file=sys.stderr if not args.out else out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mara", description="Multiagent resource allocation by negotiation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("negotiate", help="run a negotiation from a scenario file")
    p.add_argument("--scenario", required=True)
    p.add_argument("--criterion", choices=sorted(CRITERIA), default="ir")
    p.add_argument("--filter", choices=list(FILTERS), default="any")
    p.add_argument("--policy", choices=["random", "first", "greedy"], default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-cap", type=int, default=None)
    p.add_argument("--trace", help="write the trace as JSON to this path")
    p.add_argument("--check-oracle", action="store_true")
    p.set_defaults(func=cmd_negotiate)

    p = sub.add_parser("oracle", help="exhaustive optima of a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--report", choices=REPORTS, default="all")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="randomized verification campaign")
    p.add_argument("--theorem", choices=THEOREMS, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--agents", default="3", help="count or range like 2-4")
    p.add_argument("--resources", default="3", help="count or range like 2-4")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds-per-trial", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="build a scenario in which a given deal is necessary")
    p.add_argument("--agents", type=int, required=True)
    p.add_argument("--resources", type=int, required=True)
    p.add_argument("--deal", required=True, help="e.g. 'r1;r2>r2;r1' (per-agent bundles before>after)")
    p.add_argument("--variant", choices=NECESSITY_VARIANTS, default="monotonic")
    p.add_argument("--epsilon", default="1/2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args, out)
    except (OSError, MaraError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())


def main_entry() -> None:
    sys.exit(main())
