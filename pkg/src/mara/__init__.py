"""Multiagent resource allocation by negotiation.

Deal classes, acceptability criteria, social welfare orderings, a
negotiation engine and an exhaustive oracle, all in exact rational
arithmetic.
"""

from .core import (
    Allocation,
    Deal,
    DealStructure,
    MaraError,
    Scenario,
    UtilityClassification,
    UtilityFunction,
    classify_deal,
    classify_utility,
    compose,
    decomposition,
    format_rational,
    to_rational,
    utility_of,
    validate_allocation,
)
from .engine import (
    NegotiationTrace,
    Policy,
    PolicyKind,
    StructuralFilter,
    TerminationReason,
    check_monotone,
    enumerate_admissible,
    run_negotiation,
)
from .fileformat import parse_scenario, serialize_scenario, serialize_trace
from .oracle import OptimaReport, compute_optima, enumerate_allocations
from .rationality import Criterion, PaymentFunction, is_admissible, validate_payment, witness_payment
from .scengen import GeneratorSpec, generate, necessity_construction
from .welfare import (
    EnvyReport,
    Leximin,
    Lorenz,
    WelfareSnapshot,
    envy_report,
    leximin_compare,
    lorenz_compare,
    pareto_improves,
    snapshot,
)

__version__ = "0.1.0"
