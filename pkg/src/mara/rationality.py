"""Deal acceptability criteria and side-payment functions.

Every criterion is decided from the utilities of the agents whose bundle
changes (plus, for simple Pareto-Pigou-Dalton deals, the structural fact of
being a 1-deal). :func:`local_admits` is that local predicate;
:func:`is_admissible` feeds it from a scenario.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import Deal, MaraError, Scenario, to_rational, utility_profile


class Criterion(enum.Enum):
    INDIVIDUALLY_RATIONAL = "ir"
    COOPERATIVELY_RATIONAL = "cr"
    EQUITABLE = "equitable"
    PIGOU_DALTON = "pigou_dalton"
    SIMPLE_PARETO_PIGOU_DALTON = "ppd"
    ELITIST = "elitist"

    @classmethod
    def parse(cls, name: "str | Criterion") -> "Criterion":
        if isinstance(name, cls):
            return name
        aliases = {
            "individually_rational": cls.INDIVIDUALLY_RATIONAL,
            "cooperatively_rational": cls.COOPERATIVELY_RATIONAL,
            "pigou-dalton": cls.PIGOU_DALTON,
            "pd": cls.PIGOU_DALTON,
            "simple_pareto_pigou_dalton": cls.SIMPLE_PARETO_PIGOU_DALTON,
        }
        key = name.lower()
        if key in aliases:
            return aliases[key]
        return cls(key)


class NotIndividuallyRationalError(MaraError, ValueError):
    pass


class PaymentError(MaraError, ValueError):
    pass


@dataclass(frozen=True)
class PaymentFunction:
    """Money each agent pays (positive) or receives (negative); sums to zero."""

    payments: Mapping

    def __post_init__(self):
        payments = {a: to_rational(v) for a, v in self.payments.items()}
        if sum(payments.values(), Fraction(0)) != 0:
            raise PaymentError("payments must sum to zero")
        object.__setattr__(self, "payments", payments)

    def __getitem__(self, agent) -> Fraction:
        return self.payments.get(agent, Fraction(0))


def local_admits(
    criterion: Criterion,
    triples: Iterable[tuple],
    *,
    is_one_deal: bool = False,
    relaxed_mean: bool = False,
) -> bool:
    """Decide ``criterion`` from ``(agent, u_before, u_after)`` of the involved agents."""
    criterion = Criterion.parse(criterion)
    triples = list(triples)
    if not triples:
        return False
    before = [t[1] for t in triples]
    after = [t[2] for t in triples]

    if criterion is Criterion.INDIVIDUALLY_RATIONAL:
        # uninvolved agents contribute nothing to the welfare difference
        return sum(before) < sum(after)
    if criterion is Criterion.COOPERATIVELY_RATIONAL:
        return all(b <= a for b, a in zip(before, after)) and any(b < a for b, a in zip(before, after))
    if criterion is Criterion.EQUITABLE:
        return min(before) < min(after)
    if criterion is Criterion.PIGOU_DALTON:
        return _pigou_dalton(before, after, relaxed_mean)
    if criterion is Criterion.SIMPLE_PARETO_PIGOU_DALTON:
        if not is_one_deal:
            return False
        return local_admits(Criterion.COOPERATIVELY_RATIONAL, triples) or _pigou_dalton(
            before, after, relaxed_mean
        )
    if criterion is Criterion.ELITIST:
        return max(before) < max(after)
    raise ValueError(f"unhandled criterion {criterion}")


def _pigou_dalton(before, after, relaxed_mean: bool) -> bool:
    if len(before) != 2:
        return False
    if relaxed_mean:
        if not sum(before) <= sum(after):
            return False
    elif sum(before) != sum(after):
        return False
    return abs(after[0] - after[1]) < abs(before[0] - before[1])


def involved_triples(scenario: Scenario, deal: Deal) -> list:
    p0 = utility_profile(scenario, deal.before)
    p1 = utility_profile(scenario, deal.after)
    return [(scenario.agents[i], p0[i], p1[i]) for i in deal.involved_indices()]


def _moved_count(deal: Deal) -> int:
    return sum(len(b0 - b1) for b0, b1 in zip(deal.before.bundles, deal.after.bundles))


def is_admissible(
    scenario: Scenario, deal: Deal, criterion, *, relaxed_mean: bool = False
) -> bool:
    """Whether ``deal`` meets ``criterion``.

    Individual rationality is decided by the utilitarian welfare rise; a
    concrete payment making it rational comes from :func:`witness_payment`.
    ``relaxed_mean`` lets Pigou-Dalton transfers increase the pair's
    utility sum instead of preserving it exactly.
    """
    criterion = Criterion.parse(criterion)
    return local_admits(
        criterion,
        involved_triples(scenario, deal),
        is_one_deal=_moved_count(deal) == 1,
        relaxed_mean=relaxed_mean,
    )


def witness_payment(scenario: Scenario, deal: Deal) -> PaymentFunction:
    """Spread the welfare gain evenly over all agents.

    Each agent pays its own utility gain minus an equal share of the total
    gain, so every agent ends up strictly better off by that share.
    """
    p0 = utility_profile(scenario, deal.before)
    p1 = utility_profile(scenario, deal.after)
    gain = sum(p1, Fraction(0)) - sum(p0, Fraction(0))
    if gain <= 0:
        raise NotIndividuallyRationalError(
            "utilitarian welfare does not strictly increase, no payment can make this deal rational"
        )
    share = gain / len(scenario.agents)
    return PaymentFunction({a: p1[i] - p0[i] - share for i, a in enumerate(scenario.agents)})


def validate_payment(scenario: Scenario, deal: Deal, payment) -> bool:
    """Check that ``payment`` makes ``deal`` individually rational.

    Every agent must gain more utility than it pays; an agent whose bundle
    does not change may instead simply pay nothing.
    """
    if isinstance(payment, PaymentFunction):
        payments = payment.payments
    else:
        payments = {a: to_rational(v) for a, v in payment.items()}
    if set(payments) - set(scenario.agents):
        return False
    if sum(payments.values(), Fraction(0)) != 0:
        return False
    p0 = utility_profile(scenario, deal.before)
    p1 = utility_profile(scenario, deal.after)
    for i, agent in enumerate(scenario.agents):
        pay = payments.get(agent, Fraction(0))
        if p1[i] - p0[i] > pay:
            continue
        if deal.before.bundles[i] == deal.after.bundles[i] and pay == 0:
            continue
        return False
    return True
