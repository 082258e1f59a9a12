"""Effect classification for a single run and agenda-control search.

The five effect tags partition the outcome space of (initial, final)
consensus pairs.  A control search folds the effects of many update orders
on one profile into a report of what a chair choosing the agenda could
achieve.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .consensus import Notion, Outcome, condorcet_loser, condorcet_winner, consensus
from .dynamics import UpdateOrder, md_run
from .prefcore import Profile


class Effect(enum.Enum):
    PRESERVED_IDENTITY = "PreservedIdentity"
    PRESERVED_EXISTENCE_ONLY = "PreservedExistenceOnly"
    LOST = "Lost"
    GENERATED = "Generated"
    ABSENCE_PRESERVED = "AbsencePreserved"

    def __str__(self) -> str:
        return self.value


ALL_EFFECTS: tuple[Effect, ...] = tuple(Effect)


def classify_outcomes(initial: Outcome, final: Outcome) -> Effect:
    """Which of the five effects a (initial, final) outcome pair realises."""
    if initial is not None:
        if final is None:
            return Effect.LOST
        return (
            Effect.PRESERVED_IDENTITY
            if final == initial
            else Effect.PRESERVED_EXISTENCE_ONLY
        )
    return Effect.ABSENCE_PRESERVED if final is None else Effect.GENERATED


@dataclass(frozen=True)
class EffectRecord:
    notion: Notion
    initial: Outcome
    final: Outcome
    effect: Effect


def classify_effect(
    notion: Notion, profile: Profile, order: Sequence[tuple[int, int]]
) -> EffectRecord:
    """Run the dynamics once and classify the consensus effect."""
    initial = consensus(notion, profile)
    final_profile, _ = md_run(profile, order)
    final = consensus(notion, final_profile)
    return EffectRecord(notion, initial, final, classify_outcomes(initial, final))


@dataclass
class ControlReport:
    """Aggregate of the final outcomes one profile reaches over a set of
    update orders, with the chair-control flags derived from them.

    Identity-related flags are None (not applicable) when the profile has no
    initial consensus; generation-related flags are None when it has one.
    ``negative_control_available`` follows the two-route definition: some
    order keeps the profile consensus-free, or two orders reach different
    consensus alternatives.
    """

    notion: Notion
    initial: Outcome
    orders_examined: int = 0
    outcome_multiset: dict[Outcome, int] = field(default_factory=dict)
    choosable: frozenset[int] = frozenset()
    exhaustive: bool | None = None

    @property
    def outcomes_achieved(self) -> frozenset[Outcome]:
        return frozenset(self.outcome_multiset)

    @property
    def can_preserve_existence(self) -> bool | None:
        if self.initial is None:
            return None
        return any(o is not None for o in self.outcome_multiset)

    @property
    def can_preserve_identity(self) -> bool | None:
        if self.initial is None:
            return None
        return self.initial in self.outcome_multiset

    @property
    def can_lose(self) -> bool | None:
        if self.initial is None:
            return None
        return None in self.outcome_multiset

    @property
    def can_generate(self) -> bool | None:
        if self.initial is not None:
            return None
        return any(o is not None for o in self.outcome_multiset)

    @property
    def can_prevent_generation(self) -> bool | None:
        if self.initial is not None:
            return None
        return None in self.outcome_multiset

    @property
    def negative_control_available(self) -> bool | None:
        if self.initial is not None:
            return None
        distinct = sum(1 for o in self.outcome_multiset if o is not None)
        return bool(self.can_prevent_generation) or distinct >= 2


def fold_outcome(report: ControlReport, final: Outcome, targets: frozenset[int] | None) -> None:
    report.orders_examined += 1
    report.outcome_multiset[final] = report.outcome_multiset.get(final, 0) + 1
    if final is not None and (targets is None or final in targets):
        report.choosable = report.choosable | {final}


def merge_control_reports(left: ControlReport, right: ControlReport) -> ControlReport:
    """Commutative merge of two partial reports over disjoint order sets."""
    if (left.notion, left.initial) != (right.notion, right.initial):
        raise ValueError("cannot merge reports for different notions or profiles")
    merged = dict(left.outcome_multiset)
    for outcome, count in right.outcome_multiset.items():
        merged[outcome] = merged.get(outcome, 0) + count
    return ControlReport(
        notion=left.notion,
        initial=left.initial,
        orders_examined=left.orders_examined + right.orders_examined,
        outcome_multiset=merged,
        choosable=left.choosable | right.choosable,
        exhaustive=left.exhaustive if left.exhaustive == right.exhaustive else None,
    )


def control_search(
    notion: Notion,
    profile: Profile,
    orders: Iterable[UpdateOrder],
    targets: Iterable[int] | None = None,
) -> ControlReport:
    """Fold the final consensus of every supplied order into a ControlReport."""
    target_set = frozenset(targets) if targets is not None else None
    report = ControlReport(notion=notion, initial=consensus(notion, profile))
    for order in orders:
        final_profile, _ = md_run(profile, order)
        fold_outcome(report, consensus(notion, final_profile), target_set)
    if report.orders_examined == 0:
        raise ValueError("control_search needs at least one order")
    return report


@dataclass(frozen=True)
class LoserToWinnerResult:
    occurred: bool
    initial_loser: Outcome
    final_winner: Outcome


def loser_to_winner_check(
    profile: Profile, order: Sequence[tuple[int, int]]
) -> LoserToWinnerResult:
    """Did this run turn the profile's Condorcet loser into the Condorcet winner?"""
    loser = condorcet_loser(profile)
    final_profile, _ = md_run(profile, order)
    winner = condorcet_winner(final_profile)
    occurred = loser is not None and winner == loser
    return LoserToWinnerResult(occurred, loser, winner)
