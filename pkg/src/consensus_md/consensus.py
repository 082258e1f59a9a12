"""The seven consensus notions and the quality predicates built on them.

An outcome is an alternative index, or ``None`` when no consensus exists.  A
profile exhibits consensus under a notion only when exactly one alternative
qualifies; multiplicity collapses to ``None``.
"""

from __future__ import annotations

import enum
from typing import Literal

from .prefcore import Preference, Profile, support


class Notion(enum.Enum):
    """Closed enumeration of consensus notions; values are the wire names."""

    CW = "CW"
    UNAN_UD = "UnanUD"
    UNAN_DOM = "UnanDom"
    MAJ_UD = "MajUD"
    MAJ_DOM = "MajDom"
    PLUR_UD = "PlurUD"
    PLUR_DOM = "PlurDom"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def from_tag(cls, tag: str) -> "Notion":
        for notion in cls:
            if notion.value == tag:
                return notion
        raise ValueError(f"unknown consensus notion {tag!r}")


ALL_NOTIONS: tuple[Notion, ...] = tuple(Notion)

# None plays the paper's "no consensus" value; kept as an alias for clarity
# at call sites that talk about outcomes rather than optional alternatives.
NO_CONSENSUS = None

Outcome = int | None


def undominated_set(pref: Preference) -> frozenset[int]:
    """Alternatives with no dominator in this preference; never empty."""
    m = pref.m
    return frozenset(
        a for a in range(m) if not any(pref.bits >> (x * m + a) & 1 for x in range(m))
    )


def dominant_alternative(pref: Preference) -> int | None:
    """The alternative dominating all others, if any; at most one exists."""
    m = pref.m
    full = (1 << m) - 1
    for a in range(m):
        row = (pref.bits >> (a * m)) & full
        if row == full ^ (1 << a):
            return a
    return None


def undominated_counts(profile: Profile) -> list[int]:
    """Per alternative: in how many agents' preferences it is undominated."""
    counts = [0] * profile.m
    for pref in profile.prefs:
        for a in undominated_set(pref):
            counts[a] += 1
    return counts


def dominant_counts(profile: Profile) -> list[int]:
    """Per alternative: in how many agents' preferences it is dominant."""
    counts = [0] * profile.m
    for pref in profile.prefs:
        a = dominant_alternative(pref)
        if a is not None:
            counts[a] += 1
    return counts


def condorcet_winner(profile: Profile) -> Outcome:
    """Alternative beating every other in pairwise support, else None."""
    for a in range(profile.m):
        if all(
            support(profile, a, b) > support(profile, b, a)
            for b in range(profile.m)
            if b != a
        ):
            return a
    return None


def condorcet_loser(profile: Profile) -> Outcome:
    """Alternative beaten by every other in pairwise support, else None."""
    for a in range(profile.m):
        if all(
            support(profile, a, b) < support(profile, b, a)
            for b in range(profile.m)
            if b != a
        ):
            return a
    return None


def qualifiers(notion: Notion, profile: Profile) -> tuple[int, ...]:
    """All alternatives satisfying the notion's threshold, before the
    uniqueness rule is applied.  Exposed for diagnostics (tied argmax
    reports) and for the uniqueness logic itself."""
    n = profile.n
    if notion is Notion.CW:
        w = condorcet_winner(profile)
        return () if w is None else (w,)
    if notion in (Notion.UNAN_UD, Notion.MAJ_UD, Notion.PLUR_UD):
        counts = undominated_counts(profile)
    else:
        counts = dominant_counts(profile)
    if notion in (Notion.UNAN_UD, Notion.UNAN_DOM):
        return tuple(a for a, c in enumerate(counts) if c == n)
    if notion in (Notion.MAJ_UD, Notion.MAJ_DOM):
        return tuple(a for a, c in enumerate(counts) if 2 * c > n)
    best = max(counts)
    if best == 0:
        return ()
    return tuple(a for a, c in enumerate(counts) if c == best)


def consensus(notion: Notion, profile: Profile) -> Outcome:
    """The unique qualifying alternative under the notion, else None."""
    qual = qualifiers(notion, profile)
    if notion in (Notion.UNAN_DOM, Notion.MAJ_DOM):
        # One agent has at most one dominant alternative, so unanimity/majority
        # thresholds cannot be met by two alternatives at once.
        assert len(qual) <= 1, f"{notion} admitted multiple qualifiers: {qual}"
    if len(qual) == 1:
        return qual[0]
    return None


def dominated_by_all(
    profile: Profile, threshold: Literal["all", "majority"]
) -> frozenset[int]:
    """Alternatives sitting below every other alternative in the preferences
    of all agents (or of a strict majority).

    An agent with any missing comparison involving ``a`` does not count as
    dominating ``a`` by all alternatives.
    """
    if threshold not in ("all", "majority"):
        raise ValueError(f"threshold must be 'all' or 'majority', got {threshold!r}")
    m, n = profile.m, profile.n
    out = []
    for a in range(m):
        count = sum(
            1
            for pref in profile.prefs
            if all(pref.bits >> (b * m + a) & 1 for b in range(m) if b != a)
        )
        qualifies = count == n if threshold == "all" else 2 * count > n
        if qualifies:
            out.append(a)
    return frozenset(out)


def outcome_label(profile: Profile, outcome: Outcome) -> str:
    """Render an outcome for CLI/CSV output."""
    return "none" if outcome is None else profile.labels[outcome]
