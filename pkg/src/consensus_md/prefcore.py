"""Incomplete preferences as strict partial orders over a small alternative set.

A preference is an irreflexive, asymmetric, transitively closed dominance
relation.  Relations are packed into a single integer: bit ``a*m + b`` is set
iff alternative ``a`` dominates alternative ``b``.  With the m <= 8 sizes used
throughout, every relation fits in one machine word, so closure, validity and
support checks are plain bit arithmetic.  All values are immutable once built.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class SameAlternative(ValueError):
    """A pairwise operation was asked about a pair (a, a)."""


class ClosureCreatesCycle(ValueError):
    """Transitive closure would force both (a, b) and (b, a)."""

    def __init__(self, a: int, b: int):
        super().__init__(f"closure forces both ({a},{b}) and ({b},{a})")
        self.pair = (a, b)


class InvalidProfileError(ValueError):
    """A profile document failed parsing or validation."""


@dataclass(frozen=True)
class Violation:
    """A failed preference axiom together with a witness.

    ``axiom`` is one of ``"irreflexivity"``, ``"asymmetry"``,
    ``"transitivity"``; ``witness`` is the offending pair or triple of
    alternative indices.
    """

    axiom: str
    witness: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.axiom} violated at {self.witness}"


def default_labels(m: int) -> tuple[str, ...]:
    """Labels "a", "b", "c", ... by index, as in the worked examples."""
    if m <= len(string.ascii_lowercase):
        return tuple(string.ascii_lowercase[:m])
    return tuple(f"x{i}" for i in range(m))


def bit(m: int, a: int, b: int) -> int:
    return a * m + b


def pairs_to_bits(m: int, pairs: Iterable[tuple[int, int]]) -> int:
    """Pack ordered index pairs into a relation word (no closure applied)."""
    bits = 0
    for a, b in pairs:
        if a == b:
            raise SameAlternative(f"pair ({a},{a})")
        bits |= 1 << (a * m + b)
    return bits


def bits_to_pairs(m: int, bits: int) -> tuple[tuple[int, int], ...]:
    return tuple(
        (a, b) for a in range(m) for b in range(m) if bits >> (a * m + b) & 1
    )


def transitive_closure(m: int, bits: int) -> int:
    """Smallest transitive superset of an irreflexive relation.

    Raises ClosureCreatesCycle if the closure would contain both orientations
    of some pair (equivalently, if the input contains a cycle).
    """
    row_mask = (1 << m) - 1
    rows = [(bits >> (i * m)) & row_mask for i in range(m)]
    for k in range(m):
        rk = rows[k]
        kbit = 1 << k
        for i in range(m):
            if rows[i] & kbit:
                rows[i] |= rk
    for a in range(m):
        if rows[a] >> a & 1:
            # A self-loop can only come from a cycle through a; report the
            # first two-sided pair on it.
            for b in range(m):
                if b != a and rows[a] >> b & 1 and rows[b] >> a & 1:
                    raise ClosureCreatesCycle(a, b)
            raise ClosureCreatesCycle(a, a)
        for b in range(a + 1, m):
            if rows[a] >> b & 1 and rows[b] >> a & 1:
                raise ClosureCreatesCycle(a, b)
    out = 0
    for i in range(m):
        out |= rows[i] << (i * m)
    return out


def validate_preference(m: int, bits: int) -> Violation | None:
    """Check the three axioms; None means the relation is a valid preference."""
    for a in range(m):
        if bits >> (a * m + a) & 1:
            return Violation("irreflexivity", (a, a))
    for a in range(m):
        for b in range(a + 1, m):
            if bits >> (a * m + b) & 1 and bits >> (b * m + a) & 1:
                return Violation("asymmetry", (a, b))
    for a in range(m):
        row_a = bits >> (a * m)
        for b in range(m):
            if row_a >> b & 1:
                row_b = bits >> (b * m)
                missing = row_b & ~row_a & ((1 << m) - 1)
                if missing:
                    c = (missing & -missing).bit_length() - 1
                    return Violation("transitivity", (a, b, c))
    return None


@dataclass(frozen=True)
class Preference:
    """One agent's transitively closed dominance relation over m alternatives."""

    m: int
    bits: int

    @classmethod
    def from_pairs(cls, m: int, pairs: Iterable[tuple[int, int]]) -> "Preference":
        """Build from ordered pairs, applying transitive closure."""
        return cls(m, transitive_closure(m, pairs_to_bits(m, pairs)))

    @classmethod
    def from_chain(cls, m: int, chain: Sequence[int]) -> "Preference":
        """Total order given as alternatives from best to worst."""
        return cls.from_pairs(m, [(chain[i], chain[j]) for i in range(len(chain)) for j in range(i + 1, len(chain))])

    @classmethod
    def empty(cls, m: int) -> "Preference":
        return cls(m, 0)

    def dominates(self, a: int, b: int) -> bool:
        return bool(self.bits >> (a * self.m + b) & 1)

    def compares(self, a: int, b: int) -> bool:
        """True iff the agent holds an opinion on the unordered pair {a, b}."""
        return self.dominates(a, b) or self.dominates(b, a)

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return bits_to_pairs(self.m, self.bits)

    def comparison_count(self) -> int:
        """Number of unordered pairs the agent compares (asymmetry makes this
        a straight popcount)."""
        return self.bits.bit_count()

    def is_complete(self) -> bool:
        return self.comparison_count() == self.m * (self.m - 1) // 2

    def validate(self) -> Violation | None:
        return validate_preference(self.m, self.bits)

    def __str__(self) -> str:
        labels = default_labels(self.m)
        return "{" + ", ".join(f"{labels[a]}>{labels[b]}" for a, b in self.pairs()) + "}"


@dataclass(frozen=True)
class TierPartition:
    """Ordered partition (S^1, ..., S^k): earlier tiers dominate later ones,
    alternatives within a tier are incomparable."""

    tiers: tuple[tuple[int, ...], ...]

    def to_preference(self, m: int) -> Preference:
        pairs = []
        for g, tier in enumerate(self.tiers):
            for later in self.tiers[g + 1:]:
                pairs.extend((a, b) for a in tier for b in later)
        return Preference.from_pairs(m, pairs)


def tier_partition(pref: Preference) -> TierPartition | None:
    """Decompose a strict weak ordering into tiers; None otherwise.

    A partial order is a strict weak ordering iff grouping alternatives by
    their number of dominators and rebuilding the relation from those groups
    reproduces it exactly.
    """
    m = pref.m
    dominator_count = [
        sum(pref.bits >> (x * m + a) & 1 for x in range(m)) for a in range(m)
    ]
    levels = sorted(set(dominator_count))
    tiers = tuple(
        tuple(a for a in range(m) if dominator_count[a] == lvl) for lvl in levels
    )
    candidate = TierPartition(tiers)
    if candidate.to_preference(m).bits != pref.bits:
        return None
    return candidate


def is_weak_ordering(pref: Preference) -> bool:
    return tier_partition(pref) is not None


@dataclass(frozen=True)
class Profile:
    """A fixed-length sequence of preferences over a shared alternative set."""

    labels: tuple[str, ...]
    prefs: tuple[Preference, ...]

    def __post_init__(self):
        if len(self.labels) != len(set(self.labels)):
            raise InvalidProfileError("duplicate alternative labels")
        if not self.prefs:
            raise InvalidProfileError("a profile needs at least one agent")
        for p in self.prefs:
            if p.m != self.m:
                raise InvalidProfileError("preference over a different alternative count")

    @property
    def m(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.prefs)

    @classmethod
    def from_pair_lists(
        cls,
        m: int,
        agents: Sequence[Iterable[tuple[int, int]]],
        labels: Sequence[str] | None = None,
    ) -> "Profile":
        labels = tuple(labels) if labels is not None else default_labels(m)
        return cls(labels, tuple(Preference.from_pairs(m, a) for a in agents))

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown alternative label {label!r}") from None

    def agents(self) -> Iterator[Preference]:
        return iter(self.prefs)

    def __str__(self) -> str:
        return " | ".join(
            "{" + ", ".join(f"{self.labels[a]}>{self.labels[b]}" for a, b in p.pairs()) + "}"
            for p in self.prefs
        )


def support(profile: Profile, a: int, b: int) -> int:
    """Number of agents preferring a over b."""
    if a == b:
        raise SameAlternative(f"support asked for pair ({a},{a})")
    k = a * profile.m + b
    return sum(p.bits >> k & 1 for p in profile.prefs)


def completeness_level(profile: Profile) -> float:
    """Fraction of agent-pair comparisons actually provided, in [0, 1]."""
    total = profile.n * profile.m * (profile.m - 1) // 2
    provided = sum(p.comparison_count() for p in profile.prefs)
    return provided / total


# ---------------------------------------------------------------------------
# Profile documents
#
# A profile file is a JSON object with fields:
#   m      : integer number of alternatives
#   labels : optional list of m distinct strings (defaults to "a", "b", ...)
#   agents : list of agents, each a list of [first, second] label pairs,
#            meaning first > second
# The parser closes each agent's relation transitively and rejects input
# whose closure is cyclic, reporting the violation witness.
# ---------------------------------------------------------------------------


def profile_to_document(profile: Profile) -> dict:
    return {
        "m": profile.m,
        "labels": list(profile.labels),
        "agents": [
            [[profile.labels[a], profile.labels[b]] for a, b in p.pairs()]
            for p in profile.prefs
        ],
    }


def profile_to_json(profile: Profile) -> str:
    return json.dumps(profile_to_document(profile), indent=2) + "\n"


def profile_from_document(doc: dict) -> Profile:
    if not isinstance(doc, dict):
        raise InvalidProfileError("profile document must be a JSON object")
    try:
        m = int(doc["m"])
    except (KeyError, TypeError, ValueError):
        raise InvalidProfileError("missing or non-integer field 'm'") from None
    if m < 2:
        raise InvalidProfileError("m must be at least 2")
    labels = tuple(doc.get("labels") or default_labels(m))
    if len(labels) != m:
        raise InvalidProfileError(f"expected {m} labels, got {len(labels)}")
    if len(set(labels)) != m:
        raise InvalidProfileError("alternative labels must be distinct")
    index = {lab: i for i, lab in enumerate(labels)}
    agents_doc = doc.get("agents")
    if not isinstance(agents_doc, list) or not agents_doc:
        raise InvalidProfileError("field 'agents' must be a nonempty list")
    prefs = []
    for i, agent in enumerate(agents_doc):
        pairs = []
        for entry in agent:
            if len(entry) != 2:
                raise InvalidProfileError(f"agent {i}: pair {entry!r} is not a 2-list")
            first, second = entry
            if first not in index or second not in index:
                raise InvalidProfileError(f"agent {i}: unknown label in pair {entry!r}")
            if first == second:
                raise InvalidProfileError(f"agent {i}: pair compares {first!r} with itself")
            pairs.append((index[first], index[second]))
        try:
            raw = pairs_to_bits(m, pairs)
            closed = transitive_closure(m, raw)
        except ClosureCreatesCycle as exc:
            a, b = exc.pair
            raise InvalidProfileError(
                f"agent {i}: {Violation('asymmetry', (a, b))} after transitive closure"
            ) from None
        violation = validate_preference(m, closed)
        if violation is not None:
            raise InvalidProfileError(f"agent {i}: {violation}")
        prefs.append(Preference(m, closed))
    return Profile(labels, tuple(prefs))


def profile_from_json(text: str) -> Profile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidProfileError(f"not valid JSON: {exc}") from None
    return profile_from_document(doc)


def load_profile(path: str) -> Profile:
    with open(path, "r", encoding="utf-8") as fh:
        return profile_from_json(fh.read())


def save_profile(profile: Profile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(profile_to_json(profile))
