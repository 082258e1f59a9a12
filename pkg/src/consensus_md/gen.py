"""Random preference generation and the catalog of worked counterexamples.

Randomness is pinned to the Philox 4x64 counter-based generator so that a
seed reproduces the same preference sequence on every platform.  Parallel
work derives independent child streams from (master seed, task code) key
pairs, never by jumping a shared stream.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np

from .analysis import control_search
from .consensus import Notion, condorcet_loser, consensus
from .dynamics import (
    UpdateOrder,
    complete_order,
    enumerate_update_orders,
    lexicographic_order,
    md_run,
)
from .prefcore import Preference, Profile, TierPartition, default_labels

REJECTION_CAP = 10**6


# ---------------------------------------------------------------------------
# Seeding
# ---------------------------------------------------------------------------


def make_rng(seed: int, task_code: int = 0) -> np.random.Generator:
    """Child stream for (master seed, task code); the documented splitting
    function for parallel work."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, task_code & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def task_code(kind: int, cell: int, index: int) -> int:
    """Pack a (kind, cell, index) triple into one 64-bit task code."""
    if not (0 <= kind < 1 << 8 and 0 <= cell < 1 << 16 and 0 <= index < 1 << 40):
        raise ValueError(f"task code fields out of range: {(kind, cell, index)}")
    return kind << 56 | cell << 40 | index


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def _is_transitive(m: int, bits: int) -> bool:
    row_mask = (1 << m) - 1
    rows = [bits >> (i * m) & row_mask for i in range(m)]
    for a in range(m):
        row = rows[a]
        rem = row
        while rem:
            b = (rem & -rem).bit_length() - 1
            rem &= rem - 1
            if rows[b] & ~row:
                return False
    return True


def _bits_from_trits(m: int, trits: Sequence[int]) -> int:
    """Per-pair assignment: 0 = lower beats higher, 1 = higher beats lower,
    2 = incomparable, over the lexicographic pair list."""
    bits = 0
    for (a, b), t in zip(lexicographic_order(m), trits):
        if t == 0:
            bits |= 1 << (a * m + b)
        elif t == 1:
            bits |= 1 << (b * m + a)
    return bits


def random_partial_preference(m: int, rng: np.random.Generator) -> Preference:
    """Uniform strict partial order by whole-assignment rejection.

    Each unordered pair is independently set to one of its two orientations
    or left incomparable, with probability 1/3 each; the assignment is
    redrawn in full until it is transitive.
    """
    npairs = m * (m - 1) // 2
    for _ in range(REJECTION_CAP):
        trits = rng.integers(0, 3, size=npairs)
        bits = _bits_from_trits(m, trits)
        if _is_transitive(m, bits):
            return Preference(m, bits)
    raise RuntimeError(
        f"rejection sampling did not produce a transitive assignment for m={m} "
        f"within {REJECTION_CAP} attempts"
    )


@lru_cache(maxsize=None)
def _fubini(k: int) -> int:
    if k == 0:
        return 1
    return sum(math.comb(k, j) * _fubini(k - j) for j in range(1, k + 1))


def _unrank_combination(pool: Sequence[int], k: int, rank: int) -> tuple[list[int], list[int]]:
    """rank-th k-subset of pool in lexicographic order; returns (chosen, rest)."""
    chosen, rest = [], list(pool)
    need = k
    i = 0
    while need > 0:
        skip = math.comb(len(rest) - i - 1, need - 1)
        if rank < skip:
            chosen.append(rest.pop(i))
            need -= 1
        else:
            rank -= skip
            i += 1
    return chosen, rest


def random_weak_ordering(m: int, rng: np.random.Generator) -> Preference:
    """Uniform strict weak ordering, sampled as a uniform ordered set
    partition: tier sizes follow their exact counting weights, tier members
    are an unranked uniform combination."""
    tiers = []
    remaining = list(range(m))
    while remaining:
        r = len(remaining)
        ticket = int(rng.integers(0, _fubini(r)))
        for k in range(1, r + 1):
            weight = math.comb(r, k) * _fubini(r - k)
            if ticket < weight:
                break
            ticket -= weight
        subset_rank = ticket // _fubini(r - k)
        chosen, remaining = _unrank_combination(remaining, k, subset_rank)
        tiers.append(tuple(chosen))
    return TierPartition(tuple(tiers)).to_preference(m)


def random_complete_order(m: int, rng: np.random.Generator) -> Preference:
    chain = [int(x) for x in rng.permutation(m)]
    return Preference.from_chain(m, chain)


class GenKind(enum.Enum):
    UNIFORM_PARTIAL_ORDER = "UniformPartialOrder"
    UNIFORM_WEAK_ORDERING = "UniformWeakOrdering"
    COMPLETE = "Complete"
    EMPTY = "Empty"


_DRAWERS: dict[GenKind, Callable[[int, np.random.Generator], Preference]] = {
    GenKind.UNIFORM_PARTIAL_ORDER: random_partial_preference,
    GenKind.UNIFORM_WEAK_ORDERING: random_weak_ordering,
    GenKind.COMPLETE: random_complete_order,
    GenKind.EMPTY: lambda m, rng: Preference.empty(m),
}


@dataclass(frozen=True)
class GenPolicy:
    """A pinned generation recipe: the seed fully determines the sequence."""

    kind: GenKind
    m: int
    seed: int

    def stream(self) -> Iterator[Preference]:
        rng = make_rng(self.seed)
        draw = _DRAWERS[self.kind]
        while True:
            yield draw(self.m, rng)

    def profile(self, n: int, labels: Sequence[str] | None = None) -> Profile:
        it = self.stream()
        return Profile(
            tuple(labels) if labels is not None else default_labels(self.m),
            tuple(next(it) for _ in range(n)),
        )


def random_profile(m: int, n: int, rng: np.random.Generator) -> Profile:
    """n i.i.d. uniform partial preferences from one stream."""
    return Profile(
        default_labels(m), tuple(random_partial_preference(m, rng) for _ in range(n))
    )


# ---------------------------------------------------------------------------
# Exhaustive small-instance enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def enumerate_preferences(m: int) -> tuple[Preference, ...]:
    """All strict partial orders over m alternatives (19 for m=3)."""
    npairs = m * (m - 1) // 2
    out = []
    for trits in itertools.product((0, 1, 2), repeat=npairs):
        bits = _bits_from_trits(m, trits)
        if _is_transitive(m, bits):
            out.append(Preference(m, bits))
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_weak_orderings(m: int) -> tuple[Preference, ...]:
    """All strict weak orderings over m alternatives (13 for m=3)."""
    from .prefcore import is_weak_ordering

    return tuple(p for p in enumerate_preferences(m) if is_weak_ordering(p))


# ---------------------------------------------------------------------------
# Counterexample catalog
#
# The profiles below are transcribed from the worked proofs and the opening
# example; each carries the claimed initial/final facts in machine-checkable
# form.  Order prefixes are completed lexicographically — every claim holds
# for any completion, which the acceptance suite re-checks with a random one.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fact:
    """One checkable claim about a fixture.

    kind is one of:
      initial    — consensus(notion, P) == winner
      final      — consensus(notion, MD(P, order)) == winner
      all_orders — final consensus equals winner under every update order
      final_profile_all — every agent ends with the given total order (chain)
      step_supports     — (support_first, support_second) of the prefix steps
      initial_condorcet_loser — condorcet_loser(P) == winner
      choosable  — every listed alternative is reachable as final consensus
                   under some order
    """

    kind: str
    notion: Notion | None = None
    winner: str | None = None
    chain: tuple[str, ...] = ()
    supports: tuple[tuple[int, int], ...] = ()
    targets: tuple[str, ...] = ()

    def describe(self) -> str:
        if self.kind == "initial":
            return f"initial {self.notion} consensus is {self.winner or 'none'}"
        if self.kind == "final":
            return f"final {self.notion} consensus is {self.winner or 'none'}"
        if self.kind == "all_orders":
            return f"every order yields {self.notion} consensus {self.winner or 'none'}"
        if self.kind == "final_profile_all":
            return "all agents end with " + ">".join(self.chain)
        if self.kind == "step_supports":
            return f"prefix step supports are {list(self.supports)}"
        if self.kind == "initial_condorcet_loser":
            return f"initial Condorcet loser is {self.winner}"
        if self.kind == "choosable":
            return f"{self.notion}: each of {list(self.targets)} is choosable"
        raise ValueError(f"unknown fact kind {self.kind!r}")


@dataclass(frozen=True)
class Fixture:
    name: str
    summary: str
    profile: Profile
    prefix: tuple[tuple[int, int], ...]
    facts: tuple[Fact, ...]

    @property
    def order(self) -> UpdateOrder:
        return complete_order(self.prefix, self.profile.m)

    def completed_with(self, rng: np.random.Generator | None) -> UpdateOrder:
        """The fixture's order; with an rng, the prefix gets a shuffled
        completion instead of the lexicographic one."""
        if rng is None:
            return self.order
        tail = [p for p in self.order[len(self.prefix):]]
        idx = rng.permutation(len(tail))
        flips = rng.integers(0, 2, size=len(tail))
        shuffled = tuple(
            (tail[i][1], tail[i][0]) if f else tail[i] for i, f in zip(idx, flips)
        )
        return tuple(self.prefix) + shuffled


@dataclass(frozen=True)
class FactCheck:
    fixture: str
    description: str
    ok: bool
    detail: str = ""


def _outcome_name(profile: Profile, outcome: int | None) -> str:
    return "none" if outcome is None else profile.labels[outcome]


def check_fact(fixture: Fixture, fact: Fact, rng: np.random.Generator | None = None) -> FactCheck:
    profile = fixture.profile
    order = fixture.completed_with(rng)

    def result(ok: bool, detail: str = "") -> FactCheck:
        return FactCheck(fixture.name, fact.describe(), ok, detail)

    if fact.kind == "initial":
        got = consensus(fact.notion, profile)
        want = None if fact.winner is None else profile.index_of(fact.winner)
        return result(got == want, f"got {_outcome_name(profile, got)}")
    if fact.kind == "initial_condorcet_loser":
        got = condorcet_loser(profile)
        return result(
            got == profile.index_of(fact.winner), f"got {_outcome_name(profile, got)}"
        )
    if fact.kind == "final":
        final, _ = md_run(profile, order)
        got = consensus(fact.notion, final)
        want = None if fact.winner is None else profile.index_of(fact.winner)
        return result(got == want, f"got {_outcome_name(profile, got)}")
    if fact.kind == "all_orders":
        want = None if fact.winner is None else profile.index_of(fact.winner)
        for candidate in enumerate_update_orders(profile.m):
            final, _ = md_run(profile, candidate)
            got = consensus(fact.notion, final)
            if got != want:
                return result(
                    False,
                    f"order {candidate} yielded {_outcome_name(profile, got)}",
                )
        return result(True)
    if fact.kind == "final_profile_all":
        final, _ = md_run(profile, order)
        want = Preference.from_chain(profile.m, [profile.index_of(x) for x in fact.chain])
        bad = [i for i, p in enumerate(final.prefs) if p.bits != want.bits]
        return result(not bad, f"agents off target: {bad}" if bad else "")
    if fact.kind == "step_supports":
        _, traces = md_run(profile, order, record_trace=True)
        got = tuple(
            (t.support_first, t.support_second) for t in traces[: len(fact.supports)]
        )
        return result(got == fact.supports, f"got {list(got)}")
    if fact.kind == "choosable":
        report = control_search(
            fact.notion, profile, enumerate_update_orders(profile.m)
        )
        wanted = {profile.index_of(x) for x in fact.targets}
        missing = wanted - set(report.choosable)
        return result(
            not missing,
            f"unreachable: {[profile.labels[i] for i in sorted(missing)]}" if missing else "",
        )
    raise ValueError(f"unknown fact kind {fact.kind!r}")


def verify_fixture(fixture: Fixture, rng: np.random.Generator | None = None) -> list[FactCheck]:
    return [check_fact(fixture, fact, rng) for fact in fixture.facts]


def _fixture(name, summary, m, labels, agents, prefix, facts) -> Fixture:
    profile = Profile.from_pair_lists(
        m,
        [[(labels.index(x), labels.index(y)) for x, y in agent] for agent in agents],
        labels,
    )
    prefix_idx = tuple((labels.index(x), labels.index(y)) for x, y in prefix)
    return Fixture(name, summary, profile, prefix_idx, tuple(facts))


def _chain(*labels: str) -> list[tuple[str, str]]:
    return [(labels[i], labels[i + 1]) for i in range(len(labels) - 1)]


@lru_cache(maxsize=1)
def counterexample_catalog() -> dict[str, Fixture]:
    """Named fixtures: the opening example and every printed proof profile."""
    cw, unan_ud, unan_dom = Notion.CW, Notion.UNAN_UD, Notion.UNAN_DOM
    maj_ud, maj_dom = Notion.MAJ_UD, Notion.MAJ_DOM
    plur_ud, plur_dom = Notion.PLUR_UD, Notion.PLUR_DOM

    fixtures = [
        _fixture(
            "example1",
            "conference-app vote: discussion builds a full b>a>c agreement",
            3,
            ("a", "b", "c"),
            [[("a", "c")], [("a", "c")], [("b", "a")], [("b", "a")], []],
            [("a", "b"), ("b", "c"), ("a", "c")],
            [
                Fact("initial", cw, None),
                Fact("step_supports", supports=((0, 2), (2, 0), (2, 0))),
                Fact("final_profile_all", chain=("b", "a", "c")),
                Fact("final", cw, "b"),
            ],
        ),
        _fixture(
            "prop2_cw_lost",
            "m=4: discussing bc then bw erases the Condorcet winner w",
            4,
            ("a", "b", "c", "w"),
            [
                [("b", "c"), ("w", "c"), ("c", "a")],
                [("a", "b"), ("a", "c"), ("c", "w")],
                _chain("w", "a", "b", "c"),
            ],
            [("b", "c"), ("b", "w")],
            [
                Fact("initial", cw, "w"),
                Fact("final", cw, None),
            ],
        ),
        _fixture(
            "prop3_majud_plurud",
            "majority/plurality undominated consensus a destroyed by (ba, ca)",
            3,
            ("a", "b", "c"),
            [
                [("a", "c"), ("b", "c")],
                [("a", "b"), ("c", "b")],
                _chain("a", "b", "c"),
                _chain("b", "c", "a"),
                _chain("c", "b", "a"),
            ],
            [("b", "a"), ("c", "a")],
            [
                Fact("initial", maj_ud, "a"),
                Fact("initial", plur_ud, "a"),
                Fact("final", maj_ud, None),
                Fact("final", plur_ud, None),
            ],
        ),
        _fixture(
            "prop3_plurdom",
            "plurality dominant a lost after bc; no order preserves it",
            3,
            ("a", "b", "c"),
            [
                _chain("a", "b", "c"),
                _chain("a", "b", "c"),
                [("b", "a"), ("c", "a")],
                [("b", "a"), ("c", "a")],
            ],
            [("b", "c")],
            [
                Fact("initial", plur_dom, "a"),
                Fact("final", plur_dom, None),
                Fact("all_orders", plur_dom, None),
            ],
        ),
        _fixture(
            "prop3_unanud",
            "unanimity undominated a destroyed once (b,a) is discussed first",
            3,
            ("a", "b", "c"),
            [[("c", "b")], [("c", "b")], [("a", "c")]],
            [("b", "a")],
            [
                Fact("initial", unan_ud, "a"),
                Fact("final", unan_ud, None),
            ],
        ),
        _fixture(
            "prop5_loser_becomes_winner",
            "m=5: agenda (ax, bx, lw) crowns the Condorcet loser l",
            5,
            ("w", "l", "a", "b", "x"),
            [
                [("l", "a"), ("x", "w"), ("w", "b")],
                [("l", "b"), ("x", "w"), ("w", "a")],
                _chain("w", "a", "b", "x"),
                _chain("w", "a", "b", "x"),
                _chain("w", "a", "b", "x") + [("w", "l")],
                _chain("a", "b", "x", "l"),
                _chain("a", "b", "x", "l"),
            ],
            [("a", "x"), ("b", "x"), ("l", "w")],
            [
                Fact("initial", cw, "w"),
                Fact("initial_condorcet_loser", winner="l"),
                Fact("final", cw, "l"),
            ],
        ),
        _fixture(
            "prop6_plurdom_flip",
            "m=8: agenda (ax, by, cz) hands plurality dominance from w to l",
            8,
            ("w", "l", "a", "b", "c", "x", "y", "z"),
            [
                [("l", "a"), ("x", "w"), ("x", "b"), ("x", "c")],
                [("l", "b"), ("y", "w"), ("y", "a"), ("y", "c")],
                [("l", "c"), ("z", "w"), ("z", "a"), ("z", "b")],
                _chain("w", "a", "x", "b", "y", "c", "z", "l"),
                _chain("w", "a", "x", "b", "y", "c", "z", "l"),
            ],
            [("a", "x"), ("b", "y"), ("c", "z")],
            [
                Fact("initial", plur_dom, "w"),
                Fact("final", plur_dom, "l"),
            ],
        ),
        _fixture(
            "prop11_plurud_majud",
            "no order keeps a plurality/majority undominated consensus alive",
            3,
            ("a", "b", "c"),
            [
                _chain("c", "b", "a"),
                _chain("c", "b", "a"),
                _chain("a", "c", "b"),
                [("b", "c"), ("a", "c")],
                [("b", "c"), ("a", "c")],
            ],
            [],
            [
                Fact("initial", plur_ud, "a"),
                Fact("initial", maj_ud, "a"),
                Fact("all_orders", plur_ud, None),
                Fact("all_orders", maj_ud, None),
            ],
        ),
        _fixture(
            "prop12_two_unanud",
            "two unanimity-undominated alternatives: the chair picks either",
            3,
            ("a", "b", "c"),
            [[("b", "c")], [("b", "c")], [("b", "c")]],
            [],
            [
                Fact("initial", unan_ud, None),
                Fact("choosable", unan_ud, targets=("a", "b")),
            ],
        ),
        _fixture(
            "prop13_unandom",
            "every order generates the same dominant consensus b",
            3,
            ("a", "b", "c"),
            [
                [("b", "a"), ("c", "a")],
                [("a", "c"), ("b", "c")],
                [("a", "c"), ("b", "c")],
            ],
            [],
            [
                Fact("initial", unan_dom, None),
                Fact("initial", maj_dom, None),
                Fact("initial", plur_dom, None),
                Fact("initial", maj_ud, None),
                Fact("all_orders", unan_dom, "b"),
                Fact("all_orders", maj_dom, "b"),
                Fact("all_orders", plur_dom, "b"),
                Fact("all_orders", maj_ud, "b"),
            ],
        ),
        _fixture(
            "prop13_plurud",
            "every order generates the same plurality undominated consensus a",
            3,
            ("a", "b", "c"),
            [
                _chain("c", "a", "b"),
                _chain("b", "a", "c"),
                _chain("a", "b", "c"),
                [("a", "b"), ("c", "b")],
            ],
            [],
            [
                Fact("initial", plur_ud, None),
                Fact("all_orders", plur_ud, "a"),
            ],
        ),
    ]
    return {f.name: f for f in fixtures}
