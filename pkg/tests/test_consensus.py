from __future__ import annotations

import itertools

import pytest

from consensus_md.consensus import (
    ALL_NOTIONS,
    Notion,
    condorcet_loser,
    condorcet_winner,
    consensus,
    dominant_alternative,
    dominated_by_all,
    qualifiers,
    undominated_counts,
    undominated_set,
)
from consensus_md.gen import counterexample_catalog, enumerate_preferences, make_rng, random_profile
from consensus_md.prefcore import Preference, Profile, default_labels
from conftest import build_profile, profile_to_label_sets
from oracles import naive_consensus


@pytest.fixture(scope="module")
def catalog():
    return counterexample_catalog()


# ---------------------------------------------------------------------------
# per-ranking predicates
# ---------------------------------------------------------------------------


def test_undominated_set_examples():
    assert undominated_set(Preference.from_chain(3, [0, 1, 2])) == {0}
    assert undominated_set(Preference.empty(3)) == {0, 1, 2}
    assert undominated_set(Preference.from_pairs(3, [(0, 2), (1, 2)])) == {0, 1}


def test_dominant_alternative_examples():
    assert dominant_alternative(Preference.from_chain(3, [0, 1, 2])) == 0
    assert dominant_alternative(Preference.from_pairs(3, [(0, 1)])) is None
    assert dominant_alternative(Preference.from_pairs(3, [(0, 1), (0, 2)])) == 0


def test_undominated_set_never_empty():
    for pref in enumerate_preferences(3):
        assert undominated_set(pref)


# ---------------------------------------------------------------------------
# Condorcet winner / loser
# ---------------------------------------------------------------------------


def test_condorcet_winner_of_settled_example(catalog):
    fixture = catalog["example1"]
    final = build_profile("abc", [[("b", "a"), ("a", "c")]] * 5)
    assert condorcet_winner(final) == final.index_of("b")


def test_condorcet_winner_of_prop2_profile(catalog):
    profile = catalog["prop2_cw_lost"].profile
    assert condorcet_winner(profile) == profile.index_of("w")


def test_condorcet_cycle_has_no_winner_or_loser():
    cycle = build_profile(
        "abc",
        [
            [("a", "b"), ("b", "c")],
            [("b", "c"), ("c", "a")],
            [("c", "a"), ("a", "b")],
        ],
    )
    assert condorcet_winner(cycle) is None
    assert condorcet_loser(cycle) is None


def test_condorcet_loser_of_prop5_profile(catalog):
    profile = catalog["prop5_loser_becomes_winner"].profile
    assert condorcet_loser(profile) == profile.index_of("l")


def test_condorcet_loser_of_identical_orders():
    profile = build_profile("abc", [[("a", "b"), ("b", "c")]] * 5)
    assert condorcet_loser(profile) == profile.index_of("c")


def test_winner_and_loser_never_coincide():
    rng = make_rng(1234)
    for _ in range(300):
        profile = random_profile(3, 3, rng)
        w, l = condorcet_winner(profile), condorcet_loser(profile)
        assert w is None or l is None or w != l


# ---------------------------------------------------------------------------
# consensus with the uniqueness rule
# ---------------------------------------------------------------------------


def test_unanud_on_prop3_third_profile(catalog):
    profile = catalog["prop3_unanud"].profile
    assert consensus(Notion.UNAN_UD, profile) == profile.index_of("a")


def test_plurdom_on_prop3_second_profile(catalog):
    profile = catalog["prop3_plurdom"].profile
    assert consensus(Notion.PLUR_DOM, profile) == profile.index_of("a")


def test_majud_empty_profile_has_no_unique_winner():
    profile = build_profile("abc", [[], [], []])
    assert consensus(Notion.MAJ_UD, profile) is None
    # every alternative clears the threshold; uniqueness is what fails
    assert qualifiers(Notion.MAJ_UD, profile) == (0, 1, 2)


def test_plurality_tie_reports_no_consensus_but_exposes_tie(catalog):
    profile = catalog["prop13_plurud"].profile
    assert consensus(Notion.PLUR_UD, profile) is None
    assert len(qualifiers(Notion.PLUR_UD, profile)) == 2


def test_single_agent_profile_notions_reduce_to_the_ranking():
    profile = build_profile("abc", [[("a", "b"), ("b", "c")]])
    for notion in ALL_NOTIONS:
        assert consensus(notion, profile) == 0


# ---------------------------------------------------------------------------
# brute-force equivalence on the full n <= 3, m = 3 space
# ---------------------------------------------------------------------------


def test_consensus_matches_naive_recount_exhaustively():
    labels = default_labels(3)
    prefs = enumerate_preferences(3)
    assert len(prefs) == 19
    checked = 0
    for n in (1, 2, 3):
        for combo in itertools.product(prefs, repeat=n):
            profile = Profile(labels, combo)
            agents = profile_to_label_sets(profile)
            for notion in ALL_NOTIONS:
                fast = consensus(notion, profile)
                naive = naive_consensus(notion.value, agents, labels)
                assert (None if fast is None else labels[fast]) == naive
            checked += 1
    assert checked == 19 + 19**2 + 19**3


# ---------------------------------------------------------------------------
# invariances
# ---------------------------------------------------------------------------


def test_consensus_invariant_under_agent_permutation():
    rng = make_rng(77)
    for _ in range(50):
        profile = random_profile(4, 4, rng)
        shuffled = Profile(profile.labels, profile.prefs[::-1])
        for notion in ALL_NOTIONS:
            assert consensus(notion, profile) == consensus(notion, shuffled)


def test_consensus_equivariant_under_relabeling():
    rng = make_rng(78)
    for _ in range(50):
        profile = random_profile(4, 3, rng)
        perm = [int(x) for x in rng.permutation(4)]
        remapped = Profile(
            profile.labels,
            tuple(
                Preference.from_pairs(4, [(perm[a], perm[b]) for a, b in p.pairs()])
                for p in profile.prefs
            ),
        )
        for notion in ALL_NOTIONS:
            original = consensus(notion, profile)
            mapped = consensus(notion, remapped)
            assert mapped == (None if original is None else perm[original])


def test_notions_collapse_on_complete_preferences():
    rng = make_rng(79)
    for _ in range(50):
        profile = random_profile(4, 3, rng)
        from consensus_md.dynamics import lexicographic_order, md_run

        final, _ = md_run(profile, lexicographic_order(4))
        for pref in final.prefs:
            assert undominated_set(pref) == {dominant_alternative(pref)}


def test_majud_count_chain():
    # when one alternative is undominated everywhere and no rival clears the
    # majority threshold, the majority notion settles on it
    prefs = enumerate_preferences(3)
    labels = default_labels(3)
    for combo in itertools.product(prefs, repeat=2):
        profile = Profile(labels, combo)
        counts = undominated_counts(profile)
        everywhere = [a for a in range(3) if counts[a] == profile.n]
        if len(everywhere) == 1:
            a = everywhere[0]
            rivals = [b for b in range(3) if b != a and 2 * counts[b] > profile.n]
            if not rivals:
                assert consensus(Notion.MAJ_UD, profile) == a


# ---------------------------------------------------------------------------
# dominated-by-all quality predicate
# ---------------------------------------------------------------------------


def test_dominated_by_all_identical_orders():
    profile = build_profile("abc", [[("a", "b"), ("b", "c")]] * 3)
    assert dominated_by_all(profile, "all") == {profile.index_of("c")}


def test_dominated_by_all_empty_profile():
    profile = build_profile("abc", [[], []])
    assert dominated_by_all(profile, "all") == frozenset()
    assert dominated_by_all(profile, "majority") == frozenset()


def test_prop5_loser_is_not_majority_dominated(catalog):
    profile = catalog["prop5_loser_becomes_winner"].profile
    assert dominated_by_all(profile, "majority") == frozenset()


def test_dominated_by_all_requires_every_comparison():
    # c is bottom for the first agent but the second leaves {a, c} open
    profile = build_profile("abc", [[("a", "b"), ("b", "c")], [("b", "c")]])
    assert dominated_by_all(profile, "all") == frozenset()
    assert dominated_by_all(profile, "majority") == frozenset()


def test_dominated_by_all_rejects_unknown_threshold(example1):
    with pytest.raises(ValueError):
        dominated_by_all(example1, "most")
