from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from consensus_md.prefcore import (
    ClosureCreatesCycle,
    InvalidProfileError,
    Preference,
    Profile,
    SameAlternative,
    TierPartition,
    Violation,
    bits_to_pairs,
    completeness_level,
    default_labels,
    pairs_to_bits,
    profile_from_json,
    profile_to_json,
    support,
    tier_partition,
    transitive_closure,
    validate_preference,
)
from conftest import build_profile
from oracles import naive_closure


def close_pairs(m, pairs):
    return set(bits_to_pairs(m, transitive_closure(m, pairs_to_bits(m, pairs))))


# ---------------------------------------------------------------------------
# transitive_closure
# ---------------------------------------------------------------------------


def test_closure_adds_forced_pair():
    # an agent holding b>c who adopts a>b must also add a>c
    assert close_pairs(3, [(1, 2), (0, 1)]) == {(0, 1), (1, 2), (0, 2)}


def test_closure_of_empty_relation_is_empty():
    assert transitive_closure(3, 0) == 0


def test_closure_chain_matches_reachability_oracle():
    chain = [(0, 1), (1, 2), (2, 3)]
    assert close_pairs(4, chain) == naive_closure(set(chain))
    assert close_pairs(4, chain) == {(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (0, 3)}


def test_closure_rejects_cycles():
    with pytest.raises(ClosureCreatesCycle):
        transitive_closure(3, pairs_to_bits(3, [(0, 1), (1, 0)]))
    with pytest.raises(ClosureCreatesCycle):
        transitive_closure(3, pairs_to_bits(3, [(0, 1), (1, 2), (2, 0)]))


def test_closure_leaves_input_unchanged():
    raw = pairs_to_bits(4, [(0, 1), (1, 2)])
    transitive_closure(4, raw)
    assert raw == pairs_to_bits(4, [(0, 1), (1, 2)])


acyclic_relations = st.integers(3, 6).flatmap(
    lambda m: st.tuples(
        st.just(m),
        st.permutations(range(m)),
        st.sets(
            st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)).filter(
                lambda p: p[0] < p[1]
            )
        ),
    )
)


def _orient(perm, positions):
    """Orient chosen position pairs along a permutation: always acyclic."""
    return [(perm[i], perm[j]) for i, j in positions]


@given(acyclic_relations)
def test_closure_idempotent_and_valid(data):
    m, perm, positions = data
    raw = pairs_to_bits(m, _orient(perm, positions))
    closed = transitive_closure(m, raw)
    assert transitive_closure(m, closed) == closed
    assert validate_preference(m, closed) is None


@given(acyclic_relations)
def test_closure_matches_naive_reachability(data):
    m, perm, positions = data
    pairs = _orient(perm, positions)
    assert close_pairs(m, pairs) == naive_closure(set(pairs))


# ---------------------------------------------------------------------------
# validate_preference
# ---------------------------------------------------------------------------


def test_validate_accepts_total_order():
    assert validate_preference(3, pairs_to_bits(3, [(0, 1), (1, 2), (0, 2)])) is None


def test_validate_flags_missing_closure_edge():
    violation = validate_preference(3, pairs_to_bits(3, [(0, 1), (1, 2)]))
    assert violation == Violation("transitivity", (0, 1, 2))


def test_validate_flags_asymmetry():
    violation = validate_preference(3, pairs_to_bits(3, [(0, 1), (1, 0)]))
    assert violation == Violation("asymmetry", (0, 1))


def test_validate_flags_reflexive_entry():
    violation = validate_preference(3, 1 << (1 * 3 + 1))
    assert violation == Violation("irreflexivity", (1, 1))


# ---------------------------------------------------------------------------
# tier decomposition
# ---------------------------------------------------------------------------


def test_tiers_of_complete_order_are_singletons():
    pref = Preference.from_chain(3, [0, 1, 2])
    assert tier_partition(pref).tiers == ((0,), (1,), (2,))


def test_tiers_of_two_level_ordering():
    pref = Preference.from_pairs(3, [(0, 2), (1, 2)])
    assert tier_partition(pref).tiers == ((0, 1), (2,))


def test_single_comparison_is_not_a_weak_ordering():
    # b incomparable to both a and c while a>c holds
    assert tier_partition(Preference.from_pairs(3, [(0, 2)])) is None


def test_single_tier_partition_is_empty_preference():
    assert TierPartition(((0, 1, 2),)).to_preference(3).bits == 0


def test_all_singleton_partition_is_complete_order():
    pref = TierPartition(((1,), (0,), (2,))).to_preference(3)
    assert pref == Preference.from_chain(3, [1, 0, 2])


def test_tier_round_trip_over_all_weak_orderings():
    from consensus_md.gen import enumerate_weak_orderings

    for m in (3, 4):
        for pref in enumerate_weak_orderings(m):
            tiers = tier_partition(pref)
            assert tiers is not None
            assert tiers.to_preference(m).bits == pref.bits


# ---------------------------------------------------------------------------
# exhaustive m=3 counts
# ---------------------------------------------------------------------------


def test_exactly_19_partial_orders_and_13_weak_orderings_on_three():
    valid = 0
    weak = 0
    pair_list = [(0, 1), (0, 2), (1, 2)]
    for assignment in itertools.product((0, 1, 2), repeat=3):
        pairs = []
        for (a, b), t in zip(pair_list, assignment):
            if t == 0:
                pairs.append((a, b))
            elif t == 1:
                pairs.append((b, a))
        bits = pairs_to_bits(3, pairs)
        if validate_preference(3, bits) is None:
            valid += 1
            if tier_partition(Preference(3, bits)) is not None:
                weak += 1
    assert valid == 19
    assert weak == 13


# ---------------------------------------------------------------------------
# support and completeness
# ---------------------------------------------------------------------------


def test_support_on_opening_example(example1):
    b, a = example1.index_of("b"), example1.index_of("a")
    assert support(example1, b, a) == 2
    assert support(example1, a, b) == 0


def test_support_all_empty_profile_is_zero():
    profile = build_profile("abc", [[], [], []])
    for a in range(3):
        for b in range(3):
            if a != b:
                assert support(profile, a, b) == 0


def test_support_identical_complete_orders():
    profile = build_profile("abc", [[("a", "b"), ("b", "c")]] * 4)
    assert support(profile, 0, 1) == 4


def test_support_rejects_equal_alternatives(example1):
    with pytest.raises(SameAlternative):
        support(example1, 1, 1)


def test_support_invariant_under_agent_permutation(example1):
    shuffled = Profile(example1.labels, example1.prefs[::-1])
    for a in range(3):
        for b in range(3):
            if a != b:
                assert support(example1, a, b) == support(shuffled, a, b)


def test_completeness_levels():
    complete = build_profile("abc", [[("a", "b"), ("b", "c")]] * 2)
    assert completeness_level(complete) == 1.0
    empty = build_profile("abc", [[], []])
    assert completeness_level(empty) == 0.0


def test_completeness_of_opening_example(example1):
    assert completeness_level(example1) == pytest.approx(4 / 15)


# ---------------------------------------------------------------------------
# profile documents
# ---------------------------------------------------------------------------


def test_profile_json_round_trip(example1):
    assert profile_from_json(profile_to_json(example1)) == example1


def test_parser_applies_closure():
    profile = profile_from_json(
        '{"m": 3, "agents": [[["a", "b"], ["b", "c"]]]}'
    )
    assert profile.prefs[0].dominates(0, 2)


def test_parser_rejects_cyclic_agent_with_witness():
    with pytest.raises(InvalidProfileError, match="asymmetry"):
        profile_from_json('{"m": 3, "agents": [[["a", "b"], ["b", "a"]]]}')


def test_parser_rejects_unknown_label():
    with pytest.raises(InvalidProfileError, match="unknown label"):
        profile_from_json('{"m": 2, "agents": [[["a", "z"]]]}')


def test_parser_rejects_self_pair():
    with pytest.raises(InvalidProfileError, match="itself"):
        profile_from_json('{"m": 2, "agents": [[["a", "a"]]]}')


def test_parser_rejects_duplicate_labels():
    with pytest.raises(InvalidProfileError, match="distinct"):
        profile_from_json('{"m": 2, "labels": ["a", "a"], "agents": [[]]}')


def test_parser_rejects_missing_m():
    with pytest.raises(InvalidProfileError, match="'m'"):
        profile_from_json('{"agents": [[]]}')


def test_default_labels_follow_the_alphabet():
    assert default_labels(4) == ("a", "b", "c", "d")
