from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from consensus_md.prefcore import Profile


def build_profile(labels, agents) -> Profile:
    """Profile from label-pair lists, e.g. build_profile("abc", [[("a","c")], []])."""
    labels = tuple(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    return Profile.from_pair_lists(
        len(labels),
        [[(index[x], index[y]) for x, y in agent] for agent in agents],
        labels,
    )


def profile_to_label_sets(profile: Profile) -> list[set]:
    """The naive-oracle view: one set of (first, second) label tuples per agent."""
    return [
        {(profile.labels[a], profile.labels[b]) for a, b in pref.pairs()}
        for pref in profile.prefs
    ]


@pytest.fixture
def example1():
    from consensus_md.gen import counterexample_catalog

    return counterexample_catalog()["example1"].profile
