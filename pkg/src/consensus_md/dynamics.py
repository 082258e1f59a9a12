"""The sequential majority-update process over an agenda of alternative pairs.

An update order is a sequence containing exactly one orientation of every
unordered pair.  When a pair is discussed, agents without an opinion on it
adopt the orientation with the larger support (ties, including 0-0, go to the
first alternative of the discussed pair) and close their relation
transitively.  Agents who already compare the pair never change.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .prefcore import Preference, Profile, SameAlternative

UpdateOrder = tuple[tuple[int, int], ...]


def check_update_order(order: Sequence[tuple[int, int]], m: int) -> None:
    """Raise ValueError unless the order covers every unordered pair exactly once."""
    seen = set()
    for a, b in order:
        if a == b:
            raise SameAlternative(f"order contains pair ({a},{a})")
        if not (0 <= a < m and 0 <= b < m):
            raise ValueError(f"pair ({a},{b}) out of range for m={m}")
        key = frozenset((a, b))
        if key in seen:
            raise ValueError(f"unordered pair {{{a},{b}}} appears twice")
        seen.add(key)
    expected = m * (m - 1) // 2
    if len(seen) != expected:
        raise ValueError(f"order covers {len(seen)} pairs, expected {expected}")


def lexicographic_order(m: int) -> UpdateOrder:
    """Pairs sorted by (first index, second index), oriented (lower, higher)."""
    return tuple((a, b) for a in range(m) for b in range(a + 1, m))


def enumerate_update_orders(m: int) -> Iterator[UpdateOrder]:
    """All (m(m-1)/2)! * 2^(m(m-1)/2) update orders, each exactly once.

    Sequence: pair permutations in lexicographic order over the base
    (lower, higher) pair list, and within each permutation the orientation
    masks in binary-counting order, bit t of the mask flipping the pair at
    position t to (higher, lower).
    """
    base = lexicographic_order(m)
    count = len(base)
    for perm in itertools.permutations(base):
        for mask in range(1 << count):
            yield tuple(
                (p[1], p[0]) if mask >> t & 1 else p for t, p in enumerate(perm)
            )


def num_update_orders(m: int) -> int:
    count = m * (m - 1) // 2
    total = 1 << count
    for k in range(2, count + 1):
        total *= k
    return total


def complete_order(prefix: Sequence[tuple[int, int]], m: int) -> UpdateOrder:
    """Extend a pair prefix to a full order, appending the missing pairs
    lexicographically with (lower, higher) orientation."""
    seen = {frozenset(p) for p in prefix}
    tail = tuple(p for p in lexicographic_order(m) if frozenset(p) not in seen)
    order = tuple(prefix) + tail
    check_update_order(order, m)
    return order


def random_update_order(m: int, rng) -> UpdateOrder:
    """Uniformly random update order (random pair sequence and orientations)."""
    base = list(lexicographic_order(m))
    idx = rng.permutation(len(base))
    flips = rng.integers(0, 2, size=len(base))
    return tuple(
        (base[i][1], base[i][0]) if f else base[i] for i, f in zip(idx, flips)
    )


def order_to_string(order: Sequence[tuple[int, int]], labels: Sequence[str]) -> str:
    return ",".join(f"{labels[a]}{labels[b]}" for a, b in order)


def parse_order_spec(spec: str, labels: Sequence[str]) -> UpdateOrder:
    """Parse "ab,bc,ac" (single-character labels) or "a>b,b>c,a>c"."""
    index = {lab: i for i, lab in enumerate(labels)}
    pairs = []
    for token in spec.split(","):
        token = token.strip()
        if ">" in token:
            first, second = (part.strip() for part in token.split(">", 1))
        elif len(token) == 2:
            first, second = token[0], token[1]
        else:
            raise ValueError(f"cannot parse pair {token!r}; use 'ab' or 'a>b'")
        if first not in index or second not in index:
            raise ValueError(f"unknown label in pair {token!r}")
        pairs.append((index[first], index[second]))
    check_update_order(pairs, len(labels))
    return tuple(pairs)


@dataclass(frozen=True)
class StepTrace:
    """What happened when one pair was discussed.

    ``adopted`` is the orientation the undecided agents inserted;
    ``updaters`` are the agents that had no prior opinion on the pair;
    ``closure_additions`` maps each updater to the pairs its transitive
    closure added beyond the adopted one.
    """

    pair: tuple[int, int]
    support_first: int
    support_second: int
    adopted: tuple[int, int]
    updaters: tuple[int, ...]
    closure_additions: dict[int, tuple[tuple[int, int], ...]]


def _closure_after_edge(m: int, bits: int, u: int, v: int) -> int:
    """Closure of an already-closed relation plus the single edge (u, v).

    Everything reaching u (plus u itself) now dominates everything v
    dominates (plus v itself).  The caller guarantees the agent holds
    neither orientation of {u, v}, so no cycle can arise.
    """
    row_mask = (1 << m) - 1
    succ = ((bits >> (v * m)) & row_mask) | (1 << v)
    out = bits | (succ << (u * m))
    for i in range(m):
        if bits >> (i * m + u) & 1:
            out |= succ << (i * m)
    return out


def _step_bits(
    m: int, rels: list[int], a: int, b: int
) -> tuple[int, int, tuple[int, int], list[int]]:
    """Apply one discussion step in place; returns supports, adopted pair,
    and the updater indices."""
    bit_ab = 1 << (a * m + b)
    bit_ba = 1 << (b * m + a)
    sup_ab = sum(1 for r in rels if r & bit_ab)
    sup_ba = sum(1 for r in rels if r & bit_ba)
    u, v = (a, b) if sup_ab >= sup_ba else (b, a)
    updaters = []
    for i, r in enumerate(rels):
        if not r & (bit_ab | bit_ba):
            rels[i] = _closure_after_edge(m, r, u, v)
            updaters.append(i)
    return sup_ab, sup_ba, (u, v), updaters


def md_step(profile: Profile, pair: tuple[int, int]) -> tuple[Profile, StepTrace]:
    """Discuss one pair: majority adoption by undecided agents, then closure."""
    a, b = pair
    if a == b:
        raise SameAlternative(f"step on pair ({a},{a})")
    m = profile.m
    rels = [p.bits for p in profile.prefs]
    before = list(rels)
    sup_ab, sup_ba, adopted, updaters = _step_bits(m, rels, a, b)
    adopted_bit = 1 << (adopted[0] * m + adopted[1])
    additions = {}
    for i in updaters:
        gained = rels[i] & ~before[i] & ~adopted_bit
        additions[i] = tuple(
            (x, y) for x in range(m) for y in range(m) if gained >> (x * m + y) & 1
        )
    new_profile = Profile(
        profile.labels, tuple(Preference(m, r) for r in rels)
    )
    trace = StepTrace(
        pair=(a, b),
        support_first=sup_ab,
        support_second=sup_ba,
        adopted=adopted,
        updaters=tuple(updaters),
        closure_additions=additions,
    )
    return new_profile, trace


def md_run(
    profile: Profile,
    order: Sequence[tuple[int, int]],
    record_trace: bool = False,
) -> tuple[Profile, tuple[StepTrace, ...]]:
    """Run the full process along an update order.

    The result is a profile of complete preferences.  Traces are collected
    only when requested, keeping the hot path allocation-free.
    """
    check_update_order(order, profile.m)
    if record_trace:
        traces = []
        current = profile
        for pair in order:
            current, trace = md_step(current, pair)
            traces.append(trace)
        return current, tuple(traces)
    m = profile.m
    rels = [p.bits for p in profile.prefs]
    for a, b in order:
        _step_bits(m, rels, a, b)
    return Profile(profile.labels, tuple(Preference(m, r) for r in rels)), ()
