"""Vectorised engines for the experiment harness.

Relations are uint64 words (bit a*m+b set iff a dominates b), so a batch of
profiles is a (batch, agents) array and every dynamics step or consensus
evaluation is a handful of elementwise passes.  Everything here mirrors the
reference implementations in prefcore/consensus/dynamics and is equivalence-
tested against them; m must be at most 8 so relations fit one word.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .consensus import Notion
from .dynamics import enumerate_update_orders, lexicographic_order
from .prefcore import Preference, Profile

U64 = np.uint64
MAX_M = 8

# Accept-rate guesses for the whole-assignment rejection sampler, by m.
_ACCEPT_RATE = {2: 1.0, 3: 0.70, 4: 0.30, 5: 0.072, 6: 0.0091, 7: 5.9e-4, 8: 2.7e-5}


def _check_m(m: int) -> None:
    if not 2 <= m <= MAX_M:
        raise ValueError(f"batch engine supports 2 <= m <= {MAX_M}, got {m}")


def profile_to_state(profile: Profile) -> np.ndarray:
    return np.array([p.bits for p in profile.prefs], dtype=U64)


def states_to_profiles(states: np.ndarray, m: int, labels) -> list[Profile]:
    return [
        Profile(labels, tuple(Preference(m, int(b)) for b in row)) for row in states
    ]


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


def _encode_trits(m: int, trits: np.ndarray) -> np.ndarray:
    """(k, npairs) per-pair assignments -> (k,) relation words."""
    base = lexicographic_order(m)
    bits = np.zeros(trits.shape[0], dtype=U64)
    for col, (a, b) in enumerate(base):
        t = trits[:, col]
        bits |= np.where(t == 0, U64(1 << (a * m + b)), U64(0))
        bits |= np.where(t == 1, U64(1 << (b * m + a)), U64(0))
    return bits


def transitive_mask(m: int, bits: np.ndarray) -> np.ndarray:
    """Boolean mask of relations that are already transitively closed."""
    row_mask = U64((1 << m) - 1)
    rows = [(bits >> U64(i * m)) & row_mask for i in range(m)]
    ok = np.ones(bits.shape, dtype=bool)
    for a in range(m):
        for b in range(m):
            if a == b:
                continue
            has_ab = (rows[a] >> U64(b)) & U64(1)
            ok &= ~((has_ab == 1) & ((rows[b] & ~rows[a]) != 0))
    return ok


def batch_random_relations(m: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """`count` uniform partial orders, drawn exactly like the reference
    sampler: whole assignments from one stream, rejected until transitive,
    accepted in stream order."""
    _check_m(m)
    npairs = m * (m - 1) // 2
    out = np.empty(count, dtype=U64)
    filled = 0
    rate = _ACCEPT_RATE[m]
    while filled < count:
        want = count - filled
        block = min(4_000_000, max(1024, int(want / rate * 1.25)))
        trits = rng.integers(0, 3, size=(block, npairs))
        bits = _encode_trits(m, trits)
        accepted = bits[transitive_mask(m, bits)]
        take = min(accepted.shape[0], want)
        out[filled : filled + take] = accepted[:take]
        filled += take
    return out


def batch_random_profiles(
    m: int, n: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """(count, n) relation words; agents are consecutive draws of one stream."""
    return batch_random_relations(m, count * n, rng).reshape(count, n)


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------


def _step(states: np.ndarray, m: int, a: np.ndarray, b: np.ndarray) -> None:
    """One discussion step, in place.  a and b are per-instance uint64
    vectors naming the discussed pair in its tie-breaking orientation."""
    one = U64(1)
    mvec = U64(m)
    row_mask = U64((1 << m) - 1)
    bit_ab = (a * mvec + b)[:, None]
    bit_ba = (b * mvec + a)[:, None]
    has_ab = (states >> bit_ab) & one
    has_ba = (states >> bit_ba) & one
    sup_ab = has_ab.sum(axis=1)
    sup_ba = has_ba.sum(axis=1)
    adopt_first = sup_ab >= sup_ba
    u = np.where(adopt_first, a, b)
    v = np.where(adopt_first, b, a)
    undecided = (has_ab | has_ba) == 0
    succ = ((states >> (v * mvec)[:, None]) & row_mask) | (one << v)[:, None]
    zero = U64(0)
    for i in range(m):
        iu = (U64(i * m) + u)[:, None]
        reaches_u = ((states >> iu) & one) == 1
        cond = undecided & ((u == i)[:, None] | reaches_u)
        states |= np.where(cond, succ << U64(i * m), zero)


def batch_md_fixed_order(states: np.ndarray, m: int, order) -> np.ndarray:
    """Run one update order on every instance; returns fresh final states."""
    _check_m(m)
    out = states.copy()
    count = out.shape[0]
    for a, b in order:
        _step(out, m, np.full(count, a, dtype=U64), np.full(count, b, dtype=U64))
    return out


def batch_md_per_instance(
    states: np.ndarray, m: int, pair_a: np.ndarray, pair_b: np.ndarray
) -> np.ndarray:
    """Run a different order on every instance; pair_a/pair_b are
    (batch, npairs) step matrices."""
    _check_m(m)
    out = states.copy()
    for t in range(pair_a.shape[1]):
        _step(out, m, pair_a[:, t].astype(U64), pair_b[:, t].astype(U64))
    return out


@lru_cache(maxsize=4)
def all_orders_arrays(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Every update order as (K, npairs) first/second index matrices, in the
    documented enumeration sequence."""
    orders = list(enumerate_update_orders(m))
    arr = np.array(orders, dtype=np.uint8)
    return arr[:, :, 0].copy(), arr[:, :, 1].copy()


def random_orders_arrays(
    m: int, count: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """`count` uniformly random update orders as step matrices."""
    base = np.array(lexicographic_order(m), dtype=np.uint8)
    npairs = base.shape[0]
    perm = np.argsort(rng.random((count, npairs)), axis=1)
    flips = rng.integers(0, 2, size=(count, npairs)).astype(bool)
    first = base[perm, 0]
    second = base[perm, 1]
    return np.where(flips, second, first), np.where(flips, first, second)


# ---------------------------------------------------------------------------
# Consensus
# ---------------------------------------------------------------------------


def undominated_count_matrix(states: np.ndarray, m: int) -> np.ndarray:
    """(batch, m): in how many agents each alternative is undominated."""
    n = states.shape[1]
    counts = np.empty((states.shape[0], m), dtype=np.int64)
    for a in range(m):
        col = sum(1 << (b * m + a) for b in range(m) if b != a)
        dominated = (states & U64(col)) != 0
        counts[:, a] = n - dominated.sum(axis=1)
    return counts


def dominant_count_matrix(states: np.ndarray, m: int) -> np.ndarray:
    """(batch, m): in how many agents each alternative is dominant."""
    row_mask = U64((1 << m) - 1)
    counts = np.empty((states.shape[0], m), dtype=np.int64)
    for a in range(m):
        want = U64(((1 << m) - 1) ^ (1 << a))
        rows = (states >> U64(a * m)) & row_mask
        counts[:, a] = (rows == want).sum(axis=1)
    return counts


def support_tensor(states: np.ndarray, m: int) -> np.ndarray:
    """(m, m, batch) pairwise supports."""
    sup = np.zeros((m, m, states.shape[0]), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            if a != b:
                sup[a, b] = ((states >> U64(a * m + b)) & U64(1)).sum(axis=1)
    return sup


def _unique_qualifier(qualifies: np.ndarray) -> np.ndarray:
    """(batch, m) bool -> (batch,) alternative index or -1."""
    total = qualifies.sum(axis=1)
    winner = np.argmax(qualifies, axis=1).astype(np.int8)
    return np.where(total == 1, winner, np.int8(-1))


def batch_condorcet_winner(states: np.ndarray, m: int, sup=None) -> np.ndarray:
    sup = support_tensor(states, m) if sup is None else sup
    qualifies = np.ones((states.shape[0], m), dtype=bool)
    for a in range(m):
        for b in range(m):
            if a != b:
                qualifies[:, a] &= sup[a, b] > sup[b, a]
    return _unique_qualifier(qualifies)


def batch_condorcet_loser(states: np.ndarray, m: int, sup=None) -> np.ndarray:
    sup = support_tensor(states, m) if sup is None else sup
    qualifies = np.ones((states.shape[0], m), dtype=bool)
    for a in range(m):
        for b in range(m):
            if a != b:
                qualifies[:, a] &= sup[a, b] < sup[b, a]
    return _unique_qualifier(qualifies)


def batch_outcomes(states: np.ndarray, m: int, notions) -> dict[Notion, np.ndarray]:
    """(batch,) outcome vector per requested notion; -1 encodes no consensus."""
    _check_m(m)
    n = states.shape[1]
    notions = tuple(notions)
    out: dict[Notion, np.ndarray] = {}
    need_und = any(
        k in notions for k in (Notion.UNAN_UD, Notion.MAJ_UD, Notion.PLUR_UD)
    )
    need_dom = any(
        k in notions for k in (Notion.UNAN_DOM, Notion.MAJ_DOM, Notion.PLUR_DOM)
    )
    und = undominated_count_matrix(states, m) if need_und else None
    dom = dominant_count_matrix(states, m) if need_dom else None
    for notion in notions:
        if notion is Notion.CW:
            out[notion] = batch_condorcet_winner(states, m)
            continue
        counts = und if notion in (Notion.UNAN_UD, Notion.MAJ_UD, Notion.PLUR_UD) else dom
        if notion in (Notion.UNAN_UD, Notion.UNAN_DOM):
            qualifies = counts == n
        elif notion in (Notion.MAJ_UD, Notion.MAJ_DOM):
            qualifies = 2 * counts > n
        else:
            best = counts.max(axis=1, keepdims=True)
            qualifies = (counts == best) & (counts > 0)
        out[notion] = _unique_qualifier(qualifies)
    return out


def batch_dominated_by_all(states: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Per alternative, (batch, m) flags for the unanimity- and
    majority-dominated quality predicates."""
    n = states.shape[1]
    bottom_counts = np.empty((states.shape[0], m), dtype=np.int64)
    for a in range(m):
        col = U64(sum(1 << (b * m + a) for b in range(m) if b != a))
        bottom = (states & col) == col
        bottom_counts[:, a] = bottom.sum(axis=1)
    return bottom_counts == n, 2 * bottom_counts > n


def batch_completeness(states: np.ndarray, m: int) -> np.ndarray:
    """Fraction of comparisons provided, per instance."""
    provided = np.bitwise_count(states).sum(axis=1)
    total = states.shape[1] * m * (m - 1) // 2
    return provided / total
