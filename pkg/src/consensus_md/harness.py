"""Experiment drivers: effect frequencies, completeness sweep, control search.

Work is cut into fixed-size tasks (a chunk of profiles, or one profile with
its whole order space) whose random streams are keyed by (seed, task code),
so output is byte-identical for any worker count.  Results are reduced by
commutative addition and rows are emitted in a canonical sort order.
"""

from __future__ import annotations

import json
import multiprocessing
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from . import batch
from .analysis import ALL_EFFECTS, Effect
from .consensus import ALL_NOTIONS, Notion
from .dynamics import UpdateOrder, lexicographic_order, num_update_orders, order_to_string, parse_order_spec
from .gen import make_rng, task_code
from .prefcore import default_labels

CHUNK_SIZE = 4096

# task-code kinds for stream derivation
_KIND_EFFECTS = 1
_KIND_COMPLETENESS = 2
_KIND_CONTROL = 3
_KIND_ORDER_SAMPLE = 4

DEFAULT_AGENTS_EFFECTS = tuple(range(1, 26, 2))
DEFAULT_AGENTS_COMPLETENESS = (15,)
DEFAULT_AGENTS_CONTROL = (11,)

CONTROL_TYPES = (
    "preserve_existence",
    "preserve_identity",
    "lose",
    "prevent_generation",
    "generate",
    "choose_alternative",
)
# Normalisation base per control type: profiles with initial consensus,
# without one, or all of them.
_CONTROL_DENOMS = {
    "preserve_existence": "with",
    "preserve_identity": "with",
    "lose": "with",
    "prevent_generation": "without",
    "generate": "without",
    "choose_alternative": "all",
}

EFFECTS_HEADER = ("notion", "n", "m", "samples", "effect", "numerator", "denominator", "frequency")
COMPLETENESS_HEADER = ("notion", "bin_percent", "samples", "effect", "numerator", "denominator", "frequency")
CONTROL_HEADER = ("notion", "control_type", "numerator", "denominator", "frequency")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    m: int
    agent_counts: tuple[int, ...]
    samples: int
    seed: int
    order_policy: str = "lexicographic"
    notions: tuple[Notion, ...] = ALL_NOTIONS
    out: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.experiment not in ("effects", "completeness", "control"):
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.m < 3:
            raise ValueError("experiments need at least 3 alternatives")
        if self.m > batch.MAX_M:
            raise ValueError(f"experiments support m up to {batch.MAX_M}")
        if not self.agent_counts or any(n < 1 for n in self.agent_counts):
            raise ValueError("agent counts must be positive")
        if not self.notions:
            raise ValueError("at least one consensus notion is required")


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    base = {
        "effects": ExperimentConfig("effects", 5, DEFAULT_AGENTS_EFFECTS, 50_000, 0),
        "completeness": ExperimentConfig("completeness", 5, DEFAULT_AGENTS_COMPLETENESS, 50_000, 0),
        "control": ExperimentConfig(
            "control", 4, DEFAULT_AGENTS_CONTROL, 500, 0, order_policy="exhaustive"
        ),
    }[experiment]
    return replace(base, **overrides)


@dataclass
class Dataset:
    """Rows plus the metadata that describes how they were produced."""

    header: tuple[str, ...]
    rows: list[tuple]
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [",".join(self.header)]
        for row in self.rows:
            lines.append(",".join(_format_cell(x) for x in row))
        return "\n".join(lines) + "\n"

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())
        with open(path + ".meta.json", "w", encoding="utf-8") as fh:
            json.dump(self.meta, fh, indent=2, sort_keys=True)
            fh.write("\n")

    def lookup(self, **keys) -> list[tuple]:
        idx = {name: self.header.index(name) for name in keys}
        return [
            row
            for row in self.rows
            if all(row[idx[name]] == value for name, value in keys.items())
        ]


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _frequency(numerator: int, denominator: int) -> float | None:
    return None if denominator == 0 else numerator / denominator


# ---------------------------------------------------------------------------
# Deterministic task execution
# ---------------------------------------------------------------------------


def _run_tasks(fn: Callable, tasks: list[tuple], jobs: int) -> list:
    """Run fn over tasks; results come back in task order regardless of jobs."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with multiprocessing.Pool(processes=jobs) as pool:
        return pool.map(fn, tasks, chunksize=1)


def _chunks(total: int) -> list[tuple[int, int]]:
    """Fixed (index, size) chunking of a sample count, independent of jobs."""
    out = []
    start = 0
    idx = 0
    while start < total:
        size = min(CHUNK_SIZE, total - start)
        out.append((idx, size))
        start += size
        idx += 1
    return out


def _fixed_order(config: ExperimentConfig) -> UpdateOrder:
    policy = config.order_policy
    if policy == "lexicographic":
        return lexicographic_order(config.m)
    if policy.startswith("custom:"):
        return parse_order_spec(policy[len("custom:"):], default_labels(config.m))
    raise ValueError(
        f"order policy {policy!r} is not usable as a fixed update order"
    )


# ---------------------------------------------------------------------------
# Effects experiment
# ---------------------------------------------------------------------------


def _effect_counts(initial: np.ndarray, final: np.ndarray) -> dict[str, int]:
    has_i = initial >= 0
    has_f = final >= 0
    return {
        Effect.PRESERVED_IDENTITY.value: int((has_i & (final == initial)).sum()),
        Effect.PRESERVED_EXISTENCE_ONLY.value: int(
            (has_i & has_f & (final != initial)).sum()
        ),
        Effect.LOST.value: int((has_i & ~has_f).sum()),
        Effect.GENERATED.value: int((~has_i & has_f).sum()),
        Effect.ABSENCE_PRESERVED.value: int((~has_i & ~has_f).sum()),
    }


def _effects_task(args) -> dict:
    (m, n, cell_idx, chunk_idx, size, seed, order, notion_values) = args
    rng = make_rng(seed, task_code(_KIND_EFFECTS, cell_idx, chunk_idx))
    states = batch.batch_random_profiles(m, n, size, rng)
    notions = tuple(Notion(v) for v in notion_values)
    initial = batch.batch_outcomes(states, m, notions)
    finals = batch.batch_md_fixed_order(states, m, order)
    final = batch.batch_outcomes(finals, m, notions)
    result = {}
    for notion in notions:
        counts = _effect_counts(initial[notion], final[notion])
        with_consensus = int((initial[notion] >= 0).sum())
        result[notion.value] = (counts, with_consensus, size - with_consensus)
    return result


def _merge_effect_results(parts: Iterable[dict]) -> dict:
    total: dict = {}
    for part in parts:
        for notion_value, (counts, with_c, without_c) in part.items():
            slot = total.setdefault(
                notion_value, [{e.value: 0 for e in ALL_EFFECTS}, 0, 0]
            )
            for name, count in counts.items():
                slot[0][name] += count
            slot[1] += with_c
            slot[2] += without_c
    return total


_EFFECT_DENOM = {
    Effect.PRESERVED_IDENTITY.value: "with",
    Effect.PRESERVED_EXISTENCE_ONLY.value: "with",
    Effect.LOST.value: "with",
    Effect.GENERATED.value: "without",
    Effect.ABSENCE_PRESERVED.value: "without",
}


def experiment_effects(config: ExperimentConfig) -> Dataset:
    """Effect frequencies per agent count under one fixed update order.

    Preservation and loss are normalised over profiles with initial
    consensus, generation and absence-preservation over profiles without.
    """
    order = _fixed_order(config)
    notion_values = tuple(n.value for n in config.notions)
    tasks = []
    for cell_idx, n in enumerate(config.agent_counts):
        for chunk_idx, size in _chunks(config.samples):
            tasks.append(
                (config.m, n, cell_idx, chunk_idx, size, config.seed, order, notion_values)
            )
    results = _run_tasks(_effects_task, tasks, config.jobs)

    per_cell: dict[int, list] = {}
    for (args, res) in zip(tasks, results):
        per_cell.setdefault(args[2], []).append(res)

    rows = []
    for cell_idx, n in enumerate(config.agent_counts):
        merged = _merge_effect_results(per_cell[cell_idx])
        for notion in config.notions:
            counts, with_c, without_c = merged[notion.value]
            for effect in ALL_EFFECTS:
                denom = with_c if _EFFECT_DENOM[effect.value] == "with" else without_c
                num = counts[effect.value]
                rows.append(
                    (
                        notion.value,
                        n,
                        config.m,
                        config.samples,
                        effect.value,
                        num,
                        denom,
                        _frequency(num, denom),
                    )
                )
    meta = _base_meta(config)
    meta["fixed_order"] = order_to_string(order, default_labels(config.m))
    meta["degenerate_agent_counts"] = [n for n in config.agent_counts if n == 1]
    return Dataset(EFFECTS_HEADER, rows, meta)


# ---------------------------------------------------------------------------
# Completeness experiment
# ---------------------------------------------------------------------------


def _completeness_task(args) -> dict:
    (m, n, chunk_idx, size, seed, order, notion_values) = args
    rng = make_rng(seed, task_code(_KIND_COMPLETENESS, 0, chunk_idx))
    states = batch.batch_random_profiles(m, n, size, rng)
    notions = tuple(Notion(v) for v in notion_values)
    initial = batch.batch_outcomes(states, m, notions)
    finals = batch.batch_md_fixed_order(states, m, order)
    final = batch.batch_outcomes(finals, m, notions)
    # percent completeness rounded to the closest multiple of 5
    bins = (np.rint(batch.batch_completeness(states, m) * 20).astype(int) * 5)
    result: dict = {}
    for bin_percent in np.unique(bins):
        mask = bins == bin_percent
        slot = result.setdefault(int(bin_percent), {})
        for notion in notions:
            i_sel = initial[notion][mask]
            f_sel = final[notion][mask]
            counts = _effect_counts(i_sel, f_sel)
            with_c = int((i_sel >= 0).sum())
            slot[notion.value] = (counts, with_c, int(mask.sum()) - with_c)
    return result


def experiment_completeness(config: ExperimentConfig) -> Dataset:
    """Effect frequencies per completeness bin at a fixed agent count."""
    if len(config.agent_counts) != 1:
        raise ValueError("completeness experiment uses a single agent count")
    n = config.agent_counts[0]
    order = _fixed_order(config)
    notion_values = tuple(nt.value for nt in config.notions)
    tasks = [
        (config.m, n, chunk_idx, size, config.seed, order, notion_values)
        for chunk_idx, size in _chunks(config.samples)
    ]
    results = _run_tasks(_completeness_task, tasks, config.jobs)

    merged: dict[int, list] = {}
    for part in results:
        for bin_percent, slot in part.items():
            into = merged.setdefault(bin_percent, [])
            into.append(slot)

    rows = []
    for bin_percent in range(0, 101, 5):
        cell = _merge_effect_results(merged.get(bin_percent, []))
        for notion in config.notions:
            counts, with_c, without_c = cell.get(
                notion.value, [{e.value: 0 for e in ALL_EFFECTS}, 0, 0]
            )
            bin_samples = with_c + without_c
            for effect in ALL_EFFECTS:
                denom = with_c if _EFFECT_DENOM[effect.value] == "with" else without_c
                num = counts[effect.value]
                rows.append(
                    (
                        notion.value,
                        bin_percent,
                        bin_samples,
                        effect.value,
                        num,
                        denom,
                        _frequency(num, denom),
                    )
                )
    meta = _base_meta(config)
    meta["fixed_order"] = order_to_string(order, default_labels(config.m))
    meta["agents"] = n
    return Dataset(COMPLETENESS_HEADER, rows, meta)


# ---------------------------------------------------------------------------
# Control experiment
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4)
def _sampled_orders(m: int, count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = make_rng(seed, task_code(_KIND_ORDER_SAMPLE, 0, 0))
    return batch.random_orders_arrays(m, count, rng)


def _order_space(m: int, policy: str, seed: int) -> tuple[np.ndarray, np.ndarray, bool]:
    if policy == "exhaustive":
        if num_update_orders(m) > 1_000_000:
            raise ValueError(
                f"exhaustive order space for m={m} is infeasible; use sampled:<K>"
            )
        pa, pb = batch.all_orders_arrays(m)
        return pa, pb, True
    if policy.startswith("sampled:"):
        count = int(policy[len("sampled:"):])
        if count < 1:
            raise ValueError("sampled order count must be positive")
        pa, pb = _sampled_orders(m, count, seed)
        return pa, pb, False
    raise ValueError(f"control experiment needs 'exhaustive' or 'sampled:<K>', got {policy!r}")


def _control_profile_task(args) -> dict:
    (m, n, profile_idx, seed, notion_values, policy, target) = args
    rng = make_rng(seed, task_code(_KIND_CONTROL, 0, profile_idx))
    state = batch.batch_random_profiles(m, n, 1, rng)
    notions = tuple(Notion(v) for v in notion_values)
    initial = batch.batch_outcomes(state, m, notions)

    pair_a, pair_b, exhaustive = _order_space(m, policy, seed)
    k = pair_a.shape[0]
    states = np.repeat(state, k, axis=0)
    finals = batch.batch_md_per_instance(states, m, pair_a, pair_b)
    outcomes = batch.batch_outcomes(finals, m, notions)

    fixed_final = batch.batch_md_fixed_order(state, m, lexicographic_order(m))
    fixed_outcome = batch.batch_outcomes(fixed_final, m, notions)

    result = {}
    consistency_violations = 0
    for notion in notions:
        i0 = int(initial[notion][0])
        achieved = set(int(x) for x in np.unique(outcomes[notion]))
        flags = {
            "with_consensus": i0 >= 0,
            "preserve_existence": i0 >= 0 and any(o >= 0 for o in achieved),
            "preserve_identity": i0 >= 0 and i0 in achieved,
            "lose": i0 >= 0 and -1 in achieved,
            "prevent_generation": i0 < 0 and -1 in achieved,
            "generate": i0 < 0 and any(o >= 0 for o in achieved),
            "choose_alternative": target in achieved,
        }
        if exhaustive:
            f0 = int(fixed_outcome[notion][0])
            ok = True
            if i0 >= 0 and f0 == i0:
                ok = flags["preserve_identity"]
            elif i0 >= 0 and f0 >= 0:
                ok = flags["preserve_existence"]
            elif i0 >= 0:
                ok = flags["lose"]
            elif f0 >= 0:
                ok = flags["generate"]
            else:
                ok = flags["prevent_generation"]
            if not ok:
                consistency_violations += 1
        result[notion.value] = flags
    result["_consistency_violations"] = consistency_violations
    return result


def experiment_control(config: ExperimentConfig) -> Dataset:
    """Chair-control frequencies over the order space, per consensus notion.

    Existence/identity preservation and loss are normalised over profiles
    with initial consensus, generation and its prevention over profiles
    without one, and choosing a specific alternative over all profiles.
    """
    if len(config.agent_counts) != 1:
        raise ValueError("control experiment uses a single agent count")
    n = config.agent_counts[0]
    pair_a, _, exhaustive = _order_space(config.m, config.order_policy, config.seed)
    notion_values = tuple(nt.value for nt in config.notions)
    target = 0  # "choosing the consensus" tracks the first alternative
    tasks = [
        (config.m, n, idx, config.seed, notion_values, config.order_policy, target)
        for idx in range(config.samples)
    ]
    results = _run_tasks(_control_profile_task, tasks, config.jobs)

    rows = []
    consistency_violations = sum(r["_consistency_violations"] for r in results)
    for notion in config.notions:
        flags = [r[notion.value] for r in results]
        with_c = sum(1 for f in flags if f["with_consensus"])
        without_c = len(flags) - with_c
        denominators = {"with": with_c, "without": without_c, "all": len(flags)}
        for control_type in CONTROL_TYPES:
            num = sum(1 for f in flags if f[control_type])
            denom = denominators[_CONTROL_DENOMS[control_type]]
            rows.append(
                (notion.value, control_type, num, denom, _frequency(num, denom))
            )
    meta = _base_meta(config)
    meta["agents"] = n
    meta["orders_per_profile"] = int(pair_a.shape[0])
    meta["exhaustive_orders"] = exhaustive
    meta["choose_target"] = default_labels(config.m)[target]
    meta["consistency_violations"] = consistency_violations if exhaustive else None
    return Dataset(CONTROL_HEADER, rows, meta)


def _base_meta(config: ExperimentConfig) -> dict:
    return {
        "experiment": config.experiment,
        "m": config.m,
        "agent_counts": list(config.agent_counts),
        "samples": config.samples,
        "seed": config.seed,
        "order_policy": config.order_policy,
        "notions": [n.value for n in config.notions],
        "chunk_size": CHUNK_SIZE,
        "rng": "philox4x64 keyed by (seed, task_code)",
    }


def run_experiment(config: ExperimentConfig) -> Dataset:
    runner = {
        "effects": experiment_effects,
        "completeness": experiment_completeness,
        "control": experiment_control,
    }[config.experiment]
    dataset = runner(config)
    if config.out:
        dataset.write(config.out)
    return dataset
