"""The consensus-md command line.

Subcommands: effects, completeness, control (experiment drivers), run-md,
control-search (single-profile tools), export-fixture and verify-fixtures
(the counterexample catalog).  CONSENSUS_MD_SEED overrides --seed.
"""

from __future__ import annotations

import argparse
import os
import sys

from .analysis import control_search
from .consensus import ALL_NOTIONS, Notion, outcome_label, qualifiers
from .dynamics import (
    enumerate_update_orders,
    lexicographic_order,
    md_run,
    num_update_orders,
    order_to_string,
    parse_order_spec,
    random_update_order,
)
from .gen import counterexample_catalog, make_rng, verify_fixture
from .harness import default_config, run_experiment
from .prefcore import Preference, load_profile, save_profile


def _parse_notions(text: str | None) -> tuple[Notion, ...]:
    if not text:
        return ALL_NOTIONS
    return tuple(Notion.from_tag(tag.strip()) for tag in text.split(","))


def _parse_agents(text: str | None, fallback: tuple[int, ...]) -> tuple[int, ...]:
    if not text:
        return fallback
    return tuple(int(tok) for tok in text.split(","))


def _seed(args) -> int:
    env = os.environ.get("CONSENSUS_MD_SEED")
    if env is not None:
        return int(env)
    return args.seed


def format_preference(pref: Preference, labels) -> str:
    if pref.is_complete():
        order = sorted(range(pref.m), key=lambda a: -sum(
            pref.bits >> (a * pref.m + b) & 1 for b in range(pref.m)
        ))
        return ">".join(labels[a] for a in order)
    if pref.bits == 0:
        return "(empty)"
    return ", ".join(f"{labels[a]}>{labels[b]}" for a, b in pref.pairs())


def _add_experiment_flags(sub, default_cfg):
    sub.add_argument("--agents", help="comma-separated agent counts")
    sub.add_argument("--alternatives", type=int, default=default_cfg.m, metavar="M")
    sub.add_argument("--samples", type=int, default=default_cfg.samples)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--order-policy", default=default_cfg.order_policy)
    sub.add_argument("--notions", help="comma-separated notion tags (default: all)")
    sub.add_argument("--out", required=True, help="CSV output path")
    sub.add_argument("--jobs", type=int, default=1)


def _cmd_experiment(kind: str, args) -> int:
    base = default_config(kind)
    config = default_config(
        kind,
        m=args.alternatives,
        agent_counts=_parse_agents(args.agents, base.agent_counts),
        samples=args.samples,
        seed=_seed(args),
        order_policy=args.order_policy,
        notions=_parse_notions(args.notions),
        out=args.out,
        jobs=args.jobs,
    )
    dataset = run_experiment(config)
    print(f"wrote {len(dataset.rows)} rows to {config.out}")
    return 0


def _cmd_run_md(args) -> int:
    profile = load_profile(args.profile)
    order = (
        parse_order_spec(args.order, profile.labels)
        if args.order
        else lexicographic_order(profile.m)
    )
    final, traces = md_run(profile, order, record_trace=args.trace)
    if args.trace:
        for t in traces:
            a, b = t.pair
            u, v = t.adopted
            print(
                f"pair {profile.labels[a]}{profile.labels[b]}: "
                f"support {t.support_first}/{t.support_second}, "
                f"adopted {profile.labels[u]}>{profile.labels[v]}, "
                f"{len(t.updaters)} updater(s)"
            )
    for i, pref in enumerate(final.prefs):
        print(f"agent {i}: {format_preference(pref, profile.labels)}")
    return 0


def _cmd_control_search(args) -> int:
    profile = load_profile(args.profile)
    notion = Notion.from_tag(args.notion)
    targets = (
        [profile.index_of(lab.strip()) for lab in args.targets.split(",")]
        if args.targets
        else None
    )
    if args.sample is not None:
        rng = make_rng(args.seed)
        orders = [random_update_order(profile.m, rng) for _ in range(args.sample)]
        exhaustive = False
    else:
        total = num_update_orders(profile.m)
        if total > 1_000_000:
            print(
                f"order space for m={profile.m} has {total} orders; "
                "use --sample K --seed S",
                file=sys.stderr,
            )
            return 2
        orders = enumerate_update_orders(profile.m)
        exhaustive = True
    report = control_search(notion, profile, orders, targets)
    report.exhaustive = exhaustive

    def flag(value) -> str:
        return "n/a" if value is None else ("yes" if value else "no")

    print(f"notion: {notion}")
    initial = outcome_label(profile, report.initial)
    qualifying = qualifiers(notion, profile)
    if report.initial is None and len(qualifying) > 1:
        tied = ",".join(profile.labels[i] for i in qualifying)
        initial += f" (tied qualifiers: {tied})"
    print(f"initial: {initial}")
    mode = "exhaustive" if exhaustive else f"sampled (seed {args.seed})"
    print(f"orders examined: {report.orders_examined} ({mode})")
    outcome_counts = ",".join(
        f"{outcome_label(profile, o)}={c}"
        for o, c in sorted(
            report.outcome_multiset.items(),
            key=lambda item: (item[0] is None, item[0]),
        )
    )
    print(f"outcomes: {outcome_counts}")
    print(
        "flags: "
        f"preserve_existence={flag(report.can_preserve_existence)} "
        f"preserve_identity={flag(report.can_preserve_identity)} "
        f"lose={flag(report.can_lose)} "
        f"generate={flag(report.can_generate)} "
        f"prevent_generation={flag(report.can_prevent_generation)} "
        f"negative_control={flag(report.negative_control_available)}"
    )
    print(
        "choosable: "
        + (",".join(profile.labels[i] for i in sorted(report.choosable)) or "(none)")
    )
    return 0


def _cmd_export_fixture(args) -> int:
    catalog = counterexample_catalog()
    if args.list or not args.name:
        for name, fx in catalog.items():
            print(f"{name}: {fx.summary}")
        return 0
    if args.name not in catalog:
        print(f"unknown fixture {args.name!r}; use --list", file=sys.stderr)
        return 2
    fixture = catalog[args.name]
    out = args.out or f"{args.name}.json"
    save_profile(fixture.profile, out)
    order = order_to_string(fixture.order, fixture.profile.labels)
    print(f"wrote {out} (order: {order})")
    return 0


def _cmd_verify_fixtures(args) -> int:
    catalog = counterexample_catalog()
    names = args.names.split(",") if args.names else list(catalog)
    failures = 0
    for name in names:
        if name not in catalog:
            print(f"FAIL  unknown fixture {name!r}")
            failures += 1
            continue
        for check in verify_fixture(catalog[name]):
            status = "ok  " if check.ok else "FAIL"
            detail = f"  [{check.detail}]" if check.detail and not check.ok else ""
            print(f"{status}  {name}: {check.description}{detail}")
            failures += 0 if check.ok else 1
    print(f"verify-fixtures: {failures} failure(s)")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="consensus-md",
        description="Majority dynamics for incomplete preferences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for kind in ("effects", "completeness", "control"):
        p = sub.add_parser(kind, help=f"run the {kind} experiment")
        _add_experiment_flags(p, default_config(kind))
        p.set_defaults(func=lambda args, kind=kind: _cmd_experiment(kind, args))

    p = sub.add_parser("run-md", help="run one majority-dynamics process")
    p.add_argument("--profile", required=True)
    p.add_argument("--order", help='update order, e.g. "ab,bc,ac" or "a>b,b>c,a>c"')
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=_cmd_run_md)

    p = sub.add_parser("control-search", help="search the order space of one profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--notion", required=True)
    p.add_argument("--exhaustive", action="store_true", default=True)
    p.add_argument("--sample", type=int, metavar="K")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--targets", help="comma-separated alternative labels")
    p.set_defaults(func=_cmd_control_search)

    p = sub.add_parser("export-fixture", help="write a catalog profile to a file")
    p.add_argument("--name")
    p.add_argument("--out")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=_cmd_export_fixture)

    p = sub.add_parser("verify-fixtures", help="check every catalog claim")
    p.add_argument("--names", help="comma-separated fixture names (default: all)")
    p.set_defaults(func=_cmd_verify_fixtures)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
