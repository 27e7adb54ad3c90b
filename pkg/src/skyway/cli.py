"""Command line entry point: ``skyway compose | experiment | extract | generate``.

Exit codes: 0 success, 2 infeasible query, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import fields
from pathlib import Path

from .composition import DeliveryQuery, exhaustive_composition, top_k_composition
from .congestion import StationProfiles, load_profiles
from .errors import InfeasibleError, InputError
from .fleet import DEFAULT_FLEET, load_drones
from .harness.config import ExperimentConfig, convert_value, dump_config, load_config
from .harness.experiment import load_inputs, run_experiment
from .harness.report import emit_report
from .network import extract_subnetwork, load_network, road_network, save_network

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INPUT = 3

log = logging.getLogger("skyway")


def _print_plan(rank: int, plan) -> None:
    route = "-".join(str(n) for n in plan.nodes)
    t = "n/a" if plan.extended_time is None else f"{plan.extended_time:9.2f}"
    print(f"{rank:>4}  S_n={plan.base_time:9.2f}  T_n={t}  dist={plan.distance:8.3f} km  {route}")


def cmd_compose(args) -> int:
    net = load_network(args.nodes, args.edges)
    fleet = load_drones(args.drones) if args.drones else list(DEFAULT_FLEET)
    profiles = load_profiles(args.profiles) if args.profiles else StationProfiles()
    query = DeliveryQuery(args.source, args.dest, args.start_min, args.weight)
    plans = top_k_composition(net, fleet, query, args.k, profiles)
    print(f"drone: {plans[0].drone.model}")
    print(f"top-{args.k} compositions re-ranked by delivery time (minutes):")
    for i, plan in enumerate(plans, start=1):
        _print_plan(i, plan)
    report = {
        "query": {
            "source": query.source,
            "destination": query.destination,
            "start_min": query.start_time,
            "weight_kg": query.weight,
            "k": args.k,
        },
        "drone": plans[0].drone.model,
        "plans": [p.to_dict() for p in plans],
    }
    if args.exhaustive:
        best = exhaustive_composition(net, fleet, query, profiles, max_hops=args.max_hops)
        print("exhaustive optimum:")
        _print_plan(1, best)
        report["exhaustive"] = best.to_dict()
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_experiment(args) -> int:
    overrides = {
        f.name: convert_value(f.name, getattr(args, f.name))
        for f in fields(ExperimentConfig)
        if getattr(args, f.name, None) is not None
    }
    config = load_config(args.config, **overrides)
    network, fleet = load_inputs(config)
    records = run_experiment(config, network, fleet)
    if not records:
        log.error("every run was skipped; nothing to report")
        return EXIT_INFEASIBLE
    metrics, summary = emit_report(records, args.out)
    (Path(args.out) / "config.txt").write_text(dump_config(config), encoding="utf-8")
    print(f"{len(records)} records -> {metrics}, {summary}")
    return EXIT_OK


def cmd_extract(args) -> int:
    net = load_network(args.nodes, args.edges)
    sub = extract_subnetwork(net, args.n, args.seed)
    save_network(sub, f"{args.out_prefix}_nodes.csv", f"{args.out_prefix}_edges.csv")
    print(f"extracted {len(sub)} nodes, {len(sub.segments)} segments")
    return EXIT_OK


def cmd_generate(args) -> int:
    net = road_network(args.n, args.seed, spacing=args.spacing, extra_edge_prob=args.extra_edge_prob)
    save_network(net, f"{args.out_prefix}_nodes.csv", f"{args.out_prefix}_edges.csv")
    print(f"generated {len(net)} nodes, {len(net.segments)} segments")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skyway", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compose", help="compose one delivery")
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    p.add_argument("--drones", help="drone CSV (default: built-in fleet)")
    p.add_argument("--profiles", help="station load CSV (default: baseline everywhere)")
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--dest", type=int, required=True)
    p.add_argument("--weight", type=float, required=True, help="package weight in kg")
    p.add_argument("--start-min", type=float, default=0.0, help="query start, minutes of day")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--exhaustive", action="store_true", help="also run the exhaustive baseline")
    p.add_argument("--max-hops", type=int, default=None,
                   help="cap on exhaustive path length (default: number of nodes)")
    p.add_argument("--json", metavar="OUT", help="write the plan report as JSON")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("experiment", help="exhaustive vs top-k benchmark")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--out", required=True, help="output directory")
    for f in fields(ExperimentConfig):
        p.add_argument("--" + f.name.replace("_", "-"), dest=f.name, default=None,
                       help=f"override {f.name} (default {f.default!r})")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("extract", help="cut a connected subnetwork")
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("generate", help="write a synthetic road-like network")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spacing", type=float, default=3000.0, help="grid spacing in metres")
    p.add_argument("--extra-edge-prob", type=float, default=0.7)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InputError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
