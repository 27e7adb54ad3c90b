from __future__ import annotations

import csv
import statistics
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import ContractViolation
from .experiment import MetricsRecord, method_rank

METRICS_HEADER = (
    "method",
    "node_count",
    "run",
    "seed",
    "source",
    "destination",
    "execution_time_ms",
    "delivery_time_min",
    "distance_km",
    "parallelism",
)

# (csv prefix, record attribute)
SUMMARY_METRICS = (
    ("execution_time_ms", "execution_time"),
    ("delivery_time_min", "delivery_time"),
    ("distance_km", "distance"),
)


def _fmt(x: float) -> str:
    return repr(float(x))


def emit_report(records: Sequence[MetricsRecord], out_dir: str | Path) -> tuple[Path, Path]:
    """Write ``metrics.csv`` and ``summary.csv`` into ``out_dir``."""
    if not records:
        raise ContractViolation("no records to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ordered = sorted(records, key=lambda r: (r.node_count, r.run, method_rank(r.method)))

    metrics_path = out / "metrics.csv"
    with open(metrics_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(METRICS_HEADER)
        for r in ordered:
            writer.writerow([
                r.method, r.node_count, r.run, r.seed, r.source, r.destination,
                _fmt(r.execution_time), _fmt(r.delivery_time), _fmt(r.distance), r.parallelism,
            ])

    groups: dict[tuple[int, str], list[MetricsRecord]] = defaultdict(list)
    for r in ordered:
        groups[(r.node_count, r.method)].append(r)

    summary_path = out / "summary.csv"
    with open(summary_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["method", "node_count", "runs"]
        for name, _ in SUMMARY_METRICS:
            header += [f"{name}_mean", f"{name}_std"]
        writer.writerow(header)
        for (n, method) in sorted(groups, key=lambda g: (g[0], method_rank(g[1]))):
            rows = groups[(n, method)]
            line = [method, n, len(rows)]
            for _, attr in SUMMARY_METRICS:
                values = [getattr(r, attr) for r in rows]
                std = statistics.stdev(values) if len(values) > 1 else 0.0
                line += [_fmt(statistics.fmean(values)), _fmt(std)]
            writer.writerow(line)
    return metrics_path, summary_path


def read_metrics(path: str | Path) -> list[MetricsRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [
            MetricsRecord(
                method=row["method"],
                node_count=int(row["node_count"]),
                run=int(row["run"]),
                execution_time=float(row["execution_time_ms"]),
                delivery_time=float(row["delivery_time_min"]),
                distance=float(row["distance_km"]),
                seed=int(row["seed"]),
                source=int(row["source"]),
                destination=int(row["destination"]),
                parallelism=int(row["parallelism"]),
            )
            for row in csv.DictReader(fh)
        ]


def read_summary(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
