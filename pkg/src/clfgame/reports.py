"""CSV report rows and run manifests.

Every preset emits one long-format CSV — one metric value per row — plus a
manifest JSON capturing the fully resolved spec and seed, so a report can
be regenerated byte-for-byte from its manifest alone.

Metric names are drawn from a closed set of patterns:

    kl, max_abs_err                      per-trial convergence metrics;
                                         trial 0 is the pre-update baseline
    conditional_kl_L{j}                  final per-classifier conditional KL
    true_p_T{i}                          sampled actual type distribution
    selection_count_L{j}                 per-query selection tallies
    selection_pct_L{j}                   row-normalized, in percent
    accuracy, accuracy_T{i}              overall / per-type accuracy
    mean_learner_utility                 averaged over plays
    mean_adversary_utility
    baseline_learner_utility             fixed-policy comparison value
    acc_configured_L{j}_T{i}             accuracy-check: matrix entry,
    acc_empirical_L{j}_T{i}              oracle reconstruction,
    acc_abs_error_L{j}_T{i}              and their gap
    costs_strictly_increasing            1.0/0.0 validity flag

Rows with trial index -1 are aggregates over the whole run.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import NamedTuple

from . import __version__
from .config import ExperimentSpec, serialize_spec


class ReportRow(NamedTuple):
    """One metric observation in the long-format report."""

    experiment: str
    seed: int
    trial: int
    metric: str
    value: float


def write_report(rows: list[ReportRow], spec: ExperimentSpec, name: str,
                 notes: list[str] | None = None) -> list[Path]:
    """Write `<name>.csv` and `<name>_manifest.json` under the output dir.

    Values are rendered with `repr` so reruns with the same seed produce
    byte-identical files.
    """
    out = spec.output_dir
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{name}.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(ReportRow._fields)
        for row in rows:
            writer.writerow([row.experiment, row.seed, row.trial,
                             row.metric, repr(float(row.value))])
    manifest_path = out / f"{name}_manifest.json"
    manifest = {
        "name": name,
        "version": __version__,
        "spec": serialize_spec(spec),
        "n_rows": len(rows),
        "notes": notes or [],
    }
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return [csv_path, manifest_path]


def read_report(path: str | Path) -> list[ReportRow]:
    """Load a report CSV back into typed rows (mainly for tests)."""
    rows = []
    with Path(path).open(newline="") as handle:
        reader = csv.DictReader(handle)
        for record in reader:
            rows.append(ReportRow(
                experiment=record["experiment"],
                seed=int(record["seed"]),
                trial=int(record["trial"]),
                metric=record["metric"],
                value=float(record["value"]),
            ))
    return rows
