"""CSV/JSON report tables for benchmark runs."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from prooflens.bench.data import Problem
from prooflens.bench.metrics import DEFAULT_BINS, abstention_rate, accuracy, accuracy_by_depth
from prooflens.bench.run import EvalRecord

SUMMARY_COLUMNS = ("dataset", "mode", "N", "accuracy", "abstention-rate")
DEPTH_COLUMNS = ("dataset", "mode", "bin", "count", "accuracy")


def summary_row(dataset: str, mode: str, records: list[EvalRecord]) -> dict:
    return {
        "dataset": dataset,
        "mode": mode,
        "N": len(records),
        "accuracy": accuracy(records),
        "abstention-rate": abstention_rate(records),
    }


def depth_table(dataset: str, mode: str, records: list[EvalRecord],
                problems: list[Problem], bins=DEFAULT_BINS) -> list[dict]:
    rows = []
    for row in accuracy_by_depth(records, problems, bins):
        rows.append({
            "dataset": dataset,
            "mode": mode,
            "bin": row["bin"],
            "count": row["count"],
            "accuracy": row["accuracy"],
        })
    return rows


def write_csv(path, rows: list[dict], columns) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in columns})


def write_json(path, rows: list[dict]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rows, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def write_records(path, records: list[EvalRecord]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_record(), ensure_ascii=False) + "\n")
