"""Accuracy metrics over evaluation records."""

from __future__ import annotations

from prooflens.bench.data import Problem
from prooflens.bench.run import EvalRecord
from prooflens.errors import EmptyCohort

# depth bins for the stratified table
DEFAULT_BINS = ((0, 3), (4, 7), (8, 11), (12, 15), (16, 19))


class DepthMissing(ValueError):
    """A record's problem lacks the depth needed for binning."""


def accuracy(records: list[EvalRecord]) -> float:
    if not records:
        raise EmptyCohort("no records")
    return sum(r.correct for r in records) / len(records)


def abstention_rate(records: list[EvalRecord]) -> float:
    if not records:
        raise EmptyCohort("no records")
    return sum(r.predicted == "NONE" for r in records) / len(records)


def accuracy_by_depth(records: list[EvalRecord], problems: list[Problem],
                      bins=DEFAULT_BINS) -> list[dict]:
    """Rows of {bin, lo, hi, count, accuracy}, ordered as given.

    Bins covering no problems report count 0 and accuracy None.
    """
    depth_by_id = {p.id: p.depth for p in problems}
    tallies = {b: [0, 0] for b in bins}  # bin -> [correct, total]
    for record in records:
        depth = depth_by_id.get(record.problem_id)
        if depth is None:
            raise DepthMissing(f"problem {record.problem_id} has no depth")
        for lo, hi in bins:
            if lo <= depth <= hi:
                tally = tallies[(lo, hi)]
                tally[0] += record.correct
                tally[1] += 1
                break
    rows = []
    for lo, hi in bins:
        correct, total = tallies[(lo, hi)]
        rows.append({
            "bin": f"{lo}-{hi}",
            "lo": lo,
            "hi": hi,
            "count": total,
            "accuracy": correct / total if total else None,
        })
    return rows
