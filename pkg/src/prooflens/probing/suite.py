"""End-to-end probing run: dump + split manifest -> per-task scores."""

from __future__ import annotations

import logging

import numpy as np

from prooflens.probing.probe import balanced_accuracy, train_probe
from prooflens.probing.records import TASKS, load_split, read_dump, validate_dump
from prooflens.probing.scores import PredictionTrace, css_score

log = logging.getLogger(__name__)


def _split_records(records, train_ids, test_ids):
    train = [r for r in records if r.problem_id in train_ids]
    test = [r for r in records if r.problem_id in test_ids]
    return train, test


def _css_traces(test_records, probe) -> list[PredictionTrace]:
    by_problem: dict[str, list] = {}
    for r in test_records:
        by_problem.setdefault(r.problem_id, []).append(r)
    traces = []
    for pid in sorted(by_problem):
        group = sorted(by_problem[pid], key=lambda r: r.step_index)
        X = np.stack([r.vector for r in group])
        preds = probe.predict(X)
        traces.append(PredictionTrace(
            problem_id=pid,
            correct=tuple(p == r.label for p, r in zip(preds, group)),
        ))
    return traces


def run_probing_suite(dump_path, split_manifest, seed: int = 0,
                      css_mode: str = "suffix") -> dict:
    """Train per-task probes on the train split, score the test split.

    CSS reports the mean prefix-consistency span; RFI and NSD report
    balanced accuracy (their class counts are constructed, not natural).
    """
    header = validate_dump(dump_path)
    _, records = read_dump(dump_path)
    train_ids, test_ids = load_split(split_manifest)

    report: dict = {
        "model_id": header["model_id"],
        "dim": header["dim"],
        "seed": seed,
        "tasks": {},
    }
    for task in TASKS:
        task_records = [r for r in records if r.task == task]
        if not task_records:
            continue
        train, test = _split_records(task_records, train_ids, test_ids)
        if not train or not test:
            log.warning("task %s: empty train or test split, skipped", task)
            continue
        probe = train_probe(train, seed=seed)
        row = {
            "n_train": len(train),
            "n_test": len(test),
            "C": probe.C,
        }
        if task == "CSS":
            traces = _css_traces(test, probe)
            row["metric"] = "mean-span"
            row["score"] = css_score(traces, mode=css_mode)
            row["mean_trace_length"] = sum(t.length for t in traces) / len(traces)
        else:
            X = np.stack([r.vector for r in test])
            preds = probe.predict(X)
            row["metric"] = "balanced-accuracy"
            row["score"] = balanced_accuracy(preds, [r.label for r in test])
        report["tasks"][task] = row
    return report
