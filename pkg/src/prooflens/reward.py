"""Multi-objective reward: accuracy plus weighted soundness and span terms.

R_total = R_acc + w_v * R_valid + w_r * R_relevant + w_a * R_atomic
          + w_c * R_css

The step components can be folded two ways: "all-or-nothing" keeps the
per-chain products (a single bad step zeroes the term), "fractional" takes
per-step means (denser signal, the default).  The span component is an
optional probe-derived trace; when absent its term is 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from prooflens.probing.scores import PredictionTrace, css_span
from prooflens.steps.verdicts import ChainVerdict

MODES = ("fractional", "all-or-nothing")

REPORT_FIELDS = ("sample_id", "R_acc", "R_valid", "R_relevant",
                 "R_atomic", "R_css", "R_total")


class OutOfRangeComponent(ValueError):
    def __init__(self, component: str, value):
        self.component = component
        self.value = value
        super().__init__(f"{component}={value!r} outside its allowed range")


class AlignmentError(ValueError):
    pass


@dataclass(frozen=True)
class RewardWeights:
    """Nonnegative finite weights for the four optional terms."""

    w_v: float
    w_r: float
    w_a: float
    w_c: float

    def __post_init__(self):
        for name in ("w_v", "w_r", "w_a", "w_c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name}={value!r} must be finite and >= 0")


@dataclass(frozen=True)
class RewardInputs:
    """One sample's reward components, already folded to chain level.

    r_acc is the final-answer indicator; the three soundness terms are
    either step fractions or 0/1 products depending on how they were
    folded; r_css is None when no prediction trace was supplied.
    """

    r_acc: float
    r_valid: float
    r_relevant: float
    r_atomic: float
    r_css: float | None = None

    def __post_init__(self):
        if self.r_acc not in (0, 1):
            raise OutOfRangeComponent("r_acc", self.r_acc)
        for name in ("r_valid", "r_relevant", "r_atomic"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise OutOfRangeComponent(name, value)
        if self.r_css is not None:
            if not (math.isfinite(self.r_css) and 0.0 <= self.r_css <= 1.0):
                raise OutOfRangeComponent("r_css", self.r_css)


def compute_reward(inputs: RewardInputs, weights: RewardWeights) -> float:
    css = 0.0 if inputs.r_css is None else inputs.r_css
    return (inputs.r_acc
            + weights.w_v * inputs.r_valid
            + weights.w_r * inputs.r_relevant
            + weights.w_a * inputs.r_atomic
            + weights.w_c * css)


def normalized_css(trace: PredictionTrace, mode: str = "suffix") -> float:
    """Span scaled to [0,1]: 1 when the probe settles at step 1, 0 when it
    settles only at the last step or never."""
    return css_span(trace, mode) / max(trace.length - 1, 1)


def _fold(verdict: ChainVerdict, mode: str) -> tuple[float, float, float]:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if verdict.malformed:
        return 0.0, 0.0, 0.0
    if not verdict.steps:
        # vacuous products; accuracy still gates unearned reward
        return (float(verdict.all_valid), float(verdict.all_relevant),
                float(verdict.all_atomic))
    if mode == "all-or-nothing":
        return (float(verdict.all_valid), float(verdict.all_relevant),
                float(verdict.all_atomic))
    n = len(verdict.steps)
    return (sum(s.v_effective for s in verdict.steps) / n,
            sum(s.r_effective for s in verdict.steps) / n,
            sum(s.a_effective for s in verdict.steps) / n)


def inputs_from_verdict(verdict: ChainVerdict, correct: bool,
                        trace: PredictionTrace | None = None,
                        mode: str = "fractional") -> RewardInputs:
    r_valid, r_relevant, r_atomic = _fold(verdict, mode)
    r_css = None if trace is None else normalized_css(trace)
    return RewardInputs(r_acc=float(bool(correct)), r_valid=r_valid,
                        r_relevant=r_relevant, r_atomic=r_atomic, r_css=r_css)


def reward_batch(sample_ids: Sequence[str],
                 verdicts: Sequence[ChainVerdict],
                 correctness: Sequence[bool],
                 weights: RewardWeights,
                 mode: str = "fractional",
                 traces: Sequence[PredictionTrace | None] | None = None,
                 ) -> list[dict]:
    """Per-sample reward rows, aligned by position.

    All sequences must have one entry per sample; traces may be omitted
    entirely (every css term 0) or carry None for untraced samples.
    """
    n = len(sample_ids)
    if len(verdicts) != n or len(correctness) != n:
        raise AlignmentError(
            f"{n} ids vs {len(verdicts)} verdicts vs {len(correctness)} answers")
    if traces is None:
        traces = [None] * n
    elif len(traces) != n:
        raise AlignmentError(f"{n} ids vs {len(traces)} traces")
    if len(set(sample_ids)) != n:
        raise AlignmentError("duplicate sample ids")
    rows = []
    for sid, verdict, correct, trace in zip(sample_ids, verdicts,
                                            correctness, traces):
        inputs = inputs_from_verdict(verdict, correct, trace, mode)
        rows.append({
            "sample_id": sid,
            "R_acc": inputs.r_acc,
            "R_valid": inputs.r_valid,
            "R_relevant": inputs.r_relevant,
            "R_atomic": inputs.r_atomic,
            "R_css": 0.0 if inputs.r_css is None else inputs.r_css,
            "R_total": compute_reward(inputs, weights),
        })
    return rows


def write_rewards(rows: Iterable[dict], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps({k: row[k] for k in REPORT_FIELDS},
                                ensure_ascii=False) + "\n")
