"""Prediction traces and the prefix-consistency span score."""

from __future__ import annotations

from dataclasses import dataclass


class EmptyTrace(ValueError):
    pass


@dataclass(frozen=True)
class PredictionTrace:
    """Per-step probe correctness over one problem's prefixes."""
    problem_id: str
    correct: tuple[bool, ...]

    def __post_init__(self):
        if not self.correct:
            raise EmptyTrace(self.problem_id)

    @property
    def length(self) -> int:
        return len(self.correct)


def onset_step(trace: PredictionTrace, mode: str = "suffix") -> int | None:
    """1-based step from which the probe is credited as settled.

    suffix (default): smallest i with every prediction at steps j >= i
    correct; None when the final step is wrong.  local: smallest i that is
    correct right after an incorrect i-1 (or i=1), ignoring later slips;
    None when nothing is correct.  The suffix reading is the strict one; the
    local flag exists for comparison.
    """
    flags = trace.correct
    k = len(flags)
    if mode == "suffix":
        if not flags[-1]:
            return None
        i = k
        while i > 1 and flags[i - 2]:
            i -= 1
        return i
    if mode == "local":
        for i in range(1, k + 1):
            if flags[i - 1] and (i == 1 or not flags[i - 2]):
                return i
        return None
    raise ValueError(f"unknown mode {mode!r}")


def css_span(trace: PredictionTrace, mode: str = "suffix") -> int:
    """Span = K - onset; 0 when the probe never settles."""
    onset = onset_step(trace, mode)
    if onset is None:
        return 0
    return trace.length - onset


def css_score(traces, mode: str = "suffix") -> float:
    """Mean span over traces."""
    traces = list(traces)
    if not traces:
        raise EmptyTrace("no traces")
    return sum(css_span(t, mode) for t in traces) / len(traces)
