"""Per-step and per-chain verdict types plus the sample-level aggregates."""

from __future__ import annotations

from dataclasses import dataclass

from prooflens.errors import EmptyCohort  # noqa: F401  (canonical home)


# where a verdict came from
JUDGE_SOURCES = ("symbolic", "remote", "skipped")


@dataclass(frozen=True)
class StepVerdict:
    """Validity / relevance / atomicity flags for one proof step.

    Unknown markers record that the corresponding flag could not be decided
    (search budget exhausted, judge unreachable, or the step was skipped
    entirely); unknown flags count as false in aggregates.
    """

    label: str
    v: bool
    r: bool
    a: bool
    v_unknown: bool = False
    r_unknown: bool = False
    a_unknown: bool = False
    judge_source: str = "symbolic"

    def __post_init__(self):
        if self.judge_source not in JUDGE_SOURCES:
            raise ValueError(f"bad judge_source: {self.judge_source!r}")
        if self.judge_source == "skipped":
            # a skipped step decides nothing
            if not (self.v_unknown and self.r_unknown and self.a_unknown):
                raise ValueError("skipped steps must carry unknown markers")

    # unknown maps to false when folded into products
    @property
    def v_effective(self) -> bool:
        return self.v and not self.v_unknown

    @property
    def r_effective(self) -> bool:
        return self.r and not self.r_unknown

    @property
    def a_effective(self) -> bool:
        return self.a and not self.a_unknown

    def to_record(self) -> dict:
        return {
            "label": self.label,
            "v": self.v,
            "r": self.r,
            "a": self.a,
            "v_unknown": self.v_unknown,
            "r_unknown": self.r_unknown,
            "a_unknown": self.a_unknown,
            "judge_source": self.judge_source,
        }

    @classmethod
    def from_record(cls, record: dict) -> "StepVerdict":
        return cls(
            label=record["label"],
            v=bool(record["v"]),
            r=bool(record["r"]),
            a=bool(record["a"]),
            v_unknown=bool(record.get("v_unknown", False)),
            r_unknown=bool(record.get("r_unknown", False)),
            a_unknown=bool(record.get("a_unknown", False)),
            judge_source=record.get("judge_source", "symbolic"),
        )


@dataclass
class ChainVerdict:
    """Chain-level verdicts: products of the per-step flags.

    Empty chains have vacuously true products but carry `excluded` so that
    aggregates can drop them instead of rewarding evasive output.  Malformed
    chains fail all three metrics outright.
    """

    problem_id: str | None
    steps: tuple[StepVerdict, ...]
    all_valid: bool
    all_relevant: bool
    all_atomic: bool
    excluded: bool = False
    malformed: bool = False

    def to_record(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "steps": [s.to_record() for s in self.steps],
            "all_valid": self.all_valid,
            "all_relevant": self.all_relevant,
            "all_atomic": self.all_atomic,
            "excluded": self.excluded,
            "malformed": self.malformed,
        }

    @classmethod
    def from_record(cls, record: dict) -> "ChainVerdict":
        return cls(
            problem_id=record.get("problem_id"),
            steps=tuple(StepVerdict.from_record(s) for s in record["steps"]),
            all_valid=bool(record["all_valid"]),
            all_relevant=bool(record["all_relevant"]),
            all_atomic=bool(record["all_atomic"]),
            excluded=bool(record.get("excluded", False)),
            malformed=bool(record.get("malformed", False)),
        )


def aggregate(verdicts: list[ChainVerdict]) -> dict:
    """Fraction of chains whose every step passes each flag.

    Each metric is (1/N) * sum over chains of the product of per-step flags,
    unknowns counted as 0.  Excluded (empty) chains are dropped from N;
    EmptyCohort if nothing remains.  Unknown-rate columns expose how many
    step verdicts were undecided rather than silently failing them.
    """
    usable = [cv for cv in verdicts if not cv.excluded]
    if not usable:
        raise EmptyCohort("no non-excluded chains to aggregate")
    n = len(usable)
    n_steps = sum(len(cv.steps) for cv in usable)
    v_unknown = sum(s.v_unknown for cv in usable for s in cv.steps)
    a_unknown = sum(s.a_unknown for cv in usable for s in cv.steps)
    return {
        "AllValid": sum(cv.all_valid for cv in usable) / n,
        "AllRelevant": sum(cv.all_relevant for cv in usable) / n,
        "AllAtomic": sum(cv.all_atomic for cv in usable) / n,
        "n_chains": n,
        "n_excluded": len(verdicts) - n,
        "unknown_rate_validity": v_unknown / n_steps if n_steps else 0.0,
        "unknown_rate_atomicity": a_unknown / n_steps if n_steps else 0.0,
    }
