"""Probing tasks over hidden-state dumps: prefix consistency, fact
necessity, and step-derivability discrimination."""

from prooflens.probing.probe import (
    C_GRID,
    ConvergenceFailure,
    DimensionMismatch,
    GRADIENT_TOL,
    MissingClass,
    Probe,
    SingleClassTrainingSet,
    balanced_accuracy,
    fit_logistic,
    train_probe,
)
from prooflens.probing.records import (
    DumpFormatError,
    RepresentationRecord,
    SplitLeakage,
    TASKS,
    TASK_LABELS,
    load_split,
    make_header,
    read_dump,
    validate_dump,
    write_dump,
)
from prooflens.probing.scores import (
    EmptyTrace,
    PredictionTrace,
    css_score,
    css_span,
    onset_step,
)
from prooflens.probing.suite import run_probing_suite
from prooflens.probing.tasks import (
    InstanceSpec,
    InsufficientCandidates,
    InsufficientFacts,
    MissingGoldProof,
    build_css_prefixes,
    build_nsd_instances,
    build_rfi_instances,
    problem_header,
)

__all__ = [
    "C_GRID",
    "ConvergenceFailure",
    "DimensionMismatch",
    "DumpFormatError",
    "EmptyTrace",
    "GRADIENT_TOL",
    "InstanceSpec",
    "InsufficientCandidates",
    "InsufficientFacts",
    "MissingClass",
    "MissingGoldProof",
    "PredictionTrace",
    "Probe",
    "RepresentationRecord",
    "SingleClassTrainingSet",
    "SplitLeakage",
    "TASKS",
    "TASK_LABELS",
    "balanced_accuracy",
    "build_css_prefixes",
    "build_nsd_instances",
    "build_rfi_instances",
    "css_score",
    "css_span",
    "fit_logistic",
    "load_split",
    "make_header",
    "onset_step",
    "problem_header",
    "read_dump",
    "run_probing_suite",
    "train_probe",
    "validate_dump",
    "write_dump",
]
