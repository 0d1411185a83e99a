"""Benchmark harness: datasets, prompts, endpoint runs, accuracy tables."""

from prooflens.bench.data import (
    ADAPTERS,
    DATASETS,
    FLD_DEPTH_RANGE,
    LABEL_SCHEMAS,
    LabelOutOfSchema,
    MANIFEST_COUNTS,
    Problem,
    SchemaError,
    convert_upstream,
    load_dataset,
    problem_from_record,
    save_dataset,
)
from prooflens.bench.metrics import (
    DEFAULT_BINS,
    DepthMissing,
    abstention_rate,
    accuracy,
    accuracy_by_depth,
)
from prooflens.bench.prompts import (
    COT_TEMPLATE,
    DIRECT_TEMPLATE,
    FEWSHOT_TEMPLATE,
    MODES,
    MissingExemplar,
    build_prompt,
    fact_labels,
    format_facts,
)
from prooflens.bench.report import (
    DEPTH_COLUMNS,
    SUMMARY_COLUMNS,
    depth_table,
    summary_row,
    write_csv,
    write_json,
    write_records,
)
from prooflens.bench.run import MARKER_TO_LABEL, EvalRecord, grade_output, run_eval
from prooflens.errors import EmptyCohort

__all__ = [
    "ADAPTERS",
    "COT_TEMPLATE",
    "DATASETS",
    "DEFAULT_BINS",
    "DEPTH_COLUMNS",
    "DIRECT_TEMPLATE",
    "DepthMissing",
    "EmptyCohort",
    "EvalRecord",
    "FEWSHOT_TEMPLATE",
    "FLD_DEPTH_RANGE",
    "LABEL_SCHEMAS",
    "LabelOutOfSchema",
    "MANIFEST_COUNTS",
    "MARKER_TO_LABEL",
    "MODES",
    "MissingExemplar",
    "Problem",
    "SUMMARY_COLUMNS",
    "SchemaError",
    "abstention_rate",
    "accuracy",
    "accuracy_by_depth",
    "build_prompt",
    "convert_upstream",
    "depth_table",
    "fact_labels",
    "format_facts",
    "grade_output",
    "load_dataset",
    "problem_from_record",
    "run_eval",
    "save_dataset",
    "summary_row",
    "write_csv",
    "write_json",
    "write_records",
]
