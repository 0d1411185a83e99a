"""Benchmark problem loading: one internal JSONL schema, per-dataset adapters.

Internal schema per line:
    {"id", "dataset", "facts": [str...], "facts_formula": [str...]?,
     "hypothesis", "hypothesis_formula"?, "label": "T"|"F"|"Unknown",
     "depth"?: int, "gold_proof"?: chain record}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from prooflens.proofs import ProofChain, chain_from_record

DATASETS = ("FLD", "FOLIO", "MultiLogiEval", "ProntoQA", "custom")

LABEL_SCHEMAS = {
    "FLD": frozenset({"T", "F", "Unknown"}),
    "FOLIO": frozenset({"T", "F", "Unknown"}),
    "MultiLogiEval": frozenset({"T", "F"}),
    "ProntoQA": frozenset({"T", "F"}),
    "custom": frozenset({"T", "F", "Unknown"}),
}

# expected test-split sizes; FLD additionally spans reasoning depths 0-19
MANIFEST_COUNTS = {"FLD": 1100, "FOLIO": 203, "MultiLogiEval": 390, "ProntoQA": 500}
FLD_DEPTH_RANGE = range(0, 20)


class SchemaError(ValueError):
    def __init__(self, reason: str, line: int | None = None):
        self.line = line
        self.reason = reason
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + reason)


class LabelOutOfSchema(SchemaError):
    pass


@dataclass
class Problem:
    id: str
    dataset: str
    facts: list[str]
    hypothesis: str
    label: str
    facts_formula: list[str] | None = None
    hypothesis_formula: str | None = None
    depth: int | None = None
    gold_proof: ProofChain | None = field(default=None, repr=False)

    def to_record(self) -> dict:
        record = {
            "id": self.id,
            "dataset": self.dataset,
            "facts": list(self.facts),
            "hypothesis": self.hypothesis,
            "label": self.label,
        }
        if self.facts_formula is not None:
            record["facts_formula"] = list(self.facts_formula)
        if self.hypothesis_formula is not None:
            record["hypothesis_formula"] = self.hypothesis_formula
        if self.depth is not None:
            record["depth"] = self.depth
        if self.gold_proof is not None:
            record["gold_proof"] = self.gold_proof.to_record()
        return record


def _problem_from_record(record: dict, kind: str, line: int) -> Problem:
    for key in ("id", "facts", "hypothesis", "label"):
        if key not in record:
            raise SchemaError(f"missing field {key!r}", line)
    dataset = record.get("dataset", kind)
    if dataset not in DATASETS:
        raise SchemaError(f"unknown dataset {dataset!r}", line)
    label = record["label"]
    if label not in LABEL_SCHEMAS[dataset]:
        raise LabelOutOfSchema(
            f"label {label!r} outside {sorted(LABEL_SCHEMAS[dataset])} for {dataset}", line)
    facts = record["facts"]
    if not isinstance(facts, list) or not all(isinstance(s, str) for s in facts):
        raise SchemaError("facts must be a list of strings", line)
    depth = record.get("depth")
    if depth is not None and (not isinstance(depth, int) or depth < 0):
        raise SchemaError(f"bad depth {depth!r}", line)
    if dataset == "FLD":
        if depth is None:
            raise SchemaError("FLD problems require a depth", line)
        if depth not in FLD_DEPTH_RANGE:
            raise SchemaError(f"FLD depth {depth} outside 0-19", line)
    gold = record.get("gold_proof")
    return Problem(
        id=str(record["id"]),
        dataset=dataset,
        facts=facts,
        hypothesis=record["hypothesis"],
        label=label,
        facts_formula=record.get("facts_formula"),
        hypothesis_formula=record.get("hypothesis_formula"),
        depth=depth,
        gold_proof=chain_from_record(gold, dialect="symbolic") if gold else None,
    )


def problem_from_record(record: dict, dataset_kind: str = "custom") -> Problem:
    """Validate and build one Problem from an already-decoded record."""
    return _problem_from_record(record, dataset_kind, line=0)


def load_dataset(path, dataset_kind: str, check_manifest: bool = True) -> list[Problem]:
    """Load and validate an internal-schema JSONL file.

    `check_manifest` enforces the published test-split size (and the depth
    range for FLD); disable it for subsets and custom data.
    """
    if dataset_kind not in DATASETS:
        raise ValueError(f"unknown dataset kind {dataset_kind!r}")
    problems: list[Problem] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"bad JSON: {exc}", line_no) from exc
            problems.append(_problem_from_record(record, dataset_kind, line_no))
    if not problems:
        raise SchemaError("empty dataset file")
    seen = set()
    for p in problems:
        if p.id in seen:
            raise SchemaError(f"duplicate problem id {p.id!r}")
        seen.add(p.id)
    if check_manifest and dataset_kind in MANIFEST_COUNTS:
        expected = MANIFEST_COUNTS[dataset_kind]
        if len(problems) != expected:
            raise SchemaError(f"{dataset_kind} manifest expects {expected} problems, "
                              f"got {len(problems)}")
    return problems


def save_dataset(path, problems) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for p in problems:
            fh.write(json.dumps(p.to_record(), ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# upstream-format adapters
#
# Each adapter maps one raw upstream record into the internal schema.  They
# cover the fields those releases actually carry; anything exotic should be
# converted upstream of this package.

def adapt_fld(raw: dict, idx: int) -> dict:
    # upstream: context/prompt_serial or facts; proof_label in {PROVED, DISPROVED, UNKNOWN}
    label_map = {"PROVED": "T", "DISPROVED": "F", "UNKNOWN": "Unknown",
                 "T": "T", "F": "F", "Unknown": "Unknown"}
    facts = raw.get("facts")
    if facts is None:
        context = raw.get("context", "")
        facts = [s.strip() for s in context.split("sent") if s.strip()] or [context]
    return {
        "id": str(raw.get("id", f"fld-{idx}")),
        "dataset": "FLD",
        "facts": facts,
        "hypothesis": raw.get("hypothesis", ""),
        "label": label_map[raw["label"] if "label" in raw else raw["proof_label"]],
        "depth": raw.get("depth", raw.get("original_tree_depth")),
    }


def adapt_folio(raw: dict, idx: int) -> dict:
    label_map = {"True": "T", "False": "F", "Uncertain": "Unknown",
                 "T": "T", "F": "F", "Unknown": "Unknown"}
    premises = raw.get("premises", raw.get("facts", []))
    if isinstance(premises, str):
        premises = [s.strip() for s in premises.splitlines() if s.strip()]
    return {
        "id": str(raw.get("example_id", raw.get("id", f"folio-{idx}"))),
        "dataset": "FOLIO",
        "facts": premises,
        "hypothesis": raw.get("conclusion", raw.get("hypothesis", "")),
        "label": label_map[str(raw["label"])],
    }


def _map_label(raw_value, mapping: dict) -> str:
    value = str(raw_value).strip()
    if value in mapping:
        return mapping[value]
    return mapping[value.lower()]


def adapt_multilogieval(raw: dict, idx: int) -> dict:
    # upstream answers are yes/no; we commit to yes->T, no->F
    context = raw.get("context", raw.get("facts", []))
    if isinstance(context, str):
        context = [s.strip() for s in context.splitlines() if s.strip()]
    return {
        "id": str(raw.get("id", f"mle-{idx}")),
        "dataset": "MultiLogiEval",
        "facts": context,
        "hypothesis": raw.get("question", raw.get("hypothesis", "")),
        "label": _map_label(raw.get("answer", raw.get("label")),
                            {"yes": "T", "no": "F", "T": "T", "F": "F"}),
    }


def adapt_prontoqa(raw: dict, idx: int) -> dict:
    context = raw.get("question", raw.get("context", raw.get("facts", [])))
    if isinstance(context, str):
        context = [s.strip() for s in context.split(". ") if s.strip()]
    return {
        "id": str(raw.get("id", f"prontoqa-{idx}")),
        "dataset": "ProntoQA",
        "facts": context,
        "hypothesis": raw.get("query", raw.get("hypothesis", "")),
        "label": _map_label(raw.get("answer", raw.get("label")),
                            {"true": "T", "false": "F", "T": "T", "F": "F",
                             "A": "T", "B": "F"}),
    }


ADAPTERS = {
    "FLD": adapt_fld,
    "FOLIO": adapt_folio,
    "MultiLogiEval": adapt_multilogieval,
    "ProntoQA": adapt_prontoqa,
}


def convert_upstream(path, dataset_kind: str, out_path) -> int:
    """Convert an upstream JSONL file into the internal schema. Returns count."""
    adapter = ADAPTERS[dataset_kind]
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(path, encoding="utf-8") as src, open(out_path, "w", encoding="utf-8") as dst:
        for idx, line in enumerate(src):
            if not line.strip():
                continue
            dst.write(json.dumps(adapter(json.loads(line), idx), ensure_ascii=False) + "\n")
            n += 1
    return n
