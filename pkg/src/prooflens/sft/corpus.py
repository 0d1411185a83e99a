"""Corpus assembly: style dispatch, size manifests, JSONL output."""

from __future__ import annotations

import dataclasses
import json
import random
from dataclasses import dataclass
from pathlib import Path

from prooflens.bench.data import problem_from_record
from prooflens.bench.prompts import build_prompt

from .gold import STYLES, Glossary, GoldProblem, necessary_facts
from .nl import gen_nl_target
from .symb import (
    _fact_index,
    gen_symb_direct_target,
    gen_symb_filter_target,
    gen_symb_struct_target,
)


class ManifestShortfall(ValueError):
    def __init__(self, depth, have: int, need: int):
        self.depth, self.have, self.need = depth, have, need
        super().__init__(f"depth {depth}: have {have} gold problems, need {need}")


@dataclass(frozen=True)
class SftSample:
    style: str
    prompt: str
    target: str
    depth: int | None
    source_id: str

    def to_record(self) -> dict:
        return {
            "style": self.style,
            "prompt": self.prompt,
            "target": self.target,
            "depth": self.depth,
            "source_id": self.source_id,
        }


@dataclass(frozen=True)
class CorpusManifest:
    dataset: str
    per_depth: dict
    unknown: int = 0

    @property
    def total(self) -> int:
        return sum(self.per_depth.values()) + self.unknown


FLD_MANIFEST = CorpusManifest("FLD", {d: 500 for d in range(16)}, unknown=1500)
PRONTOQA_MANIFEST = CorpusManifest("ProntoQA", {3: 3200})


def _filtered_problem(gold: GoldProblem):
    kept = sorted(necessary_facts(gold), key=_fact_index)
    sentences = [gold.problem.facts[_fact_index(label) - 1] for label in kept]
    return dataclasses.replace(gold.problem, facts=sentences)


def _prompt_for(gold: GoldProblem, style: str) -> str:
    # the filtered style also shrinks the model's input; other styles see
    # the problem as the benchmark would pose it
    if style == "SymbFilter":
        return build_prompt(_filtered_problem(gold), "direct")
    return build_prompt(gold.problem, "direct")


_TARGETS = {
    "NL": gen_nl_target,
    "SymbStruct": gen_symb_struct_target,
    "SymbFilter": gen_symb_filter_target,
    "SymbDirect": gen_symb_direct_target,
}


def gen_sample(gold: GoldProblem, style: str) -> SftSample:
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}, expected one of {STYLES}")
    return SftSample(
        style=style,
        prompt=_prompt_for(gold, style),
        target=_TARGETS[style](gold),
        depth=gold.depth,
        source_id=gold.id,
    )


def _take(pool: list[GoldProblem], need: int, rng: random.Random,
          depth_key) -> list[GoldProblem]:
    if len(pool) < need:
        raise ManifestShortfall(depth_key, len(pool), need)
    pool = sorted(pool, key=lambda g: g.id)
    if len(pool) == need:
        return pool
    return rng.sample(pool, need)


def build_corpus(golds, style: str, manifest: CorpusManifest,
                 seed: int = 0) -> tuple[list[SftSample], dict]:
    """Sample the manifest's per-depth quotas from the gold pool and render
    one SftSample per pick. Deterministic given (pool, style, manifest, seed)."""
    by_depth: dict[int, list[GoldProblem]] = {}
    unknowns: list[GoldProblem] = []
    for gold in golds:
        if gold.label == "Unknown":
            unknowns.append(gold)
        else:
            by_depth.setdefault(gold.depth, []).append(gold)

    chosen: list[GoldProblem] = []
    for depth in sorted(manifest.per_depth):
        need = manifest.per_depth[depth]
        rng = random.Random(f"{seed}:{manifest.dataset}:{depth}")
        chosen += _take(by_depth.get(depth, []), need, rng, depth)
    if manifest.unknown:
        rng = random.Random(f"{seed}:{manifest.dataset}:UNKNOWN")
        chosen += _take(unknowns, manifest.unknown, rng, "UNKNOWN")

    samples = [gen_sample(gold, style) for gold in chosen]
    counts: dict[str, dict[str, int]] = {}
    for gold in chosen:
        per_label = counts.setdefault(str(gold.depth), {})
        per_label[gold.label] = per_label.get(gold.label, 0) + 1
    report = {
        "style": style,
        "dataset": manifest.dataset,
        "total": len(samples),
        "counts": counts,
    }
    return samples, report


def write_corpus(samples, path, report: dict | None = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for sample in samples:
            fh.write(json.dumps(sample.to_record(), ensure_ascii=False) + "\n")
    if report is not None:
        manifest_path = path.with_suffix(".manifest.json")
        manifest_path.write_text(
            json.dumps(report, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# gold pool files: one problem record per line plus its symbol glossary

def save_gold_pool(path, golds) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for gold in golds:
            record = gold.problem.to_record()
            record["glossary"] = {
                "predicates": dict(gold.glossary.predicates),
                "entities": dict(gold.glossary.entities),
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_gold_pool(path) -> list[GoldProblem]:
    golds = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = json.loads(line)
            blob = record.pop("glossary", None)
            if not isinstance(blob, dict):
                raise ValueError(f"line {line_no}: record has no glossary")
            glossary = Glossary(predicates=dict(blob.get("predicates", {})),
                                entities=dict(blob.get("entities", {})))
            problem = problem_from_record(record, record.get("dataset", "custom"))
            golds.append(GoldProblem(problem=problem, glossary=glossary))
    return golds
