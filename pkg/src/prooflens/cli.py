"""Command-line entry point: one config file, six subcommands, run manifests.

Exit codes: 0 success, 1 internal error, 2 configuration or input validation
error, 3 partial completion (some records errored but reports were written).
Every successful or partial run writes `run_manifest.json` next to its
outputs: config hash, seeds, toolkit version, and input file digests.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import sys
from pathlib import Path

from prooflens import __version__
from prooflens.bench import (
    LabelOutOfSchema,
    SchemaError,
    depth_table,
    load_dataset,
    run_eval,
    summary_row,
    write_csv,
    write_json,
    write_records,
    DEPTH_COLUMNS,
    SUMMARY_COLUMNS,
)
from prooflens.config import ConfigError, RunConfig, load_config
from prooflens.errors import EmptyCohort
from prooflens.logic import Budget, FormulaSyntaxError, parse_formula
from prooflens.net import EndpointConfig
from prooflens.probing import DumpFormatError, SplitLeakage, run_probing_suite
from prooflens.proofs import parse_proof
from prooflens.reward import (
    AlignmentError,
    OutOfRangeComponent,
    RewardWeights,
    reward_batch,
    write_rewards,
)
from prooflens.probing.scores import PredictionTrace
from prooflens.sft import (
    FLD_MANIFEST,
    PRONTOQA_MANIFEST,
    STYLES,
    CorpusManifest,
    GlossaryGap,
    ManifestShortfall,
    build_corpus,
    load_gold_pool,
    write_corpus,
)
from prooflens.steps import (
    CheckerConfig,
    ChainVerdict,
    JudgeClient,
    aggregate,
    evaluate_chains,
)

log = logging.getLogger("prooflens")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_PARTIAL = 3

# input problems map onto exit 2; anything unlisted is an internal error
_VALIDATION_ERRORS = (
    ConfigError, SchemaError, LabelOutOfSchema, DumpFormatError, SplitLeakage,
    ManifestShortfall, AlignmentError, OutOfRangeComponent, GlossaryGap,
    EmptyCohort, FileNotFoundError,
)


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def _out_dir(config: RunConfig, args) -> Path:
    out = Path(args.out) if args.out else Path(str(config.get("output_dir", "runs")))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _seed(config: RunConfig, args, key: str) -> int:
    if args.seed is not None:
        return args.seed
    return int(config.get(key, config.get("seed", 0)))


def _write_manifest(out: Path, command: str, config: RunConfig, seed,
                    inputs: list[Path], jobs) -> None:
    manifest = {
        "command": command,
        "toolkit_version": __version__,
        "config_path": str(config.path),
        "config_sha256": config.digest,
        "seed": seed,
        "jobs": jobs,
        "inputs": {str(p): _sha256_file(Path(p)) for p in inputs},
    }
    (out / "run_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _endpoint(config: RunConfig, dotted: str, args,
              cache_default: Path | None) -> EndpointConfig:
    section = config.get(dotted)
    if not isinstance(section, dict):
        raise ConfigError(f"{dotted} must be an object")
    for key in ("url", "model"):
        if key not in section:
            raise ConfigError(f"{dotted}.{key} is required")
    cache = section.get("cache_dir", str(cache_default) if cache_default else None)
    pool = args.jobs if args.jobs else int(section.get("pool_size", 4))
    return EndpointConfig(
        url=section["url"],
        model=section["model"],
        max_tokens=int(section.get("max_tokens", 512)),
        text_field=section.get("text_field", "text"),
        cache_dir=cache,
        retries=int(section.get("retries", 3)),
        backoff=float(section.get("backoff", 0.5)),
        timeout=float(section.get("timeout", 30.0)),
        pool_size=pool,
        headers=section.get("headers"),
    )


# ---------------------------------------------------------------------------
# subcommands

def cmd_eval_bench(config: RunConfig, args) -> int:
    dataset_path = config.require_path("bench.dataset")
    kind = str(config.get("bench.kind"))
    mode = str(config.get("bench.mode", "direct"))
    check_manifest = bool(config.get("bench.check_manifest", True))
    exemplars = config.get("bench.exemplars", None)
    answer_tag = config.get("bench.answer_tag", None)
    out = _out_dir(config, args)
    endpoint = _endpoint(config, "endpoints.generator", args, out / "cache")

    problems = load_dataset(dataset_path, kind, check_manifest)
    records = run_eval(problems, endpoint, mode, exemplars, answer_tag)

    write_records(out / "records.jsonl", records)
    summary = summary_row(kind, mode, records)
    write_json(out / "accuracy.json", [summary])
    write_csv(out / "accuracy.csv", [summary], SUMMARY_COLUMNS)
    depth_rows = depth_table(kind, mode, records, problems)
    write_csv(out / "depth.csv", depth_rows, DEPTH_COLUMNS)
    write_json(out / "depth.json", depth_rows)
    _write_manifest(out, "eval-bench", config, _seed(config, args, "bench.seed"),
                    [dataset_path], args.jobs)
    failed = sum(1 for r in records if r.error)
    if failed:
        log.warning("%d of %d completions errored", failed, len(records))
        return EXIT_PARTIAL
    return EXIT_OK


def _facts_for(problem, dialect: str) -> dict:
    """fact label -> formula (symbolic) or sentence (natural)."""
    out: dict = {}
    sources = problem.facts_formula if dialect == "symbolic" else None
    texts = sources if sources is not None else problem.facts
    for i, text in enumerate(texts, start=1):
        value = text
        if dialect == "symbolic" and sources is not None:
            try:
                value = parse_formula(text)
            except FormulaSyntaxError:
                pass
        out[f"fact{i}"] = value
    return out


def cmd_eval_steps(config: RunConfig, args) -> int:
    chains_path = config.require_path("steps.chains")
    dialect = str(config.get("steps.dialect", "symbolic"))
    out = _out_dir(config, args)
    inputs = [chains_path]

    facts_by_id: dict = {}
    dataset = config.get("steps.dataset", None)
    if dataset:
        dataset_path = config.require_path("steps.dataset")
        kind = str(config.get("steps.kind", "custom"))
        problems = load_dataset(dataset_path, kind,
                                bool(config.get("steps.check_manifest", False)))
        facts_by_id = {p.id: _facts_for(p, dialect) for p in problems}
        inputs.append(dataset_path)

    judge = None
    if config.get("endpoints.judge", None):
        judge = JudgeClient(_endpoint(config, "endpoints.judge", args, out / "cache"))
    elif dialect == "natural":
        log.warning("natural dialect without a judge endpoint: validity and "
                    "atomicity will be reported unknown")

    budget_cfg = config.get("steps.budget", None)
    checker = CheckerConfig(
        budget=Budget(**budget_cfg) if budget_cfg else Budget(),
        judge=judge,
    )

    chains = []
    with open(chains_path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            row = json.loads(line)
            pid = row.get("problem_id", f"line-{line_no}")
            text = row.get("text", row.get("raw_output"))
            if text is None:
                raise ConfigError(
                    f"{chains_path}:{line_no}: row has neither 'text' nor 'raw_output'")
            chains.append(parse_proof(text, dialect=dialect, problem_id=pid))

    verdicts = evaluate_chains(chains, checker, facts_by_id)
    with open(out / "verdicts.jsonl", "w", encoding="utf-8") as fh:
        for verdict in verdicts:
            fh.write(json.dumps(verdict.to_record(), ensure_ascii=False) + "\n")
    (out / "aggregates.json").write_text(
        json.dumps(aggregate(verdicts), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    _write_manifest(out, "eval-steps", config, _seed(config, args, "steps.seed"),
                    inputs, args.jobs)
    if judge is not None and judge.failures:
        log.warning("%d judge calls failed; affected verdicts are unknown",
                    judge.failures)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_probe(config: RunConfig, args) -> int:
    dump = config.require_path("probe.dump")
    split = config.require_path("probe.split")
    seed = _seed(config, args, "probe.seed")
    css_mode = str(config.get("probe.css_mode", "suffix"))
    out = _out_dir(config, args)
    report = run_probing_suite(dump, split, seed=seed, css_mode=css_mode)
    (out / "probing.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_manifest(out, "probe", config, seed, [dump, split], args.jobs)
    return EXIT_OK


def cmd_gen_sft(config: RunConfig, args) -> int:
    pool_path = config.require_path("sft.pool")
    style = str(config.get("sft.style"))
    if style not in STYLES:
        raise ConfigError(f"sft.style {style!r} must be one of {STYLES}")
    seed = _seed(config, args, "sft.seed")
    out = _out_dir(config, args)

    per_depth = config.get("sft.per_depth", None)
    if per_depth is not None:
        manifest = CorpusManifest(
            dataset=str(config.get("sft.dataset", "custom")),
            per_depth={int(k): int(v) for k, v in per_depth.items()},
            unknown=int(config.get("sft.unknown", 0)))
    else:
        dataset = str(config.get("sft.dataset"))
        published = {"FLD": FLD_MANIFEST, "ProntoQA": PRONTOQA_MANIFEST}
        if dataset not in published:
            raise ConfigError(
                f"sft.dataset {dataset!r} has no published manifest; "
                f"give sft.per_depth explicitly")
        manifest = published[dataset]

    golds = load_gold_pool(pool_path)
    samples, report = build_corpus(golds, style, manifest, seed=seed)
    write_corpus(samples, out / "corpus.jsonl", report)
    _write_manifest(out, "gen-sft", config, seed, [pool_path], args.jobs)
    return EXIT_OK


def cmd_reward(config: RunConfig, args) -> int:
    verdicts_path = config.require_path("reward.verdicts")
    records_path = config.require_path("reward.records")
    mode = str(config.get("reward.mode", "fractional"))
    weights = RewardWeights(
        w_v=float(config.get("reward.weights.w_v")),
        w_r=float(config.get("reward.weights.w_r")),
        w_a=float(config.get("reward.weights.w_a")),
        w_c=float(config.get("reward.weights.w_c")))
    out = _out_dir(config, args)
    inputs = [verdicts_path, records_path]

    verdicts, sample_ids = [], []
    with open(verdicts_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                cv = ChainVerdict.from_record(json.loads(line))
                verdicts.append(cv)
                sample_ids.append(cv.problem_id)

    correct_by_id = {}
    with open(records_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                row = json.loads(line)
                correct_by_id[row["problem_id"]] = bool(row["correct"])
    missing = [sid for sid in sample_ids if sid not in correct_by_id]
    if missing:
        raise AlignmentError(
            f"no accuracy record for {len(missing)} chains, e.g. {missing[:3]}")
    correctness = [correct_by_id[sid] for sid in sample_ids]

    traces = None
    traces_key = config.get("reward.traces", None)
    if traces_key:
        traces_path = config.require_path("reward.traces")
        inputs.append(traces_path)
        by_id = {}
        with open(traces_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    row = json.loads(line)
                    by_id[row["sample_id"]] = PredictionTrace(
                        row["sample_id"], tuple(bool(x) for x in row["correct"]))
        traces = [by_id.get(sid) for sid in sample_ids]

    rows = reward_batch(sample_ids, verdicts, correctness, weights,
                        mode=mode, traces=traces)
    write_rewards(rows, out / "rewards.jsonl")
    _write_manifest(out, "reward", config, _seed(config, args, "reward.seed"),
                    inputs, args.jobs)
    return EXIT_OK


def _flatten(node, prefix=""):
    if isinstance(node, dict):
        for key in sorted(node):
            yield from _flatten(node[key], f"{prefix}.{key}" if prefix else key)
    elif isinstance(node, list):
        for i, value in enumerate(node):
            yield from _flatten(value, f"{prefix}.{i}" if prefix else str(i))
    else:
        yield prefix, node


def cmd_report(config: RunConfig, args) -> int:
    inputs = config.get("report.inputs", None)
    if inputs:
        paths = [Path(str(p)) for p in inputs]
        labels = {p: p.name for p in paths}
    else:
        directory = config.require_path("report.dir")
        # recursive: each subcommand writes into its own directory under the run root
        paths = sorted(directory.rglob("*.json"))
        labels = {p: str(p.relative_to(directory)) for p in paths}
    # the merger's own run manifests must not feed back into a rerun
    paths = [p for p in paths if p.name != "run_manifest.json"]
    for path in paths:
        if not path.exists():
            raise ConfigError(f"report input does not exist: {path}")
    out = _out_dir(config, args)

    rows = []
    for path in paths:
        blob = json.loads(path.read_text(encoding="utf-8"))
        for key, value in _flatten(blob):
            rows.append({"source": labels[path], "key": key, "value": value})

    lines = []
    current = None
    for row in rows:
        if row["source"] != current:
            current = row["source"]
            if lines:
                lines.append("")
            lines.append(f"## {current}")
        lines.append(f"{row['key']} = {row['value']}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    with open(out / "summary.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["source", "key", "value"])
        writer.writeheader()
        writer.writerows(rows)
    _write_manifest(out, "report", config, _seed(config, args, "report.seed"),
                    paths, args.jobs)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing and dispatch

COMMANDS = {
    "eval-bench": (cmd_eval_bench, "run a dataset against a generator endpoint"),
    "eval-steps": (cmd_eval_steps, "score proof chains for stepwise soundness"),
    "probe": (cmd_probe, "train and score linear probes on a dump"),
    "gen-sft": (cmd_gen_sft, "generate a supervision corpus from gold proofs"),
    "reward": (cmd_reward, "compose per-sample rewards from verdict files"),
    "report": (cmd_report, "merge JSON reports into one text + CSV summary"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prooflens",
        description="reasoning-chain evaluation toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (handler, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, help="path to the run config JSON")
        sp.add_argument("--out", help="output directory (overrides output_dir)")
        sp.add_argument("--seed", type=int, help="seed override")
        sp.add_argument("--jobs", type=int, help="max parallel endpoint requests")
        sp.add_argument("--dry-run", action="store_true",
                        help="print the resolved config and exit")
        sp.set_defaults(handler=handler)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.dry_run:
            print(json.dumps(config.redacted(), indent=2, sort_keys=True))
            return EXIT_OK
        return args.handler(config, args)
    except _VALIDATION_ERRORS as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001  - boundary: report, don't crash
        log.exception("internal error")
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
