"""Command line front end: extract dumps, validate existing ones."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from prooflens.probing import DumpFormatError, validate_dump

from .extract import extract
from .job import ExtractionJob, InstanceError, ModelLoadError

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2


def cmd_extract(args) -> int:
    job = ExtractionJob(
        model_id=args.model,
        instances_path=args.instances,
        out_path=args.out,
        batch_size=args.batch_size,
        seed=args.seed,
        binary=args.binary,
    )
    report = extract(job)
    print(json.dumps(report.to_record(), ensure_ascii=False, indent=2))
    return EXIT_OK


def cmd_validate(args) -> int:
    header = validate_dump(args.path)
    print(json.dumps(header, ensure_ascii=False, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repr-extractor",
        description="Dump final-token last-layer hidden states for probing instances.")
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("extract", help="run a model over an instance file")
    ex.add_argument("--model", required=True, help="model path or identifier")
    ex.add_argument("--instances", required=True, help="instance JSONL file")
    ex.add_argument("--out", required=True, help="output dump path")
    ex.add_argument("--batch-size", type=int, default=8)
    ex.add_argument("--seed", type=int, default=0)
    ex.add_argument("--binary", action="store_true", help="vectors in a sidecar file")
    ex.set_defaults(func=cmd_extract)

    va = sub.add_parser("validate", help="check an existing dump")
    va.add_argument("--path", required=True)
    va.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, ModelLoadError, DumpFormatError, FileNotFoundError, ValueError) as e:
        print(json.dumps({"error": type(e).__name__, "detail": str(e)}), file=sys.stderr)
        return EXIT_INVALID
    except Exception:
        logging.getLogger("repr_extractor").exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
