"""Batched benchmark evaluation against a completion endpoint."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from prooflens.bench.data import Problem
from prooflens.bench.prompts import build_prompt
from prooflens.net import CompletionClient, EndpointConfig, EndpointError
from prooflens.proofs import extract_answer, strip_preamble

log = logging.getLogger(__name__)

# final-marker -> dataset label space
MARKER_TO_LABEL = {"PROVED": "T", "DISPROVED": "F", "UNKNOWN": "Unknown", "NONE": "NONE"}


@dataclass
class EvalRecord:
    problem_id: str
    raw_output: str
    marker: str           # PROVED / DISPROVED / UNKNOWN / NONE
    predicted: str        # T / F / Unknown / NONE
    correct: bool
    latency: float = 0.0
    output_tokens: int = 0
    error: str | None = None

    def to_record(self) -> dict:
        # latency is run telemetry, not a graded artifact; keeping it out of
        # the serialized record makes warm-cache reruns byte-identical
        return {
            "problem_id": self.problem_id,
            "raw_output": self.raw_output,
            "marker": self.marker,
            "predicted": self.predicted,
            "correct": self.correct,
            "output_tokens": self.output_tokens,
            "error": self.error,
        }


def grade_output(problem: Problem, raw_output: str, answer_tag: str | None = None) -> EvalRecord:
    """Extract the final marker from one raw completion and grade it."""
    text = strip_preamble(raw_output, answer_tag) if answer_tag else raw_output
    marker = extract_answer(text)
    predicted = MARKER_TO_LABEL[marker]
    return EvalRecord(
        problem_id=problem.id,
        raw_output=raw_output,
        marker=marker,
        predicted=predicted,
        # NONE never equals a gold label, so abstentions grade as wrong
        correct=predicted == problem.label,
        output_tokens=len(raw_output.split()),
    )


def run_eval(problems: list[Problem], endpoint_config: EndpointConfig, mode: str,
             exemplars: list[str] | None = None,
             answer_tag: str | None = None) -> list[EvalRecord]:
    """One EvalRecord per problem, in input order.

    Endpoint failures are recorded on the affected problem (prediction NONE)
    and never abort the batch.  Completions are cached by prompt hash, so a
    warm rerun is deterministic and network-free.
    """
    client = CompletionClient(endpoint_config)
    prompts = [build_prompt(p, mode, exemplars) for p in problems]

    def one(pair) -> EvalRecord:
        problem, prompt = pair
        start = time.monotonic()
        try:
            raw = client.complete(prompt)
            error = None
        except EndpointError as exc:
            raw, error = "", str(exc)
            log.warning("problem %s: %s", problem.id, exc)
        record = grade_output(problem, raw, answer_tag)
        record.latency = time.monotonic() - start
        record.error = error
        return record

    workers = max(1, endpoint_config.pool_size)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, zip(problems, prompts)))
