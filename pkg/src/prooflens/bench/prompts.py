"""Evaluation prompt construction for the three querying modes."""

from __future__ import annotations

from prooflens.bench.data import Problem

DIRECT_TEMPLATE = (
    'Based on the provided facts, answer the question. Conclude with one of the '
    'markers: "__PROVED__" for proven, "__DISPROVED__" for disproven, or '
    '"__UNKNOWN__" if uncertain.\n'
    "Facts:{facts}\n"
    "Hypothesis:{hypothesis}"
)

COT_TEMPLATE = DIRECT_TEMPLATE + "\nLet's analyze this step by step."

FEWSHOT_TEMPLATE = (
    'Based on the provided facts, answer the question. Conclude with one of the '
    'markers: "__PROVED__" for proven, "__DISPROVED__" for disproven, or '
    '"__UNKNOWN__" if uncertain.\n'
    "Here are some examples of proofs for your reference:\n"
    "[Start of example]\n"
    "For example, for this question:\n"
    "{example}\n"
    "[End of example]\n"
    "You can refer to the proof method of the above question, think step by step, "
    "and give the result of this question.\n"
    "Facts:{facts}\n"
    "Hypothesis:{hypothesis}"
)

MODES = ("direct", "cot", "fewshot")


class MissingExemplar(ValueError):
    """fewshot mode needs at least one exemplar."""


def format_facts(problem: Problem) -> str:
    """Labeled fact lines, matching the labels proof chains cite."""
    return "".join(f"\nfact{i}: {s}" for i, s in enumerate(problem.facts, start=1))


def fact_labels(problem: Problem) -> dict[str, str]:
    return {f"fact{i}": s for i, s in enumerate(problem.facts, start=1)}


def build_prompt(problem: Problem, mode: str, exemplars: list[str] | None = None) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    facts = format_facts(problem)
    hypothesis = " " + problem.hypothesis
    if mode == "direct":
        return DIRECT_TEMPLATE.format(facts=facts, hypothesis=hypothesis)
    if mode == "cot":
        return COT_TEMPLATE.format(facts=facts, hypothesis=hypothesis)
    if not exemplars:
        raise MissingExemplar("fewshot mode requires at least one exemplar")
    example = "\n\n".join(exemplars)
    return FEWSHOT_TEMPLATE.format(example=example, facts=facts, hypothesis=hypothesis)
