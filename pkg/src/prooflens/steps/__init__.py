"""Stepwise soundness metrics over parsed proof chains."""

from prooflens.steps.evaluate import (
    CheckerConfig,
    DEFAULT_CONFIG,
    eval_atomicity,
    eval_relevance,
    eval_validity,
    evaluate_chain,
    evaluate_chains,
)
from prooflens.steps.judge import (
    ATOMICITY_TEMPLATE,
    JudgeClient,
    PROMPT_KINDS,
    RemoteJudgeUnavailable,
    UnparseableJudgeReply,
    VALIDITY_TEMPLATE,
    judge_remote,
    parse_judge_reply,
    render_judge_prompt,
)
from prooflens.steps.verdicts import (
    ChainVerdict,
    EmptyCohort,
    StepVerdict,
    aggregate,
)

__all__ = [
    "ATOMICITY_TEMPLATE",
    "ChainVerdict",
    "CheckerConfig",
    "DEFAULT_CONFIG",
    "EmptyCohort",
    "JudgeClient",
    "PROMPT_KINDS",
    "RemoteJudgeUnavailable",
    "StepVerdict",
    "UnparseableJudgeReply",
    "VALIDITY_TEMPLATE",
    "aggregate",
    "eval_atomicity",
    "eval_relevance",
    "eval_validity",
    "evaluate_chain",
    "evaluate_chains",
    "judge_remote",
    "parse_judge_reply",
    "render_judge_prompt",
]
