"""Remote judge for natural-language steps.

Symbolic chains never touch this module; it exists for dialects the local
checker cannot score.  Prompts follow fixed templates and replies must start
with "true" or "false" (case-insensitive).
"""

from __future__ import annotations

import logging
import re

from prooflens.net import CompletionClient, EndpointConfig, EndpointError

log = logging.getLogger(__name__)

VALIDITY_TEMPLATE = (
    "Premises:\n"
    "{premises_str}\n"
    "\n"
    "Conclusion:\n"
    "{concl_text_full}\n"
    "\n"
    "Do the premises entail the conclusion? Answer true or false only."
)

ATOMICITY_TEMPLATE = (
    "Premises:\n"
    "{premises_str}\n"
    "\n"
    "Conclusion:\n"
    "{concl_text_full}\n"
    "\n"
    "Is this inference atomic...? Answer true or false only."
)

PROMPT_KINDS = ("validity", "atomicity")


class RemoteJudgeUnavailable(RuntimeError):
    """The judge endpoint failed after retries."""


class UnparseableJudgeReply(ValueError):
    """The judge reply did not start with true/false."""


_LEADING_BOOL = re.compile(r"\s*(true|false)\b", re.IGNORECASE)


def parse_judge_reply(text: str) -> bool:
    m = _LEADING_BOOL.match(text)
    if m is None:
        raise UnparseableJudgeReply(f"no leading true/false in {text[:80]!r}")
    return m.group(1).lower() == "true"


def render_judge_prompt(prompt_kind: str, premises_text: str, conclusion_text: str) -> str:
    if prompt_kind not in PROMPT_KINDS:
        raise ValueError(f"bad prompt kind: {prompt_kind!r}")
    template = VALIDITY_TEMPLATE if prompt_kind == "validity" else ATOMICITY_TEMPLATE
    return template.format(premises_str=premises_text, concl_text_full=conclusion_text)


def judge_remote(prompt_kind: str, premises_text: str, conclusion_text: str,
                 endpoint_config: EndpointConfig) -> bool:
    """One judged question against the remote endpoint.

    Raises RemoteJudgeUnavailable when the endpoint stays down and
    UnparseableJudgeReply when it answers but not with a leading boolean;
    callers treat the latter as an unknown verdict.
    """
    prompt = render_judge_prompt(prompt_kind, premises_text, conclusion_text)
    client = CompletionClient(endpoint_config)
    try:
        reply = client.complete(prompt)
    except EndpointError as exc:
        raise RemoteJudgeUnavailable(str(exc)) from exc
    return parse_judge_reply(reply)


class JudgeClient:
    """Reusable judge sharing one HTTP session and cache directory.

    `failures` counts asks lost to endpoint or parse errors, so a caller can
    tell infrastructure gaps apart from honestly-unknown verdicts.
    """

    def __init__(self, config: EndpointConfig):
        self.config = config
        self._client = CompletionClient(config)
        self.failures = 0

    def ask(self, prompt_kind: str, premises_text: str, conclusion_text: str) -> bool:
        prompt = render_judge_prompt(prompt_kind, premises_text, conclusion_text)
        try:
            reply = self._client.complete(prompt)
        except EndpointError as exc:
            self.failures += 1
            raise RemoteJudgeUnavailable(str(exc)) from exc
        try:
            return parse_judge_reply(reply)
        except UnparseableJudgeReply:
            self.failures += 1
            raise
