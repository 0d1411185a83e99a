"""Parsing of stepwise proof text into ProofChain objects.

parse_proof is total: any input yields a chain, with problems recorded
as MalformedStep entries and a chain-level malformed flag rather than
exceptions.
"""

from __future__ import annotations

import re

from ..logic import Formula, FormulaSyntaxError, parse_formula
from .model import EXHAUSTED_MESSAGE, MalformedStep, ProofChain, ProofStep

_MARKER = re.compile(r"(?<!_)__(PROVED|DISPROVED|UNKNOWN)__(?!_)")
_STEP_HEADER = re.compile(r"^Step\s+(\d+)\s*:\s*(.*)$", re.MULTILINE)
_LABEL_LINE = re.compile(r"^(fact\d+|int\d+|assump\d+|hypothesis)\s*:\s*(.+)$")
_REF = re.compile(r"\b(?:fact\d+|int\d+|assump\d+|hypothesis)\b")
_REDUCTIO_FROM = re.compile(r"from\s+(?:step\s+)?(\d+)", re.IGNORECASE)
_FALSUM_LINE = re.compile(r"^(?:⊥|FALSUM|contradiction)\s*$", re.IGNORECASE)


def strip_preamble(text: str, answer_tag: str = "</think>") -> str:
    """Substring after the LAST occurrence of answer_tag (whole text if
    absent)."""
    if not answer_tag:
        raise ValueError("answer_tag must be nonempty")
    pos = text.rfind(answer_tag)
    if pos < 0:
        return text
    return text[pos + len(answer_tag):]


def extract_answer(text: str) -> str:
    """PROVED / DISPROVED / UNKNOWN from the last well-formed marker
    (exactly two underscores each side); NONE if no marker appears."""
    hits = _MARKER.findall(text)
    return hits[-1] if hits else "NONE"


def _strip_marker_tail(lines: list[str]) -> list[str]:
    """Remove final-conclusion and exhausted-search boilerplate lines so
    they are not mistaken for step payload."""
    out = []
    for ln in lines:
        s = ln.strip()
        if s.startswith("Final conclusion:"):
            continue
        if s == EXHAUSTED_MESSAGE:
            continue
        out.append(ln)
    return out


def parse_proof(
    text: str,
    dialect: str = "symbolic",
    problem_id: str = "",
    givens: dict[str, str] | None = None,
) -> ProofChain:
    """Split on "Step N:" headers and classify each step.

    dialect="symbolic" parses conclusions as formulas; "natural" stores
    sentences verbatim. ``givens`` (label -> sentence) enables verbatim
    restatement matching for uncited natural-language premises.
    """
    if dialect not in ("symbolic", "natural"):
        raise ValueError(f"unknown dialect {dialect!r}")

    errors: list[MalformedStep] = []
    headers = list(_STEP_HEADER.finditer(text))
    final_label = extract_answer(text)

    chain_givens = _parse_givens(text[: headers[0].start()] if headers else text, dialect)
    if givens:
        # problem-supplied facts resolve citations too; in-text declarations
        # win so the chain is judged on what it actually stated
        supplied = {}
        for label, value in givens.items():
            if dialect == "symbolic" and isinstance(value, str):
                try:
                    supplied[label] = parse_formula(value)
                except FormulaSyntaxError:
                    supplied[label] = value
            else:
                supplied[label] = value
        chain_givens = {**supplied, **chain_givens}

    steps: list[ProofStep] = []
    seen_labels: set[str] = set()
    open_assumptions: list[str] = []
    falsum_count = 0

    for i, m in enumerate(headers):
        ordinal = i + 1
        number = int(m.group(1))
        explanation = m.group(2).strip()
        if number != ordinal:
            errors.append(MalformedStep(ordinal, f"step numbered {number}, expected {ordinal}"))
        block_end = headers[i + 1].start() if i + 1 < len(headers) else len(text)
        body_lines = _strip_marker_tail(text[m.end():block_end].splitlines())

        label, conclusion_text, falsum = _payload(body_lines)
        if falsum:
            falsum_count += 1
            if label is None:
                label = "⊥" if falsum_count == 1 else f"⊥{falsum_count}"
            conclusion_text = "⊥"
        if label is None and conclusion_text is None:
            if dialect == "natural":
                # unlabeled natural step: the explanation is the content
                joined = " ".join(ln.strip() for ln in body_lines if ln.strip())
                conclusion_text = (explanation + " " + joined).strip()
                label = f"int{ordinal}"
            else:
                errors.append(MalformedStep(ordinal, "no labeled formula line"))
                label = f"int{ordinal}"
                conclusion_text = ""

        kind, refs, problem = _classify(
            explanation, label, steps, open_assumptions, chain_givens, falsum
        )
        if problem:
            errors.append(MalformedStep(ordinal, problem))

        conclusion: Formula | str = conclusion_text or ""
        if dialect == "symbolic" and not falsum:
            try:
                conclusion = parse_formula(conclusion_text or "")
            except Exception as e:
                errors.append(MalformedStep(ordinal, f"unparseable formula: {e}"))
        elif falsum:
            conclusion = parse_formula("⊥") if dialect == "symbolic" else "⊥"
        elif dialect == "natural" and givens:
            refs = refs + _restated(conclusion_text or "", explanation, givens, refs)

        if label in seen_labels:
            errors.append(MalformedStep(ordinal, f"duplicate label {label}"))
        seen_labels.add(label)

        if kind == "assumption":
            open_assumptions.append(label)

        steps.append(
            ProofStep(
                label=label,
                kind=kind,
                premise_refs=tuple(refs),
                conclusion=conclusion,
                ordinal=ordinal,
                explanation=explanation,
            )
        )

    if open_assumptions:
        errors.append(MalformedStep(len(steps), f"undischarged assumptions: {', '.join(open_assumptions)}"))

    return ProofChain(
        steps=steps,
        final_label=final_label if final_label != "NONE" else None,
        problem_id=problem_id,
        malformed=bool(errors),
        raw_text=text,
        dialect=dialect,
        errors=errors,
        givens=chain_givens,
    )


def _payload(body_lines: list[str]):
    """First labeled formula line, or a bare ⊥ line, in a step body."""
    for ln in body_lines:
        s = ln.strip()
        if not s:
            continue
        if _FALSUM_LINE.match(s):
            return None, None, True
        lm = _LABEL_LINE.match(s)
        if lm:
            body = lm.group(2).strip()
            if body == "⊥":
                return lm.group(1), None, True
            return lm.group(1), body, False
    return None, None, False


def _classify(explanation, label, steps, open_assumptions, chain_givens, falsum):
    """Kind + premise refs for one step; returns (kind, refs, problem)."""
    low = explanation.lower()

    if low.startswith("by reductio ad absurdum"):
        if not open_assumptions:
            return "reductio-discharge", [], "reductio with no open assumption"
        assumption = open_assumptions.pop()
        m = _REDUCTIO_FROM.search(explanation)
        if not m:
            return "reductio-discharge", [assumption], "reductio cites no step number"
        cited = int(m.group(1))
        if not 1 <= cited <= len(steps):
            return "reductio-discharge", [assumption], f"reductio cites unknown step {cited}"
        return "reductio-discharge", [steps[cited - 1].label, assumption], None

    if falsum:
        refs = _refs_before_derive(explanation)
        bad = _unintroduced(refs, steps, chain_givens)
        return "contradiction", refs, bad

    if low.startswith("assume for contradiction") or label.startswith("assump"):
        return "assumption", [], None

    if label.startswith("fact"):
        return "given-fact", [], None

    refs = _refs_before_derive(explanation)
    bad = _unintroduced(refs, steps, chain_givens)
    if label == "hypothesis":
        return "final-conclusion", refs, bad
    if not refs:
        return "derivation", refs, bad or "derivation step cites no premises"
    return "derivation", refs, bad


def _refs_before_derive(explanation: str) -> list[str]:
    cut = explanation.lower().find("we derive")
    scope = explanation if cut < 0 else explanation[:cut]
    seen = []
    for r in _REF.findall(scope):
        if r not in seen:
            seen.append(r)
    return seen


def _unintroduced(refs, steps, chain_givens) -> str | None:
    """fact/hypothesis refs resolve against the problem statement; int
    and assump refs must name an earlier step."""
    known = {s.label for s in steps}
    for r in refs:
        if r.startswith("fact") or r == "hypothesis" or r in chain_givens:
            continue
        if r not in known:
            return f"reference to unintroduced label {r}"
    return None


def _parse_givens(preamble: str, dialect: str) -> dict:
    out: dict = {}
    for ln in preamble.splitlines():
        lm = _LABEL_LINE.match(ln.strip())
        if not lm:
            continue
        label, body = lm.group(1), lm.group(2).strip()
        if dialect == "symbolic":
            try:
                out[label] = parse_formula(body)
            except Exception:
                continue
        else:
            out[label] = body
    return out


def _fold(s: str) -> str:
    return re.sub(r"\s+", " ", s).strip().lower()


def _restated(conclusion_text: str, explanation: str, givens: dict[str, str], refs) -> list[str]:
    """Verbatim restatements of given sentences (whitespace/case folded)
    count as citations of the matching fact."""
    hay = _fold(explanation + " " + conclusion_text)
    extra = []
    for label, sentence in givens.items():
        if label in refs or not isinstance(sentence, str):
            continue
        if _fold(sentence) and _fold(sentence) in hay:
            extra.append(label)
    return extra
