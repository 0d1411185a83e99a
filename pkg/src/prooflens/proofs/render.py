"""Canonical step-template rendering.

render_proof is the inverse of parse_proof for well-formed symbolic
chains: parse(render(chain)) == chain.
"""

from __future__ import annotations

from .model import EXHAUSTED_MESSAGE, ProofChain, ProofStep


def render_step(step: ProofStep, ordinal_of: dict[str, int]) -> str:
    body = f"{step.label}: {step.conclusion_text()}"
    if step.kind == "given-fact":
        return f"Step {step.ordinal}: Given fact:\n{body}"
    if step.kind == "assumption":
        return f"Step {step.ordinal}: Assume for contradiction:\n{body}"
    if step.kind == "contradiction":
        if step.premise_refs:
            refs = ", ".join(step.premise_refs)
            return f"Step {step.ordinal}: From {refs}, we derive a contradiction:\n⊥"
        return f"Step {step.ordinal}: Contradiction:\n⊥"
    if step.kind == "reductio-discharge":
        cited = next(
            (r for r in step.premise_refs if not r.startswith("assump")),
            step.premise_refs[0] if step.premise_refs else "",
        )
        number = ordinal_of.get(cited, 0)
        return f"Step {step.ordinal}: By reductio ad absurdum from {number}:\n{body}"
    refs = ", ".join(step.premise_refs)
    return f"Step {step.ordinal}: From {refs}, we derive:\n{body}"


def render_proof(chain: ProofChain, include_marker: bool = True) -> str:
    ordinal_of = {s.label: s.ordinal for s in chain.steps}
    lines = [render_step(s, ordinal_of) for s in chain.steps]
    if include_marker and chain.final_label:
        if chain.final_label == "UNKNOWN":
            lines.append(EXHAUSTED_MESSAGE)
        lines.append(f"Final conclusion: __{chain.final_label}__")
    return "\n".join(lines)
