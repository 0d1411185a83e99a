"""Natural-language rendering of symbolic proofs.

Deterministic templates only: one phrase per catalog rule, one compositional
reading per connective. No model in the loop, so the output is auditable and
reproducible.
"""

from __future__ import annotations

import re

from prooflens.logic import (
    And,
    Atom,
    Const,
    Exists,
    Falsum,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    Var,
    check_atomic_verbose,
)
from prooflens.proofs import EXHAUSTED_MESSAGE, ProofChain

from .gold import GlossaryGap, Glossary, GoldProblem

# argument slot names inside predicate readings, by position
_SLOTS = ("x", "y", "z")

RULE_PHRASES = {
    "universal-modus-ponens": "Since {premises}, it follows that {conclusion}.",
    "modus-ponens": "Since {premises}, it follows that {conclusion}.",
    "modus-tollens": "Since {premises}, it must be that {conclusion}.",
    "universal-modus-tollens": "Since {premises}, it must be that {conclusion}.",
    "conjunction-intro": "Combining {premises}, we have that {conclusion}.",
    "conjunction-elim": "Since {premises}, in particular, {conclusion}.",
    "disjunction-intro": "Since {premises}, certainly {conclusion}.",
    "disjunctive-syllogism": "Since {premises}, the remaining possibility is that {conclusion}.",
    "de-morgan": "Since {premises}, equivalently, {conclusion}.",
    "contraposition": "Since {premises}, equivalently, {conclusion}.",
    "universal-instantiation": "Since {premises}, in particular, {conclusion}.",
    "existential-intro": "Since {premises}, it follows that {conclusion}.",
    "double-negation-elim": "Since {premises}, equivalently, {conclusion}.",
    "double-negation-intro": "Since {premises}, equivalently, {conclusion}.",
    "contradiction": "But {premises} cannot all hold, which is a contradiction.",
    "reductio": "Since the assumption led to a contradiction, {conclusion}.",
}
GENERIC_PHRASE = "From {premises}, we conclude that {conclusion}."


def _slot_pattern(slot: str) -> re.Pattern:
    return re.compile(rf"\b{slot}\b")


def _reading(template: str, args: list[str]) -> str:
    out = template
    for slot, arg in zip(_SLOTS, args):
        out = _slot_pattern(slot).sub(arg, out)
    return out


def render_formula_nl(formula: Formula, glossary: Glossary) -> str:
    """Compositional symbol-free reading of a formula."""
    if isinstance(formula, Falsum):
        return "a contradiction"
    if isinstance(formula, Atom):
        if formula.pred not in glossary.predicates:
            raise GlossaryGap(formula.pred)
        template = glossary.predicates[formula.pred]
        args = []
        for term in formula.args:
            if isinstance(term, Const):
                if term.name not in glossary.entities:
                    raise GlossaryGap(term.name)
                args.append(glossary.entities[term.name])
            elif isinstance(term, Var):
                args.append(term.name)
        return _reading(template, args)
    if isinstance(formula, Not):
        return f"it is not the case that {render_formula_nl(formula.body, glossary)}"
    if isinstance(formula, And):
        return (f"{render_formula_nl(formula.left, glossary)} and "
                f"{render_formula_nl(formula.right, glossary)}")
    if isinstance(formula, Or):
        return (f"{render_formula_nl(formula.left, glossary)} or "
                f"{render_formula_nl(formula.right, glossary)}")
    if isinstance(formula, Implies):
        return (f"if {render_formula_nl(formula.left, glossary)} then "
                f"{render_formula_nl(formula.right, glossary)}")
    if isinstance(formula, ForAll):
        return f"for every {formula.var}, {render_formula_nl(formula.body, glossary)}"
    if isinstance(formula, Exists):
        return f"for some {formula.var}, {render_formula_nl(formula.body, glossary)}"
    raise TypeError(f"unknown formula node {type(formula).__name__}")


def _derivation_sentence(premises: list[Formula], conclusion: Formula,
                         glossary: Glossary) -> str:
    result = check_atomic_verbose(premises, conclusion)
    rule_id = result.application.rule_id if result.application else None
    phrase = RULE_PHRASES.get(rule_id, GENERIC_PHRASE)
    premises_str = ", and ".join(render_formula_nl(p, glossary) for p in premises)
    return phrase.format(premises=premises_str,
                         conclusion=render_formula_nl(conclusion, glossary))


def render_chain_nl(chain: ProofChain, glossary: Glossary) -> str:
    """One "Step k:" line per source step, then the final marker."""
    values: dict[str, Formula] = {
        k: v for k, v in chain.givens.items() if isinstance(v, Formula)}
    lines = []
    for i, step in enumerate(chain.steps, start=1):
        conclusion = step.conclusion
        if not isinstance(conclusion, Formula):
            raise ValueError(f"step {step.label} is not symbolic")
        if step.kind == "given-fact":
            sentence = f"We note that {render_formula_nl(conclusion, glossary)}."
        elif step.kind == "assumption":
            sentence = f"Assume for contradiction that {render_formula_nl(conclusion, glossary)}."
        elif step.kind == "contradiction":
            sentence = "This yields a contradiction."
        elif step.kind == "reductio-discharge":
            sentence = RULE_PHRASES["reductio"].format(
                conclusion=render_formula_nl(conclusion, glossary))
        else:
            resolved = [values[r] for r in step.premise_refs if r in values]
            if len(resolved) != len(step.premise_refs):
                missing = [r for r in step.premise_refs if r not in values]
                raise ValueError(f"step {step.label} cites unresolved {missing}")
            sentence = _derivation_sentence(resolved, conclusion, glossary)
        values[step.label] = conclusion
        lines.append(f"Step {i}: {sentence}")
    if chain.final_label == "UNKNOWN":
        lines.append(EXHAUSTED_MESSAGE)
    lines.append(f"Final conclusion: __{chain.final_label}__")
    return "\n".join(lines)


def assert_symbol_free(text: str) -> None:
    found = set(text) & set("¬∧∨→∀∃⊥")
    if found:
        raise AssertionError(f"logical symbols leaked into NL text: {found}")


def gen_nl_target(gold: GoldProblem) -> str:
    return render_chain_nl(gold.chain, gold.glossary)
