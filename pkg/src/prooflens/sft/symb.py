"""Symbolic supervision targets: structured, filtered, and direct styles."""

from __future__ import annotations

import dataclasses
import re

from prooflens.logic import (
    Formula,
    collect_constants,
    collect_predicates,
    parse_formula,
    to_text,
)
from prooflens.proofs import ProofChain, dependency_closure, render_proof

from .gold import GoldProblem, chain_formulas, necessary_facts, validate_glossary

PREAMBLE = ("Our problem-solving procedure begins by formalizing all given "
            "facts and the hypothesis into first-order logic using "
            "standardized predicate definitions.")
ENTITY_HEADER = "We define the entities involved:"
DENOTE_HEADER = "For the predicate, we denote:"
FACTS_HEADER = "The facts are formalized as:"

_FACT_NUM = re.compile(r"^fact(\d+)$")
_INT_NUM = re.compile(r"^int(\d+)$")


def _fact_index(label: str) -> int:
    match = _FACT_NUM.match(label)
    if not match:
        raise ValueError(f"not a fact label: {label}")
    return int(match.group(1))


def _hypothesis_formula(gold: GoldProblem) -> Formula:
    raw = gold.problem.hypothesis_formula
    if raw is None:
        raise ValueError(f"gold problem {gold.id} lacks a hypothesis formula")
    return parse_formula(raw)


def _fact_formulas(gold: GoldProblem) -> dict[str, Formula]:
    givens = gold.chain.givens
    out = {}
    for i in range(1, len(gold.problem.facts) + 1):
        label = f"fact{i}"
        value = givens.get(label)
        if not isinstance(value, Formula):
            raws = gold.problem.facts_formula
            if raws is None or len(raws) < i:
                raise ValueError(f"{gold.id}: no formula for {label}")
            value = parse_formula(raws[i - 1])
        out[label] = value
    return out


def _definitions_block(gold: GoldProblem, formulas) -> list[str]:
    predicates: dict[str, int] = {}
    constants: set[str] = set()
    for formula in formulas:
        predicates.update(collect_predicates(formula))
        constants |= collect_constants(formula)
    lines = []
    if constants:
        lines.append(ENTITY_HEADER)
        for name in sorted(constants):
            lines.append(f"- {name}: {gold.glossary.entities[name]}")
    lines.append(DENOTE_HEADER)
    for name in sorted(predicates):
        reading = gold.glossary.predicates[name]
        head = f"{name}(x)" if predicates[name] >= 1 else name
        lines.append(f"{head}: {reading}")
    return lines


def _fact_lines(facts: dict[str, Formula]) -> list[str]:
    return [f"{label}: {to_text(facts[label])}"
            for label in sorted(facts, key=_fact_index)]


def filtered_chain(gold: GoldProblem) -> tuple[ProofChain, dict[str, Formula]]:
    """Drop steps outside the final conclusion's dependency closure and
    renumber the surviving facts and intermediates densely.

    An UNKNOWN trace has no conclusion for any step to feed, so every step
    falls away and only the trace's cited facts survive.
    """
    chain = gold.chain
    if chain.final_label == "UNKNOWN" or chain.empty:
        kept_steps = []
    else:
        closure = dependency_closure(chain, [chain.steps[-1].label])
        kept_steps = [s for s in chain.steps if s.label in closure]

    all_facts = _fact_formulas(gold)
    kept_facts = sorted(necessary_facts(gold), key=_fact_index)
    rename = {old: f"fact{i}" for i, old in enumerate(kept_facts, start=1)}
    int_labels = [s.label for s in kept_steps if _INT_NUM.match(s.label)]
    rename.update({old: f"int{i}" for i, old in enumerate(int_labels, start=1)})

    steps = []
    for ordinal, step in enumerate(kept_steps, start=1):
        steps.append(dataclasses.replace(
            step,
            label=rename.get(step.label, step.label),
            premise_refs=tuple(rename.get(r, r) for r in step.premise_refs),
            ordinal=ordinal,
        ))
    facts = {rename[label]: all_facts[label] for label in kept_facts}
    new_chain = ProofChain(
        steps=steps,
        final_label=chain.final_label,
        problem_id=chain.problem_id,
        dialect="symbolic",
        givens=dict(facts),
    )
    return new_chain, facts


def gen_symb_struct_target(gold: GoldProblem) -> str:
    validate_glossary(gold)
    facts = _fact_formulas(gold)
    hypothesis = _hypothesis_formula(gold)
    lines = [PREAMBLE]
    lines += _definitions_block(
        gold, list(facts.values()) + [hypothesis] + list(chain_formulas(gold.chain)))
    lines.append(FACTS_HEADER)
    lines += _fact_lines(facts)
    lines.append(f"The hypothesis is formalized as: {to_text(hypothesis)}")
    lines.append(render_proof(gold.chain))
    return "\n".join(lines)


def gen_symb_filter_target(gold: GoldProblem) -> str:
    validate_glossary(gold)
    chain, facts = filtered_chain(gold)
    hypothesis = _hypothesis_formula(gold)
    lines = [PREAMBLE]
    lines += _definitions_block(
        gold, list(facts.values()) + [hypothesis] + list(chain_formulas(chain)))
    if facts:
        lines.append(FACTS_HEADER)
        lines += _fact_lines(facts)
    lines.append(f"The hypothesis is formalized as: {to_text(hypothesis)}")
    lines.append(render_proof(chain))
    return "\n".join(lines)


def gen_symb_direct_target(gold: GoldProblem) -> str:
    facts = _fact_formulas(gold)
    lines = _fact_lines(facts)
    lines.append(render_proof(gold.chain))
    return "\n".join(lines)
