"""Gold problems: a benchmark problem plus its proof and symbol glossary."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from prooflens.bench.data import Problem
from prooflens.logic import Formula, collect_constants, collect_predicates
from prooflens.proofs import ProofChain, dependency_closure

STYLES = ("NL", "SymbStruct", "SymbFilter", "SymbDirect")

_FACT_LABEL = re.compile(r"^fact\d+$")


class GlossaryGap(KeyError):
    def __init__(self, symbol: str):
        self.symbol = symbol
        super().__init__(symbol)


@dataclass(frozen=True)
class Glossary:
    """Readings for symbols: predicates map to templates with the variable
    spelled as a bare word per argument position ("x is a raised", "x likes
    y"); zero-arity predicates map to full sentences; entities map constants
    to noun phrases."""
    predicates: dict[str, str]
    entities: dict[str, str] = field(default_factory=dict)


@dataclass
class GoldProblem:
    problem: Problem
    glossary: Glossary

    @property
    def id(self) -> str:
        return self.problem.id

    @property
    def depth(self) -> int | None:
        return self.problem.depth

    @property
    def label(self) -> str:
        return self.problem.label

    @property
    def chain(self) -> ProofChain:
        if self.problem.gold_proof is None:
            raise ValueError(f"gold problem {self.id} has no proof chain")
        return self.problem.gold_proof


def chain_formulas(chain: ProofChain):
    for value in chain.givens.values():
        if isinstance(value, Formula):
            yield value
    for step in chain.steps:
        if isinstance(step.conclusion, Formula):
            yield step.conclusion


def chain_symbols(chain: ProofChain) -> tuple[dict[str, int], set[str]]:
    """All predicate names (with arity) and constants in the chain."""
    predicates: dict[str, int] = {}
    constants: set[str] = set()
    for formula in chain_formulas(chain):
        predicates.update(collect_predicates(formula))
        constants |= collect_constants(formula)
    return predicates, constants


def validate_glossary(gold: GoldProblem) -> None:
    predicates, constants = chain_symbols(gold.chain)
    for name in sorted(predicates):
        if name not in gold.glossary.predicates:
            raise GlossaryGap(name)
    for name in sorted(constants):
        if name not in gold.glossary.entities:
            raise GlossaryGap(name)


def necessary_facts(gold: GoldProblem) -> set[str]:
    """Fact labels reachable backward from the final conclusion; for UNKNOWN
    traces (no conclusion reached) the closure over every partial step."""
    chain = gold.chain
    if chain.empty:
        return set()
    if chain.final_label == "UNKNOWN":
        roots = [s.label for s in chain.steps]
    else:
        roots = [chain.steps[-1].label]
    closure = dependency_closure(chain, roots)
    return {label for label in closure if _FACT_LABEL.match(label)}
