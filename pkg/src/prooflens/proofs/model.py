"""Proof-chain data model and JSONL serialization.

A chain is an ordered list of steps parsed from model output. Steps
carry a label (fact<N>, int<N>, assump<N>, hypothesis, or a ⊥ marker),
a kind, premise references, and a conclusion that is a Formula for the
symbolic dialect or a sentence string for the natural dialect.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..logic import Formula, parse_formula, to_text

KINDS = (
    "given-fact",
    "derivation",
    "assumption",
    "contradiction",
    "reductio-discharge",
    "final-conclusion",
)

FINAL_LABELS = ("PROVED", "DISPROVED", "UNKNOWN")

# Rendered before the final marker when a problem resolves to UNKNOWN.
EXHAUSTED_MESSAGE = (
    "The search path has been exhausted without finding a way to either "
    "prove or disprove the hypothesis."
)


@dataclass(frozen=True)
class MalformedStep:
    ordinal: int
    reason: str


@dataclass(frozen=True)
class ProofStep:
    label: str
    kind: str
    premise_refs: tuple[str, ...]
    conclusion: Formula | str
    ordinal: int
    explanation: str = field(default="", compare=False)

    def conclusion_text(self) -> str:
        if isinstance(self.conclusion, Formula):
            return to_text(self.conclusion)
        return self.conclusion


@dataclass
class ProofChain:
    steps: list[ProofStep]
    final_label: str | None = None
    problem_id: str = ""
    malformed: bool = False
    raw_text: str = field(default="", compare=False)
    dialect: str = field(default="symbolic", compare=False)
    errors: list[MalformedStep] = field(default_factory=list, compare=False)
    # fact/hypothesis declarations found before the first step header
    givens: dict[str, Formula | str] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def empty(self) -> bool:
        return not self.steps

    def labels(self) -> dict[str, ProofStep]:
        return {s.label: s for s in self.steps}

    def to_record(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "steps": [
                {
                    "label": s.label,
                    "kind": s.kind,
                    "premises": list(s.premise_refs),
                    "conclusion": s.conclusion_text(),
                    "text": s.explanation,
                }
                for s in self.steps
            ],
            "final_label": self.final_label,
            "malformed": self.malformed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), ensure_ascii=False)


def chain_from_record(record: dict, dialect: str = "symbolic") -> ProofChain:
    steps = []
    malformed = bool(record.get("malformed", False))
    for i, s in enumerate(record.get("steps", []), start=1):
        conclusion: Formula | str = s["conclusion"]
        if dialect == "symbolic":
            try:
                conclusion = parse_formula(s["conclusion"])
            except Exception:
                malformed = True
        steps.append(
            ProofStep(
                label=s["label"],
                kind=s["kind"],
                premise_refs=tuple(s.get("premises", ())),
                conclusion=conclusion,
                ordinal=i,
                explanation=s.get("text", ""),
            )
        )
    return ProofChain(
        steps=steps,
        final_label=record.get("final_label"),
        problem_id=record.get("problem_id", ""),
        malformed=malformed,
        dialect=dialect,
    )


class CycleDetected(Exception):
    pass


@dataclass
class DependencyGraph:
    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def successors(self, label: str) -> set[str]:
        return {b for a, b in self.edges if a == label}

    def predecessors(self, label: str) -> set[str]:
        return {a for a, b in self.edges if b == label}


def dependency_graph(chain: ProofChain) -> DependencyGraph:
    """Directed graph with an edge (i -> j) iff step j cites step i's
    label; cited given facts appear as extra nodes."""
    step_labels = [s.label for s in chain.steps]
    ordinal_of = {s.label: s.ordinal for s in chain.steps}
    nodes = list(step_labels)
    edges = set()
    for s in chain.steps:
        for ref in s.premise_refs:
            if ref not in ordinal_of and ref not in nodes:
                nodes.append(ref)  # given fact outside the step list
            edges.add((ref, s.label))
            if ref in ordinal_of and ordinal_of[ref] >= s.ordinal:
                raise CycleDetected(f"step {s.label} cites {ref} at a later or equal ordinal")
    return DependencyGraph(tuple(nodes), frozenset(edges))


def dependency_closure(chain: ProofChain, start_labels) -> set[str]:
    """Everything reachable backward from the given labels through
    premise references (the labels themselves included)."""
    by_label = chain.labels()
    seen: set[str] = set()
    stack = list(start_labels)
    while stack:
        label = stack.pop()
        if label in seen:
            continue
        seen.add(label)
        step = by_label.get(label)
        if step is not None:
            stack.extend(step.premise_refs)
    return seen
