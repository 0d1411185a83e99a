"""Probing task construction from problems with gold proofs.

Each builder returns text specifications (prompt prefixes); turning them into
vectors is the representation extractor's job, not ours.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from prooflens.bench.data import Problem
from prooflens.bench.prompts import format_facts
from prooflens.proofs import ProofChain, dependency_closure
from prooflens.proofs.render import render_step


class MissingGoldProof(ValueError):
    pass


class InsufficientFacts(ValueError):
    def __init__(self, kind: str, have: int, need: int):
        self.kind, self.have, self.need = kind, have, need
        super().__init__(f"need {need} {kind} facts, have {have}")


class InsufficientCandidates(ValueError):
    def __init__(self, anchor: int | None = None, detail: str = ""):
        self.anchor = anchor
        super().__init__(detail or f"anchor {anchor} lacks candidates")


@dataclass(frozen=True)
class InstanceSpec:
    """One probing input: a text prefix plus its class label."""
    problem_id: str
    task: str
    step_index: int
    label: str
    text: str
    candidate_id: str | None = None


def problem_header(problem: Problem) -> str:
    return f"Facts:{format_facts(problem)}\nHypothesis: {problem.hypothesis}"


def _gold(problem: Problem) -> ProofChain:
    if problem.gold_proof is None or problem.gold_proof.empty:
        raise MissingGoldProof(problem.id)
    return problem.gold_proof


def _rng(seed: int, problem_id: str) -> random.Random:
    # per-problem stream so sampling is stable under corpus reordering
    return random.Random(f"{seed}:{problem_id}")


def _ordinals(chain: ProofChain) -> dict[str, int]:
    return {s.label: s.ordinal for s in chain.steps}


def build_css_prefixes(problem: Problem) -> list[InstanceSpec]:
    """One prefix per proof step, each ending right after step i."""
    chain = _gold(problem)
    ordinal_of = _ordinals(chain)
    header = problem_header(problem)
    specs = []
    lines = []
    for i, step in enumerate(chain.steps, start=1):
        lines.append(render_step(step, ordinal_of))
        specs.append(InstanceSpec(
            problem_id=problem.id,
            task="CSS",
            step_index=i,
            label=problem.label,
            text=header + "\n" + "\n".join(lines),
        ))
    return specs


def _fact_pools(problem: Problem, chain: ProofChain) -> tuple[list[str], list[str]]:
    """Necessary = fact labels in the dependency closure of the final step."""
    all_facts = [f"fact{i}" for i in range(1, len(problem.facts) + 1)]
    final = chain.steps[-1].label
    closure = dependency_closure(chain, [final])
    necessary = [f for f in all_facts if f in closure]
    redundant = [f for f in all_facts if f not in closure]
    return necessary, redundant


def build_rfi_instances(problem: Problem, seed: int = 0) -> list[InstanceSpec]:
    """Six instances anchored after the facts and hypothesis: an appended
    fact is either necessary (in the final conclusion's dependency closure)
    or redundant."""
    chain = _gold(problem)
    necessary, redundant = _fact_pools(problem, chain)
    if len(necessary) < 3:
        raise InsufficientFacts("necessary", len(necessary), 3)
    if len(redundant) < 3:
        raise InsufficientFacts("redundant", len(redundant), 3)
    rng = _rng(seed, problem.id)
    picks = [(label, "necessary") for label in rng.sample(necessary, 3)]
    picks += [(label, "redundant") for label in rng.sample(redundant, 3)]
    header = problem_header(problem)
    sentences = {f"fact{i}": s for i, s in enumerate(problem.facts, start=1)}
    return [
        InstanceSpec(
            problem_id=problem.id,
            task="RFI",
            step_index=0,
            label=kind,
            candidate_id=label,
            text=f"{header}\nConsider: {label}: {sentences[label]}",
        )
        for label, kind in picks
    ]


def build_nsd_instances(problem: Problem, seed: int = 0) -> list[InstanceSpec]:
    """36 instances: 6 anchor steps, each with 3 later-proof steps that are
    already derivable there and 3 that are not yet derivable (their premises
    cite labels not yet introduced)."""
    chain = _gold(problem)
    steps = chain.steps
    given = set(chain.givens) | {f"fact{i}" for i in range(1, len(problem.facts) + 1)}

    def available(t: int) -> set[str]:
        return given | {s.label for s in steps[:t]}

    eligible: dict[int, tuple[list, list]] = {}
    for t in range(1, len(steps)):
        have = available(t)
        derivable, pending = [], []
        for later in steps[t:]:
            if later.kind == "assumption":
                continue  # assumptions assert nothing to derive
            (derivable if set(later.premise_refs) <= have else pending).append(later)
        if len(derivable) >= 3 and len(pending) >= 3:
            eligible[t] = (derivable, pending)

    if len(eligible) < 6:
        raise InsufficientCandidates(
            detail=f"only {len(eligible)} anchors with 3+3 candidates in {problem.id}")
    rng = _rng(seed, problem.id)
    anchors = sorted(rng.sample(sorted(eligible), 6))
    ordinal_of = _ordinals(chain)
    header = problem_header(problem)
    specs = []
    for t in anchors:
        prefix = header + "\n" + "\n".join(render_step(s, ordinal_of) for s in steps[:t])
        derivable, pending = eligible[t]
        chosen = [(s, "derivable") for s in rng.sample(derivable, 3)]
        chosen += [(s, "not-derivable") for s in rng.sample(pending, 3)]
        for step, kind in chosen:
            specs.append(InstanceSpec(
                problem_id=problem.id,
                task="NSD",
                step_index=t,
                label=kind,
                candidate_id=step.label,
                text=f"{prefix}\nCandidate next step:\n{render_step(step, ordinal_of)}",
            ))
    return specs
