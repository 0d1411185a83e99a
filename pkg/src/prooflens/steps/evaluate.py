"""Stepwise soundness evaluation: validity, relevance, atomicity per step.

Symbolic chains are scored locally (entailment search + single-rule check);
natural-language chains go to the remote judge when one is configured and are
marked unknown otherwise.  Relevance is structural in both dialects.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from prooflens.logic import (
    DEFAULT_BUDGET,
    FALSUM,
    Budget,
    Formula,
    check_atomic_verbose,
    check_reductio,
    entails,
)
from prooflens.proofs import ProofChain, ProofStep
from prooflens.steps.judge import (
    JudgeClient,
    RemoteJudgeUnavailable,
    UnparseableJudgeReply,
)
from prooflens.steps.verdicts import ChainVerdict, StepVerdict, aggregate  # noqa: F401

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckerConfig:
    budget: Budget = DEFAULT_BUDGET
    judge: JudgeClient | None = None

    def __post_init__(self):
        self.budget.validate()


DEFAULT_CONFIG = CheckerConfig()


# ---------------------------------------------------------------------------
# premise resolution

class _Table:
    """Labels citable so far, each with the assumption scope it was born in.

    A label derived under an assumption is discharged together with it, so
    citing it after the block closed is a fallacy: legality of a citation is
    scope(label) being a subset of the currently open assumptions.
    """

    def __init__(self, chain: ProofChain, facts: dict | None):
        self.values: dict[str, object] = {}
        self.scopes: dict[str, frozenset[str]] = {}
        self.open: list[str] = []
        for label, value in {**(facts or {}), **chain.givens}.items():
            self.values[label] = value
            self.scopes[label] = frozenset()

    def add(self, label: str, value, extra_scope: str | None = None):
        scope = set(self.open)
        if extra_scope is not None:
            scope.add(extra_scope)
        self.values[label] = value
        self.scopes[label] = frozenset(scope)

    def resolve(self, refs) -> tuple[list, bool, bool]:
        """-> (values, any_missing, any_out_of_scope)."""
        values, missing, out_of_scope = [], False, False
        current = set(self.open)
        for ref in refs:
            if ref not in self.values:
                missing = True
                continue
            if not self.scopes[ref] <= current:
                out_of_scope = True
            values.append(self.values[ref])
        return values, missing, out_of_scope

    def enter(self, step: ProofStep):
        """Register a step's conclusion and maintain the assumption stack."""
        if step.kind == "assumption":
            self.add(step.label, step.conclusion, extra_scope=step.label)
            self.open.append(step.label)
            return
        if step.kind == "reductio-discharge":
            discharged = next((r for r in step.premise_refs if r in self.open), None)
            if discharged is None and self.open:
                discharged = self.open[-1]
            if discharged is not None:
                while self.open:
                    popped = self.open.pop()
                    if popped == discharged:
                        break
            self.add(step.label, step.conclusion)
            return
        self.add(step.label, step.conclusion)


# ---------------------------------------------------------------------------
# single-step verdicts

_VACUOUS_KINDS = ("given-fact", "assumption")


def _all_formulas(values) -> bool:
    return all(isinstance(v, Formula) for v in values)


def _symbolic_step(step: ProofStep, table: _Table, budget: Budget):
    """-> (v, v_unknown, a, a_unknown) for the symbolic dialect."""
    if step.kind in _VACUOUS_KINDS:
        return True, False, True, False

    if step.kind == "reductio-discharge":
        ok = _discharge_ok(step, table)
        return ok, False, ok, False

    premises, missing, out_of_scope = table.resolve(step.premise_refs)
    if missing or not isinstance(step.conclusion, Formula) or not _all_formulas(premises):
        return False, True, False, True

    verdict = entails(premises, step.conclusion, budget)
    v = verdict.status == "valid"
    v_unknown = verdict.status == "unknown"
    if out_of_scope:
        # citing a discharged label is a fallacy regardless of the formulas
        v, v_unknown = False, False

    result = check_atomic_verbose(premises, step.conclusion, budget)
    return v, v_unknown, result.atomic, result.unknown


def _discharge_ok(step: ProofStep, table: _Table) -> bool:
    """Reductio discharge is a structural rule: it must cite a contradiction
    reached under the innermost open assumption and conclude its complement."""
    if not isinstance(step.conclusion, Formula):
        return False
    assumption = next((r for r in step.premise_refs if r in table.open), None)
    if assumption is None or table.open[-1] != assumption:
        return False
    cited_falsum = any(
        table.values.get(r) == FALSUM for r in step.premise_refs if r != assumption
    )
    if not cited_falsum:
        return False
    opened = table.values[assumption]
    return isinstance(opened, Formula) and check_reductio(opened, step.conclusion)


def _natural_step(step: ProofStep, table: _Table, judge: JudgeClient | None):
    """-> (v, v_unknown, a, a_unknown, source) for the natural dialect."""
    if step.kind in _VACUOUS_KINDS:
        return True, False, True, False, "symbolic"
    if judge is None:
        return False, True, False, True, "skipped"

    premises, missing, _ = table.resolve(step.premise_refs)
    if missing:
        return False, True, False, True, "remote"
    premises_str = "\n".join(
        f"{ref}: {table.values[ref]}" for ref in step.premise_refs if ref in table.values
    )
    concl = f"{step.label}: {step.conclusion_text()}"

    def ask(kind: str):
        try:
            return judge.ask(kind, premises_str, concl), False
        except UnparseableJudgeReply as exc:
            log.warning("judge reply unparseable (%s): %s", kind, exc)
            return False, True
        except RemoteJudgeUnavailable as exc:
            log.warning("judge unavailable (%s): %s", kind, exc)
            return False, True

    v, v_unknown = ask("validity")
    a, a_unknown = ask("atomicity")
    return v, v_unknown, a, a_unknown, "remote"


# ---------------------------------------------------------------------------
# public operations

def eval_relevance(chain: ProofChain) -> list[bool]:
    """A step is relevant iff cited by a later step, or it is the final
    conclusion, or it is an assumption/contradiction inside a reductio block
    whose discharge step is relevant."""
    steps = chain.steps
    index = {s.label: i for i, s in enumerate(steps)}
    relevant = [False] * len(steps)
    for k, step in enumerate(steps):
        for ref in step.premise_refs:
            i = index.get(ref)
            if i is not None and i < k:
                relevant[i] = True
    for i, step in enumerate(steps):
        # a reductio discharge labeled `hypothesis` states the final
        # conclusion too, so the exemption keys on label as well as kind
        if step.kind == "final-conclusion" or step.label == "hypothesis":
            relevant[i] = True
    for open_i, close_i in _reductio_blocks(chain):
        if relevant[close_i]:
            for j in range(open_i, close_i):
                if steps[j].kind in ("assumption", "contradiction"):
                    relevant[j] = True
    return relevant


def _reductio_blocks(chain: ProofChain) -> list[tuple[int, int]]:
    """(assumption index, discharge index) pairs, innermost matching."""
    blocks: list[tuple[int, int]] = []
    stack: list[tuple[str, int]] = []
    for i, step in enumerate(chain.steps):
        if step.kind == "assumption":
            stack.append((step.label, i))
        elif step.kind == "reductio-discharge" and stack:
            labels = [lbl for lbl, _ in stack]
            target = next((r for r in step.premise_refs if r in labels), labels[-1])
            while stack:
                label, open_i = stack.pop()
                if label == target:
                    blocks.append((open_i, i))
                    break
    return blocks


def _verdicts(chain: ProofChain, config: CheckerConfig, facts: dict | None):
    table = _Table(chain, facts)
    relevance = eval_relevance(chain)
    out = []
    for i, step in enumerate(chain.steps):
        if chain.dialect == "natural":
            v, vu, a, au, source = _natural_step(step, table, config.judge)
        else:
            v, vu, a, au = _symbolic_step(step, table, config.budget)
            source = "symbolic"
        r, ru = relevance[i], False
        if source == "skipped":
            r, ru = False, True
        out.append(StepVerdict(step.label, v, r, a,
                               v_unknown=vu, r_unknown=ru, a_unknown=au,
                               judge_source=source))
        table.enter(step)
    return out


def evaluate_chain(chain: ProofChain, config: CheckerConfig | None = None,
                   facts: dict | None = None) -> ChainVerdict:
    """Score one chain.  `facts` supplies problem-statement formulas (or
    sentences) for fact labels the chain cites without declaring."""
    config = config or DEFAULT_CONFIG
    verdicts = tuple(_verdicts(chain, config, facts))
    if chain.malformed:
        # malformed chains fail all three metrics outright
        return ChainVerdict(chain.problem_id, verdicts, False, False, False,
                            malformed=True)
    return ChainVerdict(
        chain.problem_id,
        verdicts,
        all(sv.v_effective for sv in verdicts),
        all(sv.r_effective for sv in verdicts),
        all(sv.a_effective for sv in verdicts),
        excluded=chain.empty,
    )


def evaluate_chains(chains, config: CheckerConfig | None = None,
                    facts_by_id: dict | None = None) -> list[ChainVerdict]:
    facts_by_id = facts_by_id or {}
    return [
        evaluate_chain(c, config, facts_by_id.get(c.problem_id))
        for c in chains
    ]


def _replay_to(chain: ProofChain, step: ProofStep, facts: dict | None) -> _Table:
    table = _Table(chain, facts)
    for s in chain.steps:
        if s.ordinal >= step.ordinal:
            break
        table.enter(s)
    return table


def eval_validity(step: ProofStep, context: ProofChain,
                  config: CheckerConfig | None = None,
                  facts: dict | None = None) -> tuple[bool, bool]:
    """-> (valid, unknown) for one step inside its chain."""
    config = config or DEFAULT_CONFIG
    table = _replay_to(context, step, facts)
    if context.dialect == "natural":
        v, vu, _, _, _ = _natural_step(step, table, config.judge)
        return v, vu
    v, vu, _, _ = _symbolic_step(step, table, config.budget)
    return v, vu


def eval_atomicity(step: ProofStep, context: ProofChain,
                   config: CheckerConfig | None = None,
                   facts: dict | None = None) -> tuple[bool, bool]:
    """-> (atomic, unknown) for one step inside its chain."""
    config = config or DEFAULT_CONFIG
    table = _replay_to(context, step, facts)
    if context.dialect == "natural":
        _, _, a, au, _ = _natural_step(step, table, config.judge)
        return a, au
    _, _, a, au = _symbolic_step(step, table, config.budget)
    return a, au
