"""Bounded entailment search over the atomic rule catalog.

entails() runs iterative-deepening forward search: restatements
resolve at 0 rules, a single catalog application at 1, deeper chains up
to the depth budget. Past the depth budget a saturation pass takes
over: it closes the premises under the catalog, proves ground literals
by contradiction where it can, and finally tries refuting the negated
conclusion. For premise sets inside the monadic-or-ground fragment the
finite-model oracle supplies countermodels (status invalid);
everything else degrades to unknown rather than erroring.

Derivations are flat tuples of catalog applications. Reductio
subproofs appear inline: a step whose premises include one formula not
yet established opens a block assuming that formula, the block's steps
run contiguously until a reductio application discharges it, and only
the discharged conclusion survives the block. Blocks never nest.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .formulas import (
    Atom,
    FALSUM,
    Formula,
    Not,
    collect_constants,
    complement,
    normalize,
    to_text,
)
from .rules import (
    RuleApplication,
    build_universe,
    enumerate_applications,
    reductio_application,
)
from .semantics import Model, is_monadic_or_ground, semantic_entails_bruteforce

# Fresh constant used to instantiate universals when the problem
# mentions no constants at all (sound: domains are nonempty).
FALLBACK_CONSTANT = "c0"


class InvalidBudget(Exception):
    pass


@dataclass(frozen=True)
class Budget:
    max_depth: int = 3
    max_nodes: int = 50_000
    max_seconds: float = 2.0

    def validate(self) -> None:
        if self.max_depth < 1 or self.max_nodes < 1 or self.max_seconds <= 0:
            raise InvalidBudget(f"budget components must be positive: {self}")


DEFAULT_BUDGET = Budget()


@dataclass
class EntailmentVerdict:
    status: str  # "valid" | "invalid" | "unknown"
    min_rule_count: int | None = None
    derivation: tuple[RuleApplication, ...] | None = None
    countermodel: Model | None = None
    reason: str | None = None

    @property
    def witness(self):
        if self.status == "valid":
            return self.derivation
        if self.status == "invalid":
            return self.countermodel
        return None


class _Exhausted(Exception):
    pass


class _Search:
    def __init__(self, premises: list[Formula], goal: Formula, budget: Budget):
        self.goal = goal
        self.budget = budget
        self.deadline = time.monotonic() + budget.max_seconds
        self.nodes = 0
        names = sorted({c for f in premises + [goal] for c in collect_constants(f)})
        self.constants = names if names else [FALLBACK_CONSTANT]
        # the negated goal seeds the universe so refutation blocks can
        # target its pieces with the generative rules
        self.universe = build_universe(premises + [goal, normalize(complement(goal))], self.constants)
        self.base = list(dict.fromkeys(premises))
        # memo of known-set extensions that failed with >= remaining depth
        self.failed: dict[frozenset, int] = {}

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _Exhausted("node budget")
        if self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise _Exhausted("time budget")

    def depth_one(self) -> RuleApplication | None:
        for app in enumerate_applications(self.base, self.universe, self.constants):
            self._tick()
            if app.conclusion == self.goal:
                return app
        return None

    def deepen(self, max_depth: int) -> tuple[RuleApplication, ...] | None:
        for depth in range(2, max_depth + 1):
            path: list[RuleApplication] = []
            known = list(self.base)
            known_set = set(known)
            if self._dfs(known, known_set, frozenset(), depth, path):
                return tuple(path)
        return None

    def _dfs(self, known, known_set, extension, depth_left, path) -> bool:
        seen_at = self.failed.get(extension)
        if seen_at is not None and seen_at >= depth_left:
            return False
        # materialized: recursion mutates `known` while we iterate
        apps = list(enumerate_applications(known, self.universe, self.constants))
        for app in apps:
            self._tick()
            c = app.conclusion
            if c == self.goal:
                path.append(app)
                return True
            if depth_left >= 2 and c not in known_set:
                known.append(c)
                known_set.add(c)
                path.append(app)
                if self._dfs(known, known_set, extension | {c}, depth_left - 1, path):
                    return True
                path.pop()
                known_set.discard(c)
                known.pop()
        self.failed[extension] = max(depth_left, self.failed.get(extension, 0))
        return False

    def candidate_assumptions(self) -> list[Formula]:
        """Ground literals worth refuting: every closed atom in the
        universe and its negation, in print order for determinism."""
        atoms = sorted(
            {f for f in self.universe if isinstance(f, Atom)},
            key=to_text,
        )
        out: list[Formula] = []
        for a in atoms:
            out.append(a)
            out.append(normalize(Not(a)))
        return out

    def saturation_route(self) -> tuple[RuleApplication, ...] | None:
        main = _Closure(self, self.base)
        out: list[RuleApplication] = []
        emitted: set[Formula] = set(self.base)
        # lemma conclusion -> (assumption refuted, its closure)
        lemma_blocks: dict[Formula, tuple[Formula, _Closure]] = {}

        def emit_main(f: Formula) -> None:
            if f in emitted:
                return
            emitted.add(f)
            block = lemma_blocks.get(f)
            if block is not None:
                assumption, closure = block
                emit_block(closure, assumption)
                out.append(reductio_application(assumption, FALSUM))
                return
            app = main.origins[f]
            for p in app.premises:
                emit_main(p)
            out.append(app)

        def emit_block(closure: _Closure, assumption: Formula) -> None:
            # inputs from the enclosing scope must be established before
            # the block opens, so the block's steps stay contiguous
            local_order: list[RuleApplication] = []
            seen: set[Formula] = set()
            externals: list[Formula] = []

            def visit(f: Formula) -> None:
                if f == assumption or f in seen:
                    return
                seen.add(f)
                app = closure.origins.get(f)
                if app is None:
                    externals.append(f)
                    return
                for p in app.premises:
                    visit(p)
                local_order.append(app)

            visit(FALSUM)
            for f in externals:
                emit_main(f)
            out.extend(local_order)

        if main.saturate(stop=self.goal):
            emit_main(self.goal)
            return tuple(out)

        progress = True
        while progress:
            progress = False
            for psi in self.candidate_assumptions():
                if psi in main.known_set or normalize(complement(psi)) in main.known_set:
                    continue
                block = _Closure(self, main.known + [psi])
                if not block.saturate(stop=FALSUM):
                    continue
                lemma = normalize(complement(psi))
                lemma_blocks[lemma] = (psi, block)
                main.add(lemma, None)
                if main.saturate(stop=self.goal):
                    emit_main(self.goal)
                    return tuple(out)
                progress = True

        assumption = normalize(complement(self.goal))
        block = _Closure(self, main.known + [assumption])
        if block.saturate(stop=FALSUM):
            emit_block(block, assumption)
            out.append(reductio_application(assumption, FALSUM))
            return tuple(out)
        return None


class _Closure:
    """Forward closure under the catalog, remembering for each derived
    formula the application that first produced it."""

    def __init__(self, search: _Search, base: list[Formula]):
        self.search = search
        self.known: list[Formula] = list(dict.fromkeys(base))
        self.known_set: set[Formula] = set(self.known)
        self.origins: dict[Formula, RuleApplication] = {}

    def add(self, f: Formula, app: RuleApplication | None) -> None:
        if f in self.known_set:
            return
        self.known_set.add(f)
        self.known.append(f)
        if app is not None:
            self.origins[f] = app

    def saturate(self, stop: Formula) -> bool:
        if stop in self.known_set:
            return True
        s = self.search
        while True:
            grew = False
            # materialized: additions land in the next pass
            for app in list(enumerate_applications(self.known, s.universe, s.constants)):
                s._tick()
                c = app.conclusion
                if c in self.known_set:
                    continue
                self.add(c, app)
                grew = True
                if c == stop:
                    return True
            if not grew:
                return False


def entails(premises, conclusion: Formula, budget: Budget | None = None) -> EntailmentVerdict:
    budget = budget or DEFAULT_BUDGET
    budget.validate()
    prem = [normalize(p) for p in premises]
    goal = normalize(conclusion)

    if goal in set(prem):
        return EntailmentVerdict("valid", min_rule_count=0, derivation=())

    search = _Search(prem, goal, budget)
    try:
        app = search.depth_one()
    except _Exhausted as e:
        return EntailmentVerdict("unknown", reason=str(e))
    if app is not None:
        return EntailmentVerdict("valid", min_rule_count=1, derivation=(app,))

    all_formulas = prem + [goal]
    oracle_entailed = False
    if is_monadic_or_ground(all_formulas):
        res = semantic_entails_bruteforce(prem, goal)
        if res.status == "countermodel":
            return EntailmentVerdict("invalid", countermodel=res.countermodel)
        oracle_entailed = res.status == "entailed"

    try:
        derivation = search.deepen(budget.max_depth)
    except _Exhausted as e:
        return EntailmentVerdict("unknown", reason=str(e))
    if derivation is not None:
        return EntailmentVerdict("valid", min_rule_count=len(derivation), derivation=derivation)

    try:
        derivation = search.saturation_route()
    except _Exhausted as e:
        return EntailmentVerdict("unknown", reason=str(e))
    if derivation is not None:
        return EntailmentVerdict("valid", min_rule_count=len(derivation), derivation=derivation)

    reason = "no-countermodel-within-bound" if oracle_entailed else "no-derivation-within-budget"
    return EntailmentVerdict("unknown", reason=reason)


@dataclass
class AtomicityResult:
    atomic: bool
    unknown: bool = False
    application: RuleApplication | None = None


def atomic_application(premises, conclusion: Formula) -> RuleApplication | None:
    """The single catalog application that derives conclusion from
    exactly the stated premises, or None. Restatements (conclusion
    already among the premises) yield None: zero rules were applied."""
    prem = [normalize(p) for p in premises]
    goal = normalize(conclusion)
    stated = frozenset(prem)
    if goal in stated:
        return None
    names = sorted({c for f in prem + [goal] for c in collect_constants(f)})
    constants = names if names else [FALLBACK_CONSTANT]
    universe = build_universe(prem + [goal], constants)
    base = list(dict.fromkeys(prem))
    for app in enumerate_applications(base, universe, constants):
        if app.conclusion == goal and frozenset(app.premises) == stated:
            return app
    return None


def check_atomic_verbose(premises, conclusion: Formula, budget: Budget | None = None) -> AtomicityResult:
    app = atomic_application(premises, conclusion)
    if app is not None:
        return AtomicityResult(True, application=app)
    verdict = entails(premises, conclusion, budget)
    return AtomicityResult(False, unknown=verdict.status == "unknown")


def check_atomic(premises, conclusion: Formula, budget: Budget | None = None) -> bool:
    return check_atomic_verbose(premises, conclusion, budget).atomic
