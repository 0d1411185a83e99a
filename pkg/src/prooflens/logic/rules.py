"""Atomic inference-rule catalog.

Each rule consumes whole formulas from a known set and yields a single
conclusion. Matching against known formulas is commutative-aware for
∧/∨ operands (via ac_key); produced conclusions are always normalized,
so structural equality is the only comparison callers need.

Generative rules (conjunction/disjunction/existential/double-negation
introduction) are universe-guided: they only emit conclusions drawn
from the caller-supplied universe of candidate formulas, which keeps
forward search finite without sacrificing the derivations that matter.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .formulas import (
    And,
    Const,
    Exists,
    FALSUM,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    ac_key,
    complement,
    normalize,
    subformulas,
    substitute,
)


@dataclass(frozen=True)
class RuleApplication:
    """One instantiation of a catalog rule.

    premises are the known formulas actually consumed (normalized);
    conclusion is normalized; substitution maps bound-variable names to
    constant names for quantifier rules.
    """

    rule_id: str
    premises: tuple[Formula, ...]
    conclusion: Formula
    substitution: dict[str, str] = field(default_factory=dict, compare=False)


RULE_IDS = (
    "universal-modus-ponens",
    "modus-ponens",
    "modus-tollens",
    "universal-modus-tollens",
    "conjunction-intro",
    "conjunction-elim",
    "disjunction-intro",
    "disjunctive-syllogism",
    "de-morgan",
    "contraposition",
    "universal-instantiation",
    "existential-intro",
    "double-negation-elim",
    "double-negation-intro",
    "contradiction",
    "reductio",
)


def build_universe(formulas: Iterable[Formula], constants: list[str], cap: int = 500) -> list[Formula]:
    """Candidate conclusions for generative rules: every closed subformula
    of the inputs, plus constant instantiations of quantified bodies,
    expanded to a fixpoint under a size cap."""
    seen: set[Formula] = set()
    order: list[Formula] = []
    frontier = [normalize(f) for f in formulas]
    while frontier and len(order) < cap:
        f = frontier.pop()
        for s in subformulas(f):
            s = normalize(s)
            if s in seen:
                continue
            seen.add(s)
            order.append(s)
            if isinstance(s, (ForAll, Exists)):
                for c in constants:
                    frontier.append(normalize(substitute(s.body, s.var, Const(c))))
    return order


def enumerate_applications(
    known: list[Formula],
    universe: list[Formula],
    constants: list[str],
) -> Iterator[RuleApplication]:
    """Yield every single-rule application available from the known set.

    known formulas must be normalized; duplicates are tolerated.
    """
    by_key: dict = defaultdict(list)
    for f in known:
        bucket = by_key[ac_key(f)]
        if f not in bucket:
            bucket.append(f)

    def lookup(target: Formula) -> list[Formula]:
        return by_key.get(ac_key(target), [])

    for f in known:
        if isinstance(f, And):
            yield RuleApplication("conjunction-elim", (f,), normalize(f.left))
            yield RuleApplication("conjunction-elim", (f,), normalize(f.right))

        if isinstance(f, Implies):
            for p in lookup(f.left):
                yield RuleApplication("modus-ponens", (f, p), normalize(f.right))
            for p in lookup(complement(f.right)):
                yield RuleApplication("modus-tollens", (f, p), normalize(complement(f.left)))
            yield RuleApplication(
                "contraposition",
                (f,),
                normalize(Implies(complement(f.right), complement(f.left))),
            )

        if isinstance(f, ForAll):
            for c in constants:
                yield RuleApplication(
                    "universal-instantiation",
                    (f,),
                    normalize(substitute(f.body, f.var, Const(c))),
                    {f.var: c},
                )
            if isinstance(f.body, Implies):
                for c in constants:
                    ante = normalize(substitute(f.body.left, f.var, Const(c)))
                    cons = substitute(f.body.right, f.var, Const(c))
                    for p in lookup(ante):
                        yield RuleApplication(
                            "universal-modus-ponens", (f, p), normalize(cons), {f.var: c}
                        )
                    for p in lookup(complement(cons)):
                        yield RuleApplication(
                            "universal-modus-tollens",
                            (f, p),
                            normalize(complement(substitute(f.body.left, f.var, Const(c)))),
                            {f.var: c},
                        )
                yield RuleApplication(
                    "contraposition",
                    (f,),
                    normalize(ForAll(f.var, Implies(complement(f.body.right), complement(f.body.left)))),
                )

        if isinstance(f, Or):
            for p in lookup(complement(f.left)):
                yield RuleApplication("disjunctive-syllogism", (f, p), normalize(f.right))
            for p in lookup(complement(f.right)):
                yield RuleApplication("disjunctive-syllogism", (f, p), normalize(f.left))
            if isinstance(f.left, Not) and isinstance(f.right, Not):
                yield RuleApplication(
                    "de-morgan", (f,), normalize(Not(And(f.left.body, f.right.body)))
                )

        if isinstance(f, And) and isinstance(f.left, Not) and isinstance(f.right, Not):
            yield RuleApplication(
                "de-morgan", (f,), normalize(Not(Or(f.left.body, f.right.body)))
            )

        if isinstance(f, Not):
            if isinstance(f.body, And):
                yield RuleApplication(
                    "de-morgan", (f,), normalize(Or(Not(f.body.left), Not(f.body.right)))
                )
            if isinstance(f.body, Or):
                yield RuleApplication(
                    "de-morgan", (f,), normalize(And(Not(f.body.left), Not(f.body.right)))
                )
            if isinstance(f.body, Not):
                yield RuleApplication("double-negation-elim", (f,), normalize(f.body.body))

        for p in lookup(complement(f)):
            yield RuleApplication("contradiction", (f, p), FALSUM)

    for u in universe:
        if isinstance(u, And):
            for p in lookup(u.left):
                for q in lookup(u.right):
                    yield RuleApplication("conjunction-intro", (p, q), normalize(u))
        elif isinstance(u, Or):
            for side in (u.left, u.right):
                for p in lookup(side):
                    yield RuleApplication("disjunction-intro", (p,), normalize(u))
        elif isinstance(u, Exists):
            for c in constants:
                inst = normalize(substitute(u.body, u.var, Const(c)))
                for p in lookup(inst):
                    yield RuleApplication("existential-intro", (p,), normalize(u), {u.var: c})
        elif isinstance(u, Not) and isinstance(u.body, Not):
            for p in lookup(u.body.body):
                yield RuleApplication("double-negation-intro", (p,), normalize(u))


def check_reductio(assumption: Formula, conclusion: Formula) -> bool:
    """Discharging an assumption after ⊥ yields the assumption's
    complement (classically: assuming ¬B and refuting it yields B)."""
    return normalize(conclusion) == normalize(complement(assumption))


def reductio_application(assumption: Formula, falsum_premise: Formula) -> RuleApplication:
    return RuleApplication("reductio", (normalize(assumption), falsum_premise), normalize(complement(assumption)))
