"""First-order formula AST: terms, connectives, quantifiers, and the
canonical unicode rendering.

Formulas are immutable and hashable; equality is structural. Bound-variable
naming is canonicalized by :func:`normalize` (x1, x2, ... in order of first
binder occurrence), so ``normalize(f) == normalize(g)`` is the alpha-aware
equality used throughout the toolkit.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class Term:
    pass


@dataclass(frozen=True)
class Const(Term):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __str__(self):
        return self.name


class Formula:
    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Falsum(Formula):
    pass


FALSUM = Falsum()

# Precedence levels for minimal-paren printing: implication binds loosest.
_LEVEL_IMPLIES = 1
_LEVEL_OR = 2
_LEVEL_AND = 3
_LEVEL_UNARY = 4


def _render(f: Formula, level: int) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return f"{f.pred}({', '.join(str(t) for t in f.args)})"
    if isinstance(f, Falsum):
        return "⊥"
    if isinstance(f, Not):
        return "¬" + _render(f.body, _LEVEL_UNARY)
    if isinstance(f, (ForAll, Exists)):
        q = "∀" if isinstance(f, ForAll) else "∃"
        inner = _render(f.body, 0)
        if isinstance(f.body, (And, Or, Implies)):
            inner = f"({inner})"
        s = f"{q}{f.var} {inner}"
        # the grammar gives quantifier bodies maximal extent, so any
        # operand position needs parentheses to stop the swallow
        return f"({s})" if level > 0 else s
    if isinstance(f, And):
        s = f"{_render(f.left, _LEVEL_AND)} ∧ {_render(f.right, _LEVEL_AND + 1)}"
        return f"({s})" if level > _LEVEL_AND else s
    if isinstance(f, Or):
        s = f"{_render(f.left, _LEVEL_OR)} ∨ {_render(f.right, _LEVEL_OR + 1)}"
        return f"({s})" if level > _LEVEL_OR else s
    if isinstance(f, Implies):
        s = f"{_render(f.left, _LEVEL_IMPLIES + 1)} → {_render(f.right, _LEVEL_IMPLIES)}"
        return f"({s})" if level > _LEVEL_IMPLIES else s
    raise TypeError(f"not a formula: {f!r}")


def to_text(f: Formula) -> str:
    """Canonical unicode rendering; inverse of the parser up to normalize."""
    return _render(f, 0)


def normalize(f: Formula) -> Formula:
    """Rename bound variables to x1, x2, ... in order of first binder
    occurrence (pre-order). Idempotent; free structure unchanged."""
    counter = [0]

    def walk(g: Formula, env: dict[str, str]) -> Formula:
        if isinstance(g, Atom):
            args = tuple(
                Var(env[t.name]) if isinstance(t, Var) and t.name in env else t
                for t in g.args
            )
            return Atom(g.pred, args)
        if isinstance(g, Falsum):
            return g
        if isinstance(g, Not):
            return Not(walk(g.body, env))
        if isinstance(g, And):
            return And(walk(g.left, env), walk(g.right, env))
        if isinstance(g, Or):
            return Or(walk(g.left, env), walk(g.right, env))
        if isinstance(g, Implies):
            return Implies(walk(g.left, env), walk(g.right, env))
        if isinstance(g, (ForAll, Exists)):
            counter[0] += 1
            fresh = f"x{counter[0]}"
            body = walk(g.body, {**env, g.var: fresh})
            return type(g)(fresh, body)
        raise TypeError(f"not a formula: {g!r}")

    return walk(f, {})


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {t.name for t in f.args if isinstance(t, Var)}
    if isinstance(f, Falsum):
        return set()
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or, Implies)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (ForAll, Exists)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def substitute(f: Formula, var: str, term: Term) -> Formula:
    """Replace free occurrences of ``var`` with ``term`` (a constant in all
    catalog uses, so no capture is possible)."""
    if isinstance(f, Atom):
        args = tuple(
            term if isinstance(t, Var) and t.name == var else t for t in f.args
        )
        return Atom(f.pred, args)
    if isinstance(f, Falsum):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.body, var, term))
    if isinstance(f, And):
        return And(substitute(f.left, var, term), substitute(f.right, var, term))
    if isinstance(f, Or):
        return Or(substitute(f.left, var, term), substitute(f.right, var, term))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, var, term), substitute(f.right, var, term))
    if isinstance(f, (ForAll, Exists)):
        if f.var == var:  # shadowed: inner binder wins
            return f
        return type(f)(f.var, substitute(f.body, var, term))
    raise TypeError(f"not a formula: {f!r}")


class ArityError(Exception):
    """Predicate used with two different arities."""

    def __init__(self, pred: str, seen: int, got: int):
        super().__init__(f"predicate {pred!r} used with arity {got} after arity {seen}")
        self.pred = pred
        self.seen = seen
        self.got = got


def collect_predicates(f: Formula, registry: dict[str, int] | None = None) -> dict[str, int]:
    """Predicate name -> arity map; raises ArityError on inconsistency,
    including against a pre-populated ``registry``."""
    reg = registry if registry is not None else {}

    def walk(g: Formula):
        if isinstance(g, Atom):
            arity = len(g.args)
            if g.pred in reg and reg[g.pred] != arity:
                raise ArityError(g.pred, reg[g.pred], arity)
            reg[g.pred] = arity
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (ForAll, Exists)):
            walk(g.body)

    walk(f)
    return reg


def collect_constants(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {t.name for t in f.args if isinstance(t, Const)}
    if isinstance(f, Falsum):
        return set()
    if isinstance(f, Not):
        return collect_constants(f.body)
    if isinstance(f, (And, Or, Implies)):
        return collect_constants(f.left) | collect_constants(f.right)
    if isinstance(f, (ForAll, Exists)):
        return collect_constants(f.body)
    raise TypeError(f"not a formula: {f!r}")


def subformulas(f: Formula) -> set[Formula]:
    """All subformulas of ``f``, including itself (quantified bodies with free
    variables are skipped: only closed pieces are useful as search targets)."""
    out: set[Formula] = set()

    def walk(g: Formula):
        if is_closed(g):
            out.add(g)
        if isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (ForAll, Exists)):
            walk(g.body)

    walk(f)
    return out


def complement(f: Formula) -> Formula:
    """¬f, collapsing a leading negation: complement(¬p) = p."""
    if isinstance(f, Not):
        return f.body
    return Not(f)


def ac_key(f: Formula, _env: dict[str, int] | None = None):
    """Hashable key identifying formulas up to ∧/∨ operand order and
    bound-variable naming. Used only by the rule matcher; structural
    equality elsewhere stays order-sensitive."""
    env = _env or {}
    if isinstance(f, Atom):
        return (
            "atom",
            f.pred,
            tuple(("v", env[t.name]) if isinstance(t, Var) else ("c", t.name) for t in f.args),
        )
    if isinstance(f, Falsum):
        return ("falsum",)
    if isinstance(f, Not):
        return ("not", ac_key(f.body, env))
    if isinstance(f, And):
        a, b = sorted((ac_key(f.left, env), ac_key(f.right, env)))
        return ("and", a, b)
    if isinstance(f, Or):
        a, b = sorted((ac_key(f.left, env), ac_key(f.right, env)))
        return ("or", a, b)
    if isinstance(f, Implies):
        return ("implies", ac_key(f.left, env), ac_key(f.right, env))
    if isinstance(f, (ForAll, Exists)):
        tag = "forall" if isinstance(f, ForAll) else "exists"
        return (tag, ac_key(f.body, {**env, f.var: len(env)}))
    raise TypeError(f"not a formula: {f!r}")
