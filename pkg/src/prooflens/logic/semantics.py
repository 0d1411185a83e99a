"""Finite-model semantic oracle.

Enumerates every interpretation over domains of size 1..max_domain
(constant assignments times predicate extensions) looking for a
countermodel of premises ⊨ conclusion. "entailed" is only claimed in
the monadic-or-ground fragment, where the finite model property holds
within the configured domain bound.

The enumeration is vectorized: each constant contributes one grid axis
of size n, each predicate one axis of size 2^(n^arity) (its extension
encoded as a bitmask), and formulas evaluate to boolean arrays
broadcast over the grid. A plain recursive interpreter (eval_formula)
is kept separate so countermodels can be re-checked through an
independent code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formulas import (
    And,
    Atom,
    Exists,
    Falsum,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    Var,
    collect_constants,
    collect_predicates,
)

DEFAULT_CAP = 2 ** 24


@dataclass
class Model:
    """Finite interpretation: domain {0..domain_size-1}, constant
    denotations, and predicate extensions as sets of index tuples."""

    domain_size: int
    constants: dict[str, int]
    predicates: dict[str, set[tuple[int, ...]]]


@dataclass
class SemanticResult:
    status: str  # "entailed" | "countermodel" | "inconclusive"
    countermodel: Model | None = None
    reason: str | None = None


class CombinatorialLimit(Exception):
    pass


def eval_formula(model: Model, f: Formula, env: dict[str, int] | None = None) -> bool:
    """Reference interpreter; env maps bound variable names to elements."""
    env = env or {}

    def term(t) -> int:
        if isinstance(t, Var):
            return env[t.name]
        return model.constants[t.name]

    if isinstance(f, Atom):
        return tuple(term(a) for a in f.args) in model.predicates.get(f.pred, set())
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Not):
        return not eval_formula(model, f.body, env)
    if isinstance(f, And):
        return eval_formula(model, f.left, env) and eval_formula(model, f.right, env)
    if isinstance(f, Or):
        return eval_formula(model, f.left, env) or eval_formula(model, f.right, env)
    if isinstance(f, Implies):
        return (not eval_formula(model, f.left, env)) or eval_formula(model, f.right, env)
    if isinstance(f, ForAll):
        return all(eval_formula(model, f.body, {**env, f.var: e}) for e in range(model.domain_size))
    if isinstance(f, Exists):
        return any(eval_formula(model, f.body, {**env, f.var: e}) for e in range(model.domain_size))
    raise TypeError(f"unknown formula node {f!r}")


def is_ground(formulas) -> bool:
    def has_quant(f: Formula) -> bool:
        if isinstance(f, (ForAll, Exists)):
            return True
        if isinstance(f, Atom) or isinstance(f, Falsum):
            return False
        if isinstance(f, Not):
            return has_quant(f.body)
        return has_quant(f.left) or has_quant(f.right)

    return not any(has_quant(f) for f in formulas)


def is_monadic_or_ground(formulas) -> bool:
    registry: dict[str, int] = {}
    for f in formulas:
        collect_predicates(f, registry)
    monadic = all(a <= 1 for a in registry.values())
    return monadic or is_ground(formulas)


class _Grid:
    """Axis bookkeeping for one domain size."""

    def __init__(self, n: int, const_names: list[str], preds: dict[str, int]):
        self.n = n
        self.const_names = const_names
        self.pred_names = sorted(preds)
        self.pred_arity = preds
        self.axes: dict[str, int] = {}
        sizes = []
        for i, c in enumerate(const_names):
            self.axes[("c", c)] = i
            sizes.append(n)
        for j, p in enumerate(self.pred_names):
            self.axes[("p", p)] = len(const_names) + j
            sizes.append(2 ** (n ** preds[p]))
        self.sizes = tuple(sizes)
        self.count = 1
        for s in sizes:
            self.count *= s

    def _axis_array(self, kind: str, name: str) -> np.ndarray:
        ax = self.axes[(kind, name)]
        size = self.sizes[ax]
        shape = [1] * len(self.sizes)
        shape[ax] = size
        return np.arange(size, dtype=np.int64).reshape(shape)

    def evaluate(self, f: Formula, env: dict[str, int]):
        n = self.n
        if isinstance(f, Atom):
            flat = np.int64(0)
            for t in f.args:
                idx = env[t.name] if isinstance(t, Var) else self._axis_array("c", t.name)
                flat = flat * n + idx
            mask = self._axis_array("p", f.pred)
            return ((mask >> flat) & 1).astype(bool)
        if isinstance(f, Falsum):
            return np.bool_(False)
        if isinstance(f, Not):
            return ~self.evaluate(f.body, env)
        if isinstance(f, And):
            return self.evaluate(f.left, env) & self.evaluate(f.right, env)
        if isinstance(f, Or):
            return self.evaluate(f.left, env) | self.evaluate(f.right, env)
        if isinstance(f, Implies):
            return ~self.evaluate(f.left, env) | self.evaluate(f.right, env)
        if isinstance(f, ForAll):
            out = None
            for e in range(n):
                v = self.evaluate(f.body, {**env, f.var: e})
                out = v if out is None else out & v
            return out
        if isinstance(f, Exists):
            out = None
            for e in range(n):
                v = self.evaluate(f.body, {**env, f.var: e})
                out = v if out is None else out | v
            return out
        raise TypeError(f"unknown formula node {f!r}")

    def decode(self, flat_index: int) -> Model:
        coords = np.unravel_index(flat_index, self.sizes) if self.sizes else ()
        constants = {c: int(coords[self.axes[("c", c)]]) for c in self.const_names}
        predicates: dict[str, set[tuple[int, ...]]] = {}
        for p in self.pred_names:
            mask = int(coords[self.axes[("p", p)]])
            arity = self.pred_arity[p]
            ext = set()
            for cell in range(self.n ** arity):
                if (mask >> cell) & 1:
                    tup = []
                    rem = cell
                    for _ in range(arity):
                        tup.append(rem % self.n)
                        rem //= self.n
                    ext.add(tuple(reversed(tup)))
            predicates[p] = ext
        return Model(self.n, constants, predicates)


def semantic_entails_bruteforce(
    premises,
    conclusion: Formula,
    max_domain: int | None = None,
    cap: int = DEFAULT_CAP,
) -> SemanticResult:
    """Search domains 1..max_domain for a countermodel. max_domain
    defaults to min(2^#predicates, 4) and must lie in [1, 4]."""
    premises = list(premises)
    registry: dict[str, int] = {}
    for f in premises + [conclusion]:
        collect_predicates(f, registry)
    const_names = sorted(
        {c for f in premises + [conclusion] for c in collect_constants(f)}
    )
    if max_domain is None:
        max_domain = min(2 ** len(registry), 4)
    if not 1 <= max_domain <= 4:
        raise ValueError(f"max_domain must be in [1, 4], got {max_domain}")

    explored = 0
    for n in range(1, max_domain + 1):
        grid = _Grid(n, const_names, registry)
        if explored + grid.count > cap:
            return SemanticResult("inconclusive", reason="combinatorial-limit")
        explored += grid.count

        bad = None  # truth grid of premises ∧ ¬conclusion
        for f in premises:
            v = grid.evaluate(f, {})
            bad = v if bad is None else bad & v
            if bad is not None and not np.any(bad):
                break
        if bad is None or np.any(bad):
            neg = ~grid.evaluate(conclusion, {})
            bad = neg if bad is None else bad & neg
            if np.any(bad):
                full = np.broadcast_to(bad, grid.sizes) if grid.sizes else bad
                flat = int(np.flatnonzero(full.ravel())[0]) if grid.sizes else 0
                return SemanticResult("countermodel", countermodel=grid.decode(flat))

    if is_monadic_or_ground(premises + [conclusion]):
        return SemanticResult("entailed")
    return SemanticResult("inconclusive", reason="outside-monadic-or-ground-fragment")
