"""Parser for the formula grammar.

Grammar (canonical printer emits exactly this shape):

    formula     := implication
    implication := disjunction ("→" implication)?
    disjunction := conjunction ("∨" conjunction)*
    conjunction := negation ("∧" negation)*
    negation    := "¬" negation | quantified | atom | "(" formula ")" | "⊥"
    quantified  := ("∀"|"∃") var formula
    atom        := NAME ("(" term ("," term)* ")")?

ASCII aliases accepted on input only: ``~`` ``&`` ``|`` ``->`` and the
``Ax.`` / ``Ex.`` quantifier prefix (quantifier letter, variable, dot).
Lowercase names are variables when bound by an enclosing quantifier and
constants otherwise; parsed formulas are always closed.
"""

from __future__ import annotations

import re

from .formulas import (
    And,
    ArityError,
    Atom,
    Const,
    Exists,
    FALSUM,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    Var,
    collect_predicates,
    normalize,
)


class FormulaSyntaxError(Exception):
    """Bad formula text; ``offset`` is the byte offset (UTF-8) of the error."""

    def __init__(self, message: str, text: str, pos: int):
        self.offset = len(text[:pos].encode("utf-8"))
        super().__init__(f"{message} (byte offset {self.offset})")


_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>->|[()∀∃¬∧∨→⊥~&|.,]))"
)


def _tokenize(text: str):
    tokens = []  # (kind, value, char_pos)
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            err_pos = pos + (len(rest) - len(stripped))
            raise FormulaSyntaxError(f"unexpected character {stripped[0]!r}", text, err_pos)
        if m.group("name"):
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            op = m.group("op")
            op = {"~": "¬", "&": "∧", "|": "∨", "->": "→"}.get(op, op)
            tokens.append(("op", op, m.start("op")))
        pos = m.end()
    return tokens


_VAR_RE = re.compile(r"[a-z][a-z0-9_]*$")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def _next(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _expect(self, op: str):
        kind, val, pos = self._next()
        if kind != "op" or val != op:
            raise FormulaSyntaxError(f"expected {op!r}, found {val!r}", self.text, pos)

    def parse(self) -> Formula:
        f = self.formula(())
        kind, val, pos = self._peek()
        if kind is not None:
            raise FormulaSyntaxError(f"trailing input {val!r}", self.text, pos)
        return f

    def formula(self, bound: tuple[str, ...]) -> Formula:
        left = self.disjunction(bound)
        kind, val, _ = self._peek()
        if kind == "op" and val == "→":
            self._next()
            return Implies(left, self.formula(bound))
        return left

    def disjunction(self, bound) -> Formula:
        f = self.conjunction(bound)
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val == "∨":
                self._next()
                f = Or(f, self.conjunction(bound))
            else:
                return f

    def conjunction(self, bound) -> Formula:
        f = self.negation(bound)
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val == "∧":
                self._next()
                f = And(f, self.negation(bound))
            else:
                return f

    def negation(self, bound) -> Formula:
        kind, val, pos = self._peek()
        if kind == "op":
            if val == "¬":
                self._next()
                return Not(self.negation(bound))
            if val == "⊥":
                self._next()
                return FALSUM
            if val == "(":
                self._next()
                f = self.formula(bound)
                self._expect(")")
                return f
            if val in ("∀", "∃"):
                self._next()
                return self.quantified(val, bound)
        if kind == "name":
            # ASCII quantifier alias: "Ax." / "Ex." (dot required)
            nk, nv, _ = self.tokens[self.i + 1] if self.i + 1 < len(self.tokens) else (None, None, 0)
            if (
                len(val) > 1
                and val[0] in ("A", "E")
                and _VAR_RE.match(val[1:])
                and nk == "op"
                and nv == "."
            ):
                self._next()
                self._next()
                q = "∀" if val[0] == "A" else "∃"
                return self._quantifier_body(q, val[1:], bound)
            return self.atom(bound)
        raise FormulaSyntaxError(f"expected a formula, found {val!r}", self.text, pos)

    def quantified(self, q: str, bound) -> Formula:
        kind, val, pos = self._next()
        if kind != "name" or not _VAR_RE.match(val):
            raise FormulaSyntaxError(f"expected a variable after {q}", self.text, pos)
        # tolerate an optional dot after the variable
        nk, nv, _ = self._peek()
        if nk == "op" and nv == ".":
            self._next()
        return self._quantifier_body(q, val, bound)

    def _quantifier_body(self, q: str, var: str, bound) -> Formula:
        body = self.formula(bound + (var,))
        return ForAll(var, body) if q == "∀" else Exists(var, body)

    def atom(self, bound) -> Formula:
        _, name, _ = self._next()
        kind, val, _ = self._peek()
        args: list = []
        if kind == "op" and val == "(":
            self._next()
            while True:
                tk, tv, tpos = self._next()
                if tk != "name":
                    raise FormulaSyntaxError(f"expected a term, found {tv!r}", self.text, tpos)
                args.append(Var(tv) if tv in bound else Const(tv))
                nk, nv, npos = self._next()
                if nk == "op" and nv == ",":
                    continue
                if nk == "op" and nv == ")":
                    break
                raise FormulaSyntaxError(f"expected ',' or ')', found {nv!r}", self.text, npos)
        return Atom(name, tuple(args))


def parse_formula(text: str, registry: dict[str, int] | None = None) -> Formula:
    """Parse one closed formula into normalized form (bound variables
    renamed x1, x2, ...), so parse(print(f)) == normalize(f). ``registry``
    carries predicate arities across a batch; inconsistent use raises
    ArityError."""
    f = _Parser(text).parse()
    collect_predicates(f, registry if registry is not None else {})
    return normalize(f)


def parse_formulas(texts: list[str]) -> list[Formula]:
    """Parse a batch sharing one arity registry."""
    registry: dict[str, int] = {}
    return [parse_formula(t, registry) for t in texts]
