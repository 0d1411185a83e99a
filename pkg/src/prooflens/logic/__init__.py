"""First-order logic core: AST, parser/printer, rule catalog, bounded
entailment search, and the finite-model semantic oracle."""

from .formulas import (
    And,
    ArityError,
    Atom,
    Const,
    Exists,
    FALSUM,
    Falsum,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    Term,
    Var,
    ac_key,
    collect_constants,
    collect_predicates,
    complement,
    free_vars,
    is_closed,
    normalize,
    subformulas,
    substitute,
    to_text,
)
from .parser import FormulaSyntaxError, parse_formula, parse_formulas
from .rules import (
    RULE_IDS,
    RuleApplication,
    build_universe,
    check_reductio,
    enumerate_applications,
    reductio_application,
)
from .search import (
    AtomicityResult,
    Budget,
    DEFAULT_BUDGET,
    EntailmentVerdict,
    InvalidBudget,
    atomic_application,
    check_atomic,
    check_atomic_verbose,
    entails,
)
from .semantics import (
    CombinatorialLimit,
    Model,
    SemanticResult,
    eval_formula,
    is_monadic_or_ground,
    semantic_entails_bruteforce,
)

print_formula = to_text

__all__ = [
    "And", "ArityError", "Atom", "AtomicityResult", "Budget", "CombinatorialLimit",
    "Const", "DEFAULT_BUDGET", "EntailmentVerdict", "Exists", "FALSUM", "Falsum",
    "ForAll", "Formula", "FormulaSyntaxError", "Implies", "InvalidBudget", "Model",
    "Not", "Or", "RULE_IDS", "RuleApplication", "SemanticResult", "Term", "Var",
    "ac_key", "atomic_application", "build_universe", "check_atomic", "check_atomic_verbose",
    "check_reductio", "collect_constants", "collect_predicates", "complement",
    "entails", "enumerate_applications", "eval_formula", "free_vars", "is_closed",
    "is_monadic_or_ground", "normalize", "parse_formula", "parse_formulas",
    "print_formula", "reductio_application", "semantic_entails_bruteforce",
    "subformulas", "substitute", "to_text",
]
