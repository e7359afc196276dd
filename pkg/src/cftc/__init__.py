"""Component fault trees over input/output labeled transition systems."""

from .cft import CFT, clauses, compose, compose_strict
from .checker import Bounds, Counterexample, Verdict, check_cft, check_clause, simplify_counterexample
from .component import Component, Message, PortDecl, compose_components, validate_deterministic
from .environment import EnvTable
from .formula import And, EventRef, Kind, Lit, NegClause, Or, neg_dnf, parse_formula

__version__ = "0.1.0"

__all__ = [
    "And", "Bounds", "CFT", "Component", "Counterexample", "EnvTable", "EventRef", "Kind", "Lit", "Message",
    "NegClause", "Or", "PortDecl", "Verdict", "check_cft", "check_clause", "clauses", "compose",
    "compose_components", "compose_strict", "neg_dnf", "parse_formula", "simplify_counterexample",
    "validate_deterministic",
]
