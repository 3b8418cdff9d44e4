"""A rooted hypersequent calculus for the modal logic S5.

Proof search, a proof checker, a Kripke-model validity oracle, quasi-normal
forms, proof transformations (weakening, contraction, merging, inversion,
cut elimination) and a translation from Hilbert-style derivations.
"""
from .calculus import Proof, Rule, RuleInstance, check_proof
from .formula import Formula, parse_formula, render_formula
from .hypersequent import CrownComponent, RootedHypersequent, parse_sequent, render_sequent
from .search import BudgetExceeded, NotProvable, Provable, SearchBudget, decide_formula, prove
from .semantics import Countermodel, KripkeModel, Valid, check_soundness, oracle_validity

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "Countermodel",
    "CrownComponent",
    "Formula",
    "KripkeModel",
    "NotProvable",
    "Proof",
    "Provable",
    "RootedHypersequent",
    "Rule",
    "RuleInstance",
    "SearchBudget",
    "Valid",
    "check_proof",
    "check_soundness",
    "decide_formula",
    "oracle_validity",
    "parse_formula",
    "parse_sequent",
    "prove",
    "render_formula",
    "render_sequent",
]
