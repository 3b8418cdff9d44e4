"""Quasi-normal forms.

A quasi-literal is an atom or a modal formula, possibly negated; modal
formulas are opaque units that are never rewritten inside.  Conversion works
by decomposing the formula with the propositional sequent rules: decomposing
``=> f`` yields one top-sequent per conjunctive clause, decomposing ``f =>``
one per disjunctive phrase.  The proof transformations use the same
decomposition (``decompose``), so clause i of a normal form always matches
premise i of the corresponding inversion.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .formula import (
    BOT,
    TOP,
    And,
    Atom,
    Bottom,
    Box,
    Dia,
    Formula,
    Imp,
    Neg,
    Or,
    Top,
    is_atom,
    is_quasi_atom,
    render_formula,
)

# One top-sequent: the literals in the order the decomposition produced them,
# each tagged with the side ("L" or "R") it ends up on.
TopSequent = tuple[tuple[str, Formula], ...]

_FLIP = {"L": "R", "R": "L"}


def is_literal_unit(f: Formula) -> bool:
    """Atoms, modal formulas and constants are not decomposed further."""
    return is_quasi_atom(f) or type(f) is Bottom or type(f) is Top


def decompose(f: Formula, side: str) -> list[TopSequent]:
    """Top-sequents from applying propositional rules backward to f on the given side.

    ``decompose(f, "R")`` lists the clauses of a conjunctive normal form of f,
    ``decompose(f, "L")`` the phrases of a disjunctive one.  Duplicates and
    constants are kept.
    """
    return decompose_all(((side, f),))


def decompose_all(items: tuple[tuple[str, Formula], ...]) -> list[TopSequent]:
    """Decompose several formulas at once; the product is taken in order."""
    for i, (side, f) in enumerate(items):
        if is_literal_unit(f):
            continue
        head, rest = items[:i], items[i + 1:]
        out = []
        for branch in expand(f, side):
            for top in decompose_all(head + branch + rest):
                out.append(top)
        return out
    return [items]


def expand(f: Formula, side: str) -> list[tuple[tuple[str, Formula], ...]]:
    """Premise items of the propositional rule for f on side, one tuple per premise."""
    t = type(f)
    if t is Neg:
        return [((_FLIP[side], f.sub),)]
    if side == "L":
        if t is And:
            return [(("L", f.left), ("L", f.right))]
        if t is Or:
            return [(("L", f.left),), (("L", f.right),)]
        if t is Imp:
            return [(("R", f.left),), (("L", f.right),)]
    else:
        if t is And:
            return [(("R", f.left),), (("R", f.right),)]
        if t is Or:
            return [(("R", f.left), ("R", f.right))]
        if t is Imp:
            return [(("L", f.left), ("R", f.right))]
    raise ValueError(f"{render_formula(f)} is not a propositional compound")


# ----------------------------------------------------------------- datatypes

@dataclass(frozen=True)
class QuasiLiteral:
    positive: bool
    core: Formula

    def __post_init__(self) -> None:
        if not is_quasi_atom(self.core):
            raise ValueError(f"quasi-literal core must be an atom or modal formula: {render_formula(self.core)}")

    def formula(self) -> Formula:
        return self.core if self.positive else Neg(self.core)

    def __str__(self) -> str:
        return render_formula(self.formula())


@dataclass(frozen=True)
class QuasiClause:
    literals: tuple[QuasiLiteral, ...]
    kind: str  # "disjunctive" or "conjunctive"

    def __post_init__(self) -> None:
        if not self.literals:
            raise ValueError("quasi-clauses are nonempty")
        if self.kind not in ("disjunctive", "conjunctive"):
            raise ValueError(f"unknown clause kind {self.kind!r}")

    def _pick(self, positive: bool, atomic: bool) -> tuple[Formula, ...]:
        return tuple(l.core for l in self.literals if l.positive == positive and is_atom(l.core) == atomic)

    @property
    def positive_atoms(self) -> tuple[Formula, ...]:
        return self._pick(True, True)

    @property
    def negative_atoms(self) -> tuple[Formula, ...]:
        return self._pick(False, True)

    @property
    def positive_modals(self) -> tuple[Formula, ...]:
        return self._pick(True, False)

    @property
    def negative_modals(self) -> tuple[Formula, ...]:
        return self._pick(False, False)

    # the canonical clause shape  \/P | \/~Q | \/M | \/~N
    P = positive_atoms
    Q = negative_atoms
    M = positive_modals
    N = negative_modals

    def formula(self) -> Formula:
        op = Or if self.kind == "disjunctive" else And
        acc = self.literals[0].formula()
        for lit in self.literals[1:]:
            acc = op(acc, lit.formula())
        return acc

    def __str__(self) -> str:
        return render_formula(self.formula())


@dataclass(frozen=True)
class QuasiNormalForm:
    kind: str  # "CQNF" or "DQNF"
    clauses: tuple[QuasiClause, ...]
    constant: Optional[bool] = None  # truth value when the clause list is degenerate

    def formula(self) -> Formula:
        """The formula this normal form stands for."""
        if not self.clauses:
            if self.constant is None:
                return TOP if self.kind == "CQNF" else BOT
            return TOP if self.constant else BOT
        op = And if self.kind == "CQNF" else Or
        acc = self.clauses[0].formula()
        for c in self.clauses[1:]:
            acc = op(acc, c.formula())
        return acc

    reading = formula

    @property
    def degenerate(self) -> bool:
        return not self.clauses

    def __str__(self) -> str:
        return render_formula(self.formula())


def _normal_form(f: Formula, kind: str) -> QuasiNormalForm:
    # CQNF: clauses from "=> f"; a literal on the right is positive.
    # DQNF: phrases from "f =>"; a literal on the left is positive.
    side = "R" if kind == "CQNF" else "L"
    clause_kind = "disjunctive" if kind == "CQNF" else "conjunctive"
    # constants that make a whole clause trivial, and ones that simply vanish
    absorbing = {("R", TOP), ("L", BOT)} if kind == "CQNF" else {("L", BOT), ("R", TOP)}
    clauses = []
    for top in decompose(f, side):
        if any(item in absorbing for item in top):
            continue
        literals = []
        for s, g in top:
            if is_quasi_atom(g):
                lit = QuasiLiteral(s == side, g)
                if lit not in literals:
                    literals.append(lit)
        if not literals:
            # an empty clause is false, an empty phrase is true
            return QuasiNormalForm(kind, (), constant=(kind == "DQNF"))
        clauses.append(QuasiClause(tuple(literals), clause_kind))
    if not clauses:
        return QuasiNormalForm(kind, (), constant=(kind == "CQNF"))
    return QuasiNormalForm(kind, tuple(clauses))


def to_cqnf(f: Formula) -> QuasiNormalForm:
    return _normal_form(f, "CQNF")


def to_dqnf(f: Formula) -> QuasiNormalForm:
    return _normal_form(f, "DQNF")


# ------------------------------------------------------- equivalence check

def quasi_atoms(f: Formula) -> set[Formula]:
    """Maximal atomic or modal subformulas: the variables of the quasi-propositional skeleton."""
    if is_quasi_atom(f):
        return {f}
    out: set[Formula] = set()
    for c in f.children:
        out |= quasi_atoms(c)
    return out


def eval_skeleton(f: Formula, assignment: dict[Formula, bool]) -> bool:
    t = type(f)
    if t is Atom or t is Box or t is Dia:
        return assignment[f]
    if t is Top:
        return True
    if t is Bottom:
        return False
    if t is Neg:
        return not eval_skeleton(f.sub, assignment)
    a = eval_skeleton(f.left, assignment)
    if t is And:
        return a and eval_skeleton(f.right, assignment)
    if t is Or:
        return a or eval_skeleton(f.right, assignment)
    return (not a) or eval_skeleton(f.right, assignment)


def skeleton_equivalent(f: Formula, g: Formula) -> bool:
    """Agreement of f and g under every assignment to their quasi-atoms."""
    variables = sorted(quasi_atoms(f) | quasi_atoms(g))
    for bits in itertools.product((False, True), repeat=len(variables)):
        assignment = dict(zip(variables, bits))
        if eval_skeleton(f, assignment) != eval_skeleton(g, assignment):
            return False
    return True


def qnf_equivalent(f: Formula, n: QuasiNormalForm) -> bool:
    return skeleton_equivalent(f, n.formula())


def skeleton_tautology(f: Formula) -> bool:
    """f is an instance of a propositional tautology, reading atoms and modal formulas as variables."""
    return skeleton_equivalent(f, TOP)
