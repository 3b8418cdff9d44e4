"""Admissible-rule transformations on cut-free proofs.

Each public function takes a proof, returns a new one, and reports the
heights before and after.  Transformations marked height-preserving are
checked against their bound on every call.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..calculus import PROPOSITIONAL_RULES, Proof, RuleInstance
from ..formula import Formula, is_atom, is_modal
from ..hypersequent import CrownComponent
from . import core, cut, normal
from .core import StepBudget, TransformError, with_budget

DEFAULT_STEPS = 5_000_000


@dataclass(frozen=True)
class TransformReport:
    output: Proof
    height_in: int
    height_out: int
    height_preserving: bool

    @property
    def proof(self) -> Proof:
        return self.output


# ------------------------------------------------------------- locations

@dataclass(frozen=True)
class LeftRoot:
    """A formula in the antecedent of the root."""
    formula: Formula


@dataclass(frozen=True)
class RightRoot:
    """A formula in the succedent of the root."""
    formula: Formula


@dataclass(frozen=True)
class NewComponent:
    """A fresh crown component."""
    ante: tuple = ()
    succ: tuple = ()


@dataclass(frozen=True)
class CrownAtoms:
    """Atoms added to an existing crown component."""
    index: int
    ante: tuple = ()
    succ: tuple = ()


@dataclass(frozen=True)
class CrownLeft:
    """An atom in the antecedent of crown component index."""
    index: int
    atom: Formula


@dataclass(frozen=True)
class CrownRight:
    """An atom in the succedent of crown component index."""
    index: int
    atom: Formula


@dataclass(frozen=True)
class External:
    """Two equal crown components; the second is removed."""
    first: int
    second: int


@dataclass(frozen=True)
class LeftDia:
    """<>A in the antecedent of the root; A is the body."""
    body: Formula


@dataclass(frozen=True)
class RightBox:
    """[]A in the succedent of the root; A is the body."""
    body: Formula


Where = Union[LeftRoot, RightRoot, NewComponent, CrownAtoms, CrownLeft, CrownRight, External]


def _run(pf: Proof, preserving: bool, fn, steps: int = DEFAULT_STEPS) -> TransformReport:
    with with_budget(steps):
        out = fn()
    report = TransformReport(out, pf.height, out.height, preserving)
    if preserving and report.height_out > report.height_in:
        raise TransformError(
            f"height bound violated: {report.height_out} > {report.height_in}"
        )
    return report


def merge_crown(pf: Proof, i: int, j: int) -> TransformReport:
    """Fuse crown components i and j (the result sits at position i)."""
    return _run(pf, True, lambda: core.merge_crown(pf, i, j))


def merge_root(pf: Proof, i: int) -> TransformReport:
    """Fold crown component i into the root."""
    return _run(pf, True, lambda: core.merge_root(pf, i))


def weaken(pf: Proof, where) -> TransformReport:
    """Weakening.

    LeftRoot/RightRoot add a formula to the root (height-preserving for atoms
    and modal formulas), NewComponent appends a component and CrownAtoms adds
    atoms to one (both height-preserving).
    """
    if isinstance(where, NewComponent):
        comp = CrownComponent(where.ante, where.succ)
        return _run(pf, True, lambda: core.external_weaken(pf, comp))
    if isinstance(where, CrownAtoms):
        return _run(pf, True, lambda: core.crown_weaken(pf, where.index, where.ante, where.succ))
    if isinstance(where, (LeftRoot, RightRoot)):
        f = where.formula
        side = "L" if isinstance(where, LeftRoot) else "R"
        return _run(pf, is_atom(f) or is_modal(f), lambda: core.weaken_formula(pf, side, f))
    raise TransformError(f"cannot weaken at {where!r}")


def contract(pf: Proof, where) -> TransformReport:
    """Contraction.

    Atoms in the root or the crown and equal crown components contract
    height-preservingly; other root formulas go through the normal-form
    routes and may grow the proof.
    """
    if isinstance(where, External):
        return _run(pf, True, lambda: core.contract_external(pf, where.first, where.second))
    if isinstance(where, (CrownLeft, CrownRight)):
        side = "L" if isinstance(where, CrownLeft) else "R"
        return _run(pf, True, lambda: core.contract_atom(pf, ("crown", where.index, side, where.atom)))
    if isinstance(where, (LeftRoot, RightRoot)):
        side = "L" if isinstance(where, LeftRoot) else "R"
        f = where.formula
        if is_atom(f):
            return _run(pf, True, lambda: core.contract_atom(pf, ("root", side, f)))
        return _run(pf, False, lambda: normal.contract_formula(pf, side, f))
    raise TransformError(f"cannot contract at {where!r}")


def invert(pf: Proof, inst: RuleInstance) -> list[TransformReport]:
    """One proof per premise of inst applied to pf's conclusion.

    Propositional inversions are height-preserving; LBox and RDia inversions
    are weakenings, LDia/RBox and Exch go through the normal-form routes.
    """
    preserving = inst.rule in PROPOSITIONAL_RULES
    with with_budget(DEFAULT_STEPS):
        outs = normal.invert_rule(pf, inst)
    reports = [TransformReport(o, pf.height, o.height, preserving) for o in outs]
    for r in reports:
        if preserving and r.height_out > r.height_in:
            raise TransformError(f"height bound violated: {r.height_out} > {r.height_in}")
    return reports


def strip_modality(pf: Proof, where) -> TransformReport:
    """<>A on the left becomes A, or []A on the right becomes A."""
    if isinstance(where, LeftDia):
        return _run(pf, False, lambda: normal.strip_modality(pf, "L", where.body))
    if isinstance(where, RightBox):
        return _run(pf, False, lambda: normal.strip_modality(pf, "R", where.body))
    raise TransformError(f"cannot strip a modality at {where!r}")


def strip_both(pf: Proof, dia_body: Formula, box_body: Formula) -> TransformReport:
    """<>A,G=>D,[]B becomes A,G=>D,B."""
    return _run(pf, False, lambda: normal.strip_both(pf, dia_body, box_body))


def nf_jump(pf: Proof, where) -> list:
    """The normal-form jump route for <>A on the left or []A on the right (height-preserving)."""
    side, body = ("L", where.body) if isinstance(where, LeftDia) else ("R", where.body)
    with with_budget(DEFAULT_STEPS):
        outs = normal.nf_jump(pf, side, body)
    for o in outs:
        if o is not None and o.height > pf.height:
            raise TransformError(f"height bound violated: {o.height} > {pf.height}")
    return outs


def eliminate_cut(left: Proof, right: Proof, d: Formula, steps: int = DEFAULT_STEPS) -> TransformReport:
    """A cut-free proof of the conclusion of a cut on d between left and right."""
    with with_budget(steps):
        out = cut.eliminate_cut(left, right, d)
    return TransformReport(out, max(left.height, right.height) + 1, out.height, False)


__all__ = [
    "CrownAtoms",
    "CrownLeft",
    "CrownRight",
    "External",
    "LeftDia",
    "LeftRoot",
    "NewComponent",
    "RightBox",
    "RightRoot",
    "StepBudget",
    "TransformError",
    "TransformReport",
    "contract",
    "eliminate_cut",
    "invert",
    "merge_crown",
    "merge_root",
    "nf_jump",
    "strip_both",
    "strip_modality",
    "weaken",
]
