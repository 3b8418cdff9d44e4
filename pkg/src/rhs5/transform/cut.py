"""Cut elimination.

``eliminate_cut(left, right, D)`` takes cut-free proofs of G=>D,D and
D,G'=>D' and returns a cut-free proof of G,G'=>D,D' whose crown is the
union of both crowns.  Constants are handled by deletion and weakening,
compound cut formulas by inversion into smaller cuts, and atomic or modal
ones by induction on the height of the two proofs.
"""
from __future__ import annotations

from ..calculus import INITIAL_RULES, JUMP_RULES, Proof, Rule, RuleInstance
from ..formula import BOT, TOP, And, Formula, Imp, Neg, Or, is_atom, render_formula
from ..hypersequent import CrownComponent, RootedHypersequent
from .core import (
    TransformError,
    aligned_premises,
    delete_constant,
    external_weaken,
    infer,
    invert_propositional,
    leaf,
    merge_crown,
    relabel,
    rule_for,
    tick,
    weaken_to,
)
from .normal import contract_to, strip_modality
from ..calculus import initial_instance
from ..hypersequent import EMPTY_COMPONENT


def cut_conclusion(left: RootedHypersequent, right: RootedHypersequent, d: Formula) -> RootedHypersequent:
    """The conclusion of a cut on d: G,G'=>D,D' with the left crown first."""
    try:
        return RootedHypersequent(
            left.ante + right.ante.remove(d),
            left.succ.remove(d) + right.succ,
            left.crown + right.crown,
        )
    except KeyError:
        raise TransformError(
            f"cut formula {render_formula(d)} must be on the right of {left} and the left of {right}"
        ) from None


def eliminate_cut(left: Proof, right: Proof, d: Formula) -> Proof:
    """A cut-free proof of the conclusion of a cut on d between left and right."""
    tick()
    target = cut_conclusion(left.conclusion, right.conclusion, d)
    if d == BOT:
        return weaken_to(delete_constant(left, "R", BOT), target)
    if d == TOP:
        return weaken_to(delete_constant(right, "L", TOP), target)
    t = type(d)
    if t in (Neg, And, Or, Imp):
        return relabel(_cut_propositional(left, right, d, target), target)
    return relabel(_cut_height(left, right, d, target), target)


def _cut_propositional(left: Proof, right: Proof, d: Formula, target: RootedHypersequent) -> Proof:
    lp = invert_propositional(left, RuleInstance(rule_for("R", d), d))
    rp = invert_propositional(right, RuleInstance(rule_for("L", d), d))
    t = type(d)
    if t is Neg:
        # G=>D,~A gives A,G=>D ; ~A,G'=>D' gives G'=>D',A
        out = eliminate_cut(rp[0], lp[0], d.sub)
    elif t is And:
        # G=>D,A and G=>D,B ; A,B,G'=>D'
        first = eliminate_cut(lp[0], rp[0], d.left)
        out = eliminate_cut(lp[1], first, d.right)
    elif t is Or:
        # G=>D,A,B ; A,G'=>D' and B,G'=>D'
        first = eliminate_cut(lp[0], rp[0], d.left)
        out = eliminate_cut(first, rp[1], d.right)
    else:
        # A,G=>D,B ; G'=>D',A and B,G'=>D'
        first = eliminate_cut(rp[0], lp[0], d.left)
        out = eliminate_cut(first, rp[1], d.right)
    return contract_to(out, target)


def _cut_height(left: Proof, right: Proof, d: Formula, target: RootedHypersequent) -> Proof:
    tick()
    lr, rr = left.rule, right.rule
    if lr in INITIAL_RULES or rr in INITIAL_RULES:
        if initial_instance(target) is not None:
            return leaf(target)
        # the initial sequent is p=>p on the cut atom itself
        other = right if lr in INITIAL_RULES else left
        return weaken_to(other, target)
    if lr not in JUMP_RULES:
        if lr is Rule.RDia and left.instance.principal == d:
            return _principal_dia(left, right, d, target)
        outs = [eliminate_cut(k, right, d) for k in aligned_premises(left)]
        return infer(target, left.instance, outs)
    if rr not in JUMP_RULES:
        if rr is Rule.LBox and right.instance.principal == d:
            return _principal_box(left, right, d, target)
        outs = [eliminate_cut(left, k, d) for k in aligned_premises(right)]
        return infer(target, right.instance, outs)
    if is_atom(d):
        return _cut_atom_jumps(left, right, d, target)
    return _cut_modal_jumps(left, right, d, target)


def _principal_dia(left: Proof, right: Proof, d: Formula, target: RootedHypersequent) -> Proof:
    """left ends in RDia on d = <>A."""
    (child,) = aligned_premises(left)
    body = d.sub
    kept = eliminate_cut(child, right, d)  # G,G'=>D,A,D'
    stripped = strip_modality(right, "L", body)  # A,G'=>D'
    both = eliminate_cut(kept, stripped, body)
    return contract_to(both, target)


def _principal_box(left: Proof, right: Proof, d: Formula, target: RootedHypersequent) -> Proof:
    """right ends in LBox on d = []A."""
    (child,) = aligned_premises(right)
    body = d.sub
    kept = eliminate_cut(left, child, d)  # A,G,G'=>D,D'
    stripped = strip_modality(left, "R", body)  # G=>D,A
    both = eliminate_cut(stripped, kept, body)
    return contract_to(both, target)


def push(pf: Proof) -> Proof:
    """M,P=>Q,N||H becomes M=>N||H|P=>Q (root modal or atomic)."""
    tick()
    s = pf.conclusion
    if not s.root_is_modal_atomic():
        raise TransformError(f"cannot push the atoms of {s}: the root has a compound formula")
    m, p, q, n = s.root_partition()
    target = RootedHypersequent(m, n, s.crown + (CrownComponent(p, q),))
    rule = pf.rule
    if rule is Rule.LDia or rule is Rule.RBox or rule is Rule.Exch:
        (child,) = aligned_premises(pf)
        return infer(target, pf.instance, [external_weaken(child, EMPTY_COMPONENT)])
    return infer(
        target, RuleInstance(Rule.Exch, crown_index=len(s.crown)), [external_weaken(pf, EMPTY_COMPONENT)]
    )


def _cut_modal_jumps(left: Proof, right: Proof, d: Formula, target: RootedHypersequent) -> Proof:
    """Both proofs end in jumps and d is modal."""
    lr = left.rule
    nl = len(left.conclusion.crown)
    if not (lr is Rule.RBox and left.instance.principal == d):
        # d is passive in the left jump: move the right proof into a component first
        pushed = push(right)
        (child,) = aligned_premises(left)
        joined = eliminate_cut(child, pushed, d)
        n_child = len(child.conclusion.crown)
        mine = n_child - 1 if lr is not Rule.Exch else left.instance.crown_index
        theirs = n_child + len(right.conclusion.crown)
        return infer(target, left.instance, [merge_crown(joined, mine, theirs)])
    # left is RBox on d, so d is passive in the right jump
    pushed = push(left)
    (child,) = aligned_premises(right)
    joined = eliminate_cut(pushed, child, d)
    n_child = len(child.conclusion.crown)
    if right.rule is Rule.Exch:
        k = right.instance.crown_index
        theirs = nl + 1 + k
        inst = RuleInstance(Rule.Exch, crown_index=nl + k)
    else:
        theirs = nl + 1 + n_child - 1
        inst = right.instance
    return infer(target, inst, [merge_crown(joined, nl, theirs)])


def _cut_atom_jumps(left: Proof, right: Proof, p: Formula, target: RootedHypersequent) -> Proof:
    """Both proofs end in jumps and p is an atom: p has moved into a crown component on the left."""
    (child,) = aligned_premises(left)
    if left.rule is Rule.Exch:
        c = left.instance.crown_index
    else:
        c = len(child.conclusion.crown) - 1
    joined = _cut_into_crown(child, c, right, p)
    return infer(target, left.instance, [joined])


def _crown_cut_conclusion(s: RootedHypersequent, c: int, right: RootedHypersequent, p: Formula) -> RootedHypersequent:
    m, pp, qq, n = right.root_partition()
    comp = s.crown[c]
    try:
        fused = CrownComponent(comp.ante + pp.remove(p), comp.succ.remove(p) + qq)
    except KeyError:
        raise TransformError(f"atom {render_formula(p)} missing for a crown cut") from None
    crown = s.crown[:c] + (fused,) + s.crown[c + 1:] + right.crown
    return RootedHypersequent(s.ante + m, s.succ + n, crown)


def _cut_into_crown(pf: Proof, c: int, right: Proof, p: Formula) -> Proof:
    """Cut on p where p sits in the succedent of crown component c of pf.

    The atoms of right's root go into component c, its modal formulas into
    the root, its crown after pf's crown.
    """
    tick()
    target = _crown_cut_conclusion(pf.conclusion, c, right.conclusion, p)
    rule = pf.rule
    if rule in INITIAL_RULES:
        return leaf(target)
    kids = aligned_premises(pf)
    if rule is Rule.Exch and pf.instance.crown_index == c:
        # p comes back to the root: an ordinary cut against right
        return infer(target, pf.instance, [eliminate_cut(kids[0], right, p)])
    return infer(target, pf.instance, [_cut_into_crown(k, c, right, p) for k in kids])
