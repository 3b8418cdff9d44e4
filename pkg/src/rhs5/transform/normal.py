"""Normal-form routes: splitting a formula into its top-sequents and back.

``nf_split`` inverts the propositional rules on a formula until only
literals remain; ``nf_assemble`` applies them forward again.  ``nf_jump``
pushes the body of a principal jump formula into a new crown component.
Together they give modality stripping, the inversion of the modal and
structural rules, and contraction of arbitrary formulas.
"""
from __future__ import annotations

from typing import Iterator, Optional

from ..calculus import INITIAL_RULES, Proof, Rule, RuleInstance
from ..formula import BOT, TOP, Box, Dia, Formula, is_atom, is_modal, render_formula
from ..hypersequent import CrownComponent, RootedHypersequent
from ..qnf import TopSequent, decompose, expand, is_literal_unit
from .core import (
    TransformError,
    add_items,
    aligned_premises,
    contract_atom,
    contract_external,
    delete_constant,
    infer,
    invert_propositional,
    leaf,
    merge_root,
    relabel,
    remove_items,
    rule_for,
    thread_formula,
    tick,
    weaken_formula,
)

Items = tuple[tuple[str, Formula], ...]


def _first_compound(items: Items) -> Optional[int]:
    for i, (_, f) in enumerate(items):
        if not is_literal_unit(f):
            return i
    return None


def nf_split(pf: Proof, items: Items) -> list[Proof]:
    """Invert pf on the compound formulas among items, in decomposition order.

    The n-th proof concludes pf's conclusion with items replaced by the n-th
    top-sequent of ``decompose_all(items)`` (height-preserving).
    """
    i = _first_compound(items)
    if i is None:
        return [pf]
    side, f = items[i]
    head, rest = items[:i], items[i + 1:]
    parts = invert_propositional(pf, RuleInstance(rule_for(side, f), f))
    out = []
    for branch, part in zip(expand(f, side), parts):
        out.extend(nf_split(part, head + branch + rest))
    return out


def nf_assemble(items: Items, base: RootedHypersequent, proofs: Iterator[Proof]) -> Proof:
    """Rebuild base + items from proofs of base + each top-sequent, in decomposition order."""
    tick()
    conclusion = add_items(base, items)
    i = _first_compound(items)
    if i is None:
        try:
            pf = next(proofs)
        except StopIteration:
            raise TransformError("too few top-sequent proofs") from None
        return relabel(pf, conclusion)
    side, f = items[i]
    head, rest = items[:i], items[i + 1:]
    children = [nf_assemble(head + branch + rest, base, proofs) for branch in expand(f, side)]
    return infer(conclusion, RuleInstance(rule_for(side, f), f), children)


def _trivial(top: TopSequent) -> bool:
    """The top-sequent is closed by bot on the left or top on the right."""
    return any((s == "L" and g == BOT) or (s == "R" and g == TOP) for s, g in top)


def _dropped(top: TopSequent) -> list[tuple[str, Formula]]:
    """Constants that vanish: top on the left, bot on the right."""
    return [(s, g) for s, g in top if (s == "L" and g == TOP) or (s == "R" and g == BOT)]


def _jump_target(s: RootedHypersequent, principal: tuple[str, Formula], top: TopSequent) -> RootedHypersequent:
    """s without the principal formula, the modal literals of top in the root and its atoms as a new component."""
    rest = remove_items(s, [principal])
    modal = [(sd, g) for sd, g in top if is_modal(g)]
    comp = CrownComponent(
        [g for sd, g in top if sd == "L" and is_atom(g)],
        [g for sd, g in top if sd == "R" and is_atom(g)],
    )
    return add_items(rest, modal).add(crown=[comp])


def nf_jump(pf: Proof, side: str, body: Formula) -> list[Optional[Proof]]:
    """For <>body on the left (side "L") or []body on the right (side "R").

    Entry n proves the conclusion without the modal formula, with the modal
    literals of the n-th top-sequent of ``decompose(body, side)`` added to the
    root and its atoms as a new crown component; entries for top-sequents
    closed by a constant are None.  Height-preserving.
    """
    principal = (side, Dia(body) if side == "L" else Box(body))
    tops = decompose(body, side)
    return _nf_jump(pf, principal, body, tops)


def _nf_jump(pf: Proof, principal, body, tops) -> list[Optional[Proof]]:
    tick()
    s = pf.conclusion
    side, mf = principal
    targets = [None if _trivial(t) else _jump_target(s, principal, t) for t in tops]
    rule = pf.rule
    if rule in INITIAL_RULES:
        return [None if t is None else leaf(t) for t in targets]
    kids = aligned_premises(pf)
    principal_rule = Rule.LDia if side == "L" else Rule.RBox
    if rule is principal_rule and pf.instance.principal == mf:
        child = kids[0]
        here = len(s.crown)
        out: list[Optional[Proof]] = []
        for top, target, part in zip(tops, targets, nf_split(child, ((side, body),))):
            if target is None:
                out.append(None)
                continue
            for sd, c in _dropped(top):
                part = delete_constant(part, sd, c)
            out.append(infer(target, RuleInstance(Rule.Exch, crown_index=here), [part]))
        return out
    per_child = [_nf_jump(k, principal, body, tops) for k in kids]
    return [
        None if t is None else infer(t, pf.instance, [results[n] for results in per_child])
        for n, t in enumerate(targets)
    ]


def _restore_constants(pf: Proof, top: TopSequent) -> Proof:
    for sd, c in _dropped(top):
        pf = thread_formula(pf, sd, c)
    return pf


def strip_modality(pf: Proof, side: str, body: Formula) -> Proof:
    """<>A,G=>D becomes A,G=>D (side "L"); G=>D,[]A becomes G=>D,A (side "R")."""
    mf = Dia(body) if side == "L" else Box(body)
    s = pf.conclusion
    base = remove_items(s, [(side, mf)])
    tops = decompose(body, side)
    proofs = []
    for top, part in zip(tops, nf_jump(pf, side, body)):
        if part is None:
            proofs.append(leaf(add_items(base, top)))
            continue
        folded = merge_root(part, len(part.conclusion.crown) - 1)
        proofs.append(_restore_constants(folded, top))
    return nf_assemble(((side, body),), base, iter(proofs))


def strip_both(pf: Proof, dia_body: Formula, box_body: Formula) -> Proof:
    """<>A,G=>D,[]B becomes A,G=>D,B."""
    return strip_modality(strip_modality(pf, "L", dia_body), "R", box_body)


# -------------------------------------------------------------- modal inversion

def invert_jump(pf: Proof, inst: RuleInstance) -> Proof:
    """A proof of the premise of LDia or RBox, from a proof of its conclusion."""
    s = pf.conclusion
    if inst.rule not in (Rule.LDia, Rule.RBox):
        raise TransformError(f"{inst.rule} is not LDia or RBox")
    (premise,) = _premises(s, inst)
    side = "L" if inst.rule is Rule.LDia else "R"
    body = inst.principal.sub
    here = len(s.crown)
    tops = decompose(body, side)
    base = remove_items(premise, [(side, body)])
    proofs = []
    for top, part in zip(tops, nf_jump(pf, side, body)):
        if part is None:
            proofs.append(leaf(add_items(base, top)))
            continue
        # swap the root atoms back with the component nf_jump created
        c = part.conclusion
        m, p, q, n = c.root_partition()
        comp = c.crown[here]
        swapped = RootedHypersequent(m + comp.ante, n + comp.succ, c.crown[:here] + (CrownComponent(p, q),))
        moved = infer(swapped, RuleInstance(Rule.Exch, crown_index=here), [part])
        proofs.append(_restore_constants(moved, top))
    return relabel(nf_assemble(((side, body),), base, iter(proofs)), premise)


def invert_exchange(pf: Proof, k: int) -> Proof:
    """A proof of the premise of Exch at crown index k."""
    tick()
    (target,) = _premises(pf.conclusion, RuleInstance(Rule.Exch, crown_index=k))
    rule = pf.rule
    if rule is Rule.Exch:
        child = aligned_premises(pf)[0]
        j = pf.instance.crown_index
        if j == k:
            return relabel(child, target)
        return relabel(invert_exchange(child, k), target)
    if rule is Rule.LDia or rule is Rule.RBox:
        return infer(target, pf.instance, aligned_premises(pf))
    # a leaf or LBox/RDia: swap back with one more Exch
    return infer(target, RuleInstance(Rule.Exch, crown_index=k), [pf])


def _premises(s: RootedHypersequent, inst: RuleInstance) -> list[RootedHypersequent]:
    from ..calculus import RuleError, apply_backward

    try:
        return apply_backward(s, inst)
    except RuleError as e:
        raise TransformError(f"{inst} does not match {s}: {e}") from None


def invert_rule(pf: Proof, inst: RuleInstance) -> list[Proof]:
    """Proofs of every premise of inst applied to pf's conclusion."""
    _premises(pf.conclusion, inst)
    rule = inst.rule
    if rule in INITIAL_RULES:
        return []
    if rule is Rule.LBox:
        return [weaken_formula(pf, "L", inst.principal.sub)]
    if rule is Rule.RDia:
        return [weaken_formula(pf, "R", inst.principal.sub)]
    if rule is Rule.LDia or rule is Rule.RBox:
        return [invert_jump(pf, inst)]
    if rule is Rule.Exch:
        return [invert_exchange(pf, inst.crown_index)]
    return invert_propositional(pf, inst)


# ---------------------------------------------------------- general contraction

def contract_formula(pf: Proof, side: str, f: Formula) -> Proof:
    """Remove one of two copies of f from a side of the root."""
    tick()
    s = pf.conclusion
    have = s.ante if side == "L" else s.succ
    if have.count(f) < 2:
        raise TransformError(f"no duplicate {render_formula(f)} to contract in {s}")
    target = remove_items(s, [(side, f)])
    if is_atom(f):
        return contract_atom(pf, ("root", side, f))
    if f == TOP or f == BOT:
        if (side == "L") == (f == BOT):
            return leaf(target)
        return delete_constant(pf, side, f)
    rule = pf.rule
    if rule in INITIAL_RULES:
        return leaf(target)
    kids = aligned_premises(pf)
    mine = pf.instance
    principal = mine.principal == f and mine.rule.side == side
    if not principal:
        return infer(target, mine, [contract_formula(k, side, f) for k in kids])

    if rule is Rule.LBox or rule is Rule.RDia:
        return infer(target, mine, [contract_formula(kids[0], side, f)])
    if rule is Rule.LDia or rule is Rule.RBox:
        # the other copy is passive in the premise; strip it and contract the bodies
        body = f.sub
        stripped = strip_modality(kids[0], side, body)
        return infer(target, mine, [contract_formula(stripped, side, body)])

    # propositional principal: invert the other copy, then contract the parts
    inst = RuleInstance(rule, f)
    children = []
    for n, (k, branch) in enumerate(zip(kids, expand(f, side))):
        inverted = invert_propositional(k, inst)[n]
        for sd, g in branch:
            inverted = contract_formula(inverted, sd, g)
        children.append(inverted)
    return infer(target, mine, children)


def contract_to(pf: Proof, target: RootedHypersequent) -> Proof:
    """Contract duplicates in pf until it proves target."""
    s = pf.conclusion
    try:
        extra_ante = list((s.ante - target.ante).items)
        extra_succ = list((s.succ - target.succ).items)
    except KeyError:
        raise TransformError(f"{s} does not contain {target}") from None
    out = pf
    for f in extra_ante:
        out = contract_formula(out, "L", f)
    for f in extra_succ:
        out = contract_formula(out, "R", f)
    remaining = list(out.conclusion.crown)
    for c in target.crown:
        if c not in remaining:
            raise TransformError(f"{s} lacks a crown component of {target}")
        remaining.remove(c)
    for c in remaining:
        crown = out.conclusion.crown
        idx = [n for n, d in enumerate(crown) if d == c]
        if len(idx) < 2:
            raise TransformError(f"crown component {c} has no duplicate in {out.conclusion}")
        out = contract_external(out, idx[0], idx[1])
    return relabel(out, target)
