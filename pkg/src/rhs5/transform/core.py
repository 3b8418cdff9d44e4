"""Structural proof rewriting: merging, weakening, contraction, propositional inversion.

Every function takes a valid proof and returns a valid proof of the sequent
its docstring names.  Nodes are assembled with ``infer``, which re-derives
the premises from the schema, so a bookkeeping mistake surfaces at the node
where it happens rather than as an invalid proof later on.
"""
from __future__ import annotations

import contextvars
from typing import Iterable, Optional

from ..calculus import (
    INITIAL_RULES,
    LEFT_RULES,
    RIGHT_RULES,
    Proof,
    Rule,
    RuleError,
    RuleInstance,
    apply_backward,
    initial_instance,
)
from ..formula import BOT, TOP, Bottom, Formula, Top, is_atom, is_modal, render_formula
from ..hypersequent import CrownComponent, RootedHypersequent


class TransformError(RuntimeError):
    """A transformation could not be carried out."""


class StepBudget:
    """Counts rewriting steps; long transformations stop with TransformError."""

    def __init__(self, limit: int = 5_000_000) -> None:
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise TransformError(f"budget exceeded after {self.limit} steps")


_budget: contextvars.ContextVar[StepBudget] = contextvars.ContextVar("transform_budget")


def current_budget() -> StepBudget:
    try:
        return _budget.get()
    except LookupError:
        b = StepBudget()
        _budget.set(b)
        return b


def with_budget(limit: int):
    """Context manager installing a fresh step budget."""
    import contextlib

    @contextlib.contextmanager
    def manager():
        token = _budget.set(StepBudget(limit))
        try:
            yield _budget.get()
        finally:
            _budget.reset(token)

    return manager()


def tick() -> None:
    current_budget().tick()


# ------------------------------------------------------------- node helpers

def infer(conclusion: RootedHypersequent, inst: RuleInstance, premises: Iterable[Proof]) -> Proof:
    """A proof node, after checking the premises against the rule schema."""
    premises = tuple(premises)
    try:
        expected = apply_backward(conclusion, inst)
    except RuleError as e:
        raise TransformError(f"cannot apply {inst} to {conclusion}: {e}") from None
    if len(expected) != len(premises) or any(
        want != got.conclusion for want, got in zip(expected, premises)
    ):
        got = " ; ".join(str(p.conclusion) for p in premises)
        want = " ; ".join(str(s) for s in expected)
        raise TransformError(f"{inst} on {conclusion}: premises {got} do not match {want}")
    return Proof(conclusion, inst, premises)


def leaf(s: RootedHypersequent) -> Proof:
    inst = initial_instance(s)
    if inst is None:
        raise TransformError(f"{s} is not an initial sequent")
    return Proof(s, inst)


def crown_permutation(old: tuple, new: tuple) -> list[int]:
    """For each index of old, an index of new holding an equal component (a bijection)."""
    free: dict = {}
    for j, c in enumerate(new):
        free.setdefault(c, []).append(j)
    out = []
    for c in old:
        slots = free.get(c)
        if not slots:
            raise TransformError("crowns are not equal as multisets")
        out.append(slots.pop(0))
    return out


def relabel(pf: Proof, target: RootedHypersequent) -> Proof:
    """The same proof with its conclusion written as target (equal as a hypersequent)."""
    if pf.conclusion.identical(target):
        return pf
    if pf.conclusion != target:
        raise TransformError(f"relabel: {pf.conclusion} differs from {target}")
    inst = pf.instance
    if inst.rule is Rule.Exch:
        k = crown_permutation(pf.conclusion.crown, target.crown)[inst.crown_index]
        inst = RuleInstance(Rule.Exch, crown_index=k)
    return Proof(target, inst, pf.premises)


def aligned_premises(pf: Proof) -> list[Proof]:
    """Children relabelled so their crowns are in exactly the order the schema produces."""
    if not pf.premises:
        return []
    expected = apply_backward(pf.conclusion, pf.instance)
    return [relabel(child, want) for child, want in zip(pf.premises, expected)]


def rebuild(pf: Proof, target: RootedHypersequent, children: Iterable[Proof],
            inst: Optional[RuleInstance] = None) -> Proof:
    """Reapply pf's last rule (or inst) to target over new children."""
    inst = pf.instance if inst is None else inst
    if inst.rule in INITIAL_RULES:
        return leaf(target)
    return infer(target, inst, children)


def add_items(s: RootedHypersequent, items: Iterable[tuple[str, Formula]]) -> RootedHypersequent:
    ante = [f for side, f in items if side == "L"]
    succ = [f for side, f in items if side == "R"]
    return s.add(ante=ante, succ=succ)


def remove_items(s: RootedHypersequent, items: Iterable[tuple[str, Formula]]) -> RootedHypersequent:
    items = list(items)
    ante = [f for side, f in items if side == "L"]
    succ = [f for side, f in items if side == "R"]
    try:
        return s.remove(ante=ante, succ=succ)
    except KeyError as e:
        raise TransformError(f"{e.args[0]} in {s}") from None


def crown_merged(crown: tuple, i: int, j: int) -> tuple:
    """Component i replaced by the union of components i and j; j removed."""
    fused = crown[i].merged(crown[j])
    out = list(crown)
    out[i] = fused
    del out[j]
    return tuple(out)


def index_after_removal(k: int, removed: int) -> int:
    return k - 1 if k > removed else k


def _check_index(s: RootedHypersequent, *indices: int) -> None:
    for i in indices:
        if not 0 <= i < len(s.crown):
            raise TransformError(f"crown index {i} out of range for {s}")


# ------------------------------------------------------------ external weakening

def external_weaken(pf: Proof, comp: CrownComponent) -> Proof:
    """EW: append comp to the crown of every sequent in pf (height-preserving)."""
    tick()
    target = pf.conclusion.add(crown=[comp])
    if not pf.premises:
        return Proof(target, pf.instance)
    return infer(target, pf.instance, [external_weaken(c, comp) for c in aligned_premises(pf)])


# --------------------------------------------------------------------- merging

def merge_crown(pf: Proof, i: int, j: int) -> Proof:
    """Merge^c: components i and j fused at position i (height-preserving)."""
    tick()
    s = pf.conclusion
    _check_index(s, i, j)
    if i == j:
        raise TransformError("merge_crown needs two distinct components")
    target = s.replace(crown=crown_merged(s.crown, i, j))
    rule = pf.rule
    if rule in INITIAL_RULES:
        return leaf(target)
    kids = aligned_premises(pf)
    if rule is not Rule.Exch:
        # LDia/RBox append their new component after i and j, the rest keep the crown
        return infer(target, pf.instance, [merge_crown(k, i, j) for k in kids])
    k = pf.instance.crown_index
    child = kids[0]
    if k == i or k == j:
        other = j if k == i else i
        fused_at = index_after_removal(i, j)
        return infer(target, RuleInstance(Rule.Exch, crown_index=fused_at), [merge_root(child, other)])
    return infer(
        target,
        RuleInstance(Rule.Exch, crown_index=index_after_removal(k, j)),
        [merge_crown(child, i, j)],
    )


def merge_root(pf: Proof, i: int) -> Proof:
    """Merge: component i folded into the root (height-preserving)."""
    tick()
    s = pf.conclusion
    _check_index(s, i)
    comp = s.crown[i]
    target = RootedHypersequent(
        s.ante + comp.ante, s.succ + comp.succ, s.crown[:i] + s.crown[i + 1:]
    )
    rule = pf.rule
    if rule in INITIAL_RULES:
        return leaf(target)
    kids = aligned_premises(pf)
    if rule is Rule.LDia or rule is Rule.RBox:
        child = kids[0]
        last = len(child.conclusion.crown) - 1
        return infer(target, pf.instance, [merge_crown(child, i, last)])
    if rule is Rule.Exch:
        k = pf.instance.crown_index
        child = kids[0]
        if k == i:
            return relabel(merge_root(child, i), target)
        return infer(
            target,
            RuleInstance(Rule.Exch, crown_index=index_after_removal(k, i)),
            [merge_crown(child, k, i)],
        )
    return infer(target, pf.instance, [merge_root(k, i) for k in kids])


def crown_weaken(pf: Proof, i: int, ante: Iterable[Formula] = (), succ: Iterable[Formula] = ()) -> Proof:
    """W^c: atoms added to component i (height-preserving)."""
    _check_index(pf.conclusion, i)
    extra = CrownComponent(ante, succ)
    widened = external_weaken(pf, extra)
    return merge_crown(widened, i, len(widened.conclusion.crown) - 1)


# ------------------------------------------------------------------- constants

def delete_constant(pf: Proof, side: str, c: Formula) -> Proof:
    """Remove top from the antecedent or bot from the succedent (height-preserving).

    Such a constant is never principal and blocks every jump, so it can be
    dropped from each sequent above.
    """
    tick()
    if not ((side == "L" and c == TOP) or (side == "R" and c == BOT)):
        raise TransformError("only top on the left or bot on the right can be deleted")
    target = remove_items(pf.conclusion, [(side, c)])
    if pf.rule in INITIAL_RULES:
        return leaf(target)
    return infer(target, pf.instance, [delete_constant(k, side, c) for k in aligned_premises(pf)])


def thread_formula(pf: Proof, side: str, f: Formula) -> Proof:
    """Add f to the root of every sequent in pf.

    Valid when f may sit passively under every rule of pf: modal formulas
    always can; top on the left and bot on the right cannot pass a jump.
    """
    tick()
    target = add_items(pf.conclusion, [(side, f)])
    if pf.rule in INITIAL_RULES:
        return leaf(target)
    if pf.rule in (Rule.LDia, Rule.RBox, Rule.Exch) and not is_modal(f):
        raise TransformError(
            f"cannot weaken by {render_formula(f)} on the {'left' if side == 'L' else 'right'}: "
            f"it would block the {pf.rule} step above"
        )
    return infer(target, pf.instance, [thread_formula(k, side, f) for k in aligned_premises(pf)])


# ------------------------------------------------------------------- weakening

def weaken_formula(pf: Proof, side: str, f: Formula) -> Proof:
    """LW/RW: f added to one side of the root.

    Height-preserving for atoms and modal formulas; compound formulas are
    decomposed and rebuilt below copies of pf weakened by their literals.
    """
    s = pf.conclusion
    target = add_items(s, [(side, f)])
    if is_atom(f):
        comp = CrownComponent([f], []) if side == "L" else CrownComponent([], [f])
        widened = external_weaken(pf, comp)
        return relabel(merge_root(widened, len(widened.conclusion.crown) - 1), target)
    if is_modal(f):
        return thread_formula(pf, side, f)
    if type(f) is Bottom or type(f) is Top:
        if (side == "L") == (type(f) is Bottom):
            return leaf(target)
        return thread_formula(pf, side, f)
    from ..qnf import decompose

    from .normal import nf_assemble

    proofs = []
    for top in decompose(f, side):
        closed = add_items(s, top)
        if initial_instance(closed) is not None and any(
            (sd == "L" and g == BOT) or (sd == "R" and g == TOP) for sd, g in top
        ):
            proofs.append(leaf(closed))
            continue
        out = pf
        for sd, g in top:
            out = weaken_formula(out, sd, g)
        proofs.append(out)
    return relabel(nf_assemble(((side, f),), s, iter(proofs)), target)


def weaken_to(pf: Proof, target: RootedHypersequent) -> Proof:
    """Weaken pf until it proves target, which must contain its conclusion."""
    s = pf.conclusion
    try:
        extra_ante = list((target.ante - s.ante).items)
        extra_succ = list((target.succ - s.succ).items)
    except KeyError:
        raise TransformError(f"{target} does not contain {s}") from None
    remaining = list(target.crown)
    for c in s.crown:
        if c not in remaining:
            raise TransformError(f"{target} does not contain the crown of {s}")
        remaining.remove(c)
    out = pf
    for c in remaining:
        out = external_weaken(out, c)
    # modal and atomic formulas first: they thread through everything cheaply
    for f in sorted(extra_ante, key=lambda g: not (is_atom(g) or is_modal(g))):
        out = weaken_formula(out, "L", f)
    for f in sorted(extra_succ, key=lambda g: not (is_atom(g) or is_modal(g))):
        out = weaken_formula(out, "R", f)
    return relabel(out, target)


# ---------------------------------------------------------- atomic contraction

def contract_atom(pf: Proof, where: tuple) -> Proof:
    """Remove one duplicate atom (height-preserving).

    where is ("root", side, p) or ("crown", i, side, p).
    """
    tick()
    s = pf.conclusion
    if where[0] == "root":
        _, side, p = where
        have = s.ante if side == "L" else s.succ
        if have.count(p) < 2:
            raise TransformError(f"no duplicate {render_formula(p)} to contract in {s}")
        target = remove_items(s, [(side, p)])
    else:
        _, i, side, p = where
        _check_index(s, i)
        comp = s.crown[i]
        have = comp.ante if side == "L" else comp.succ
        if have.count(p) < 2:
            raise TransformError(f"no duplicate {render_formula(p)} in crown component {i} of {s}")
        new = CrownComponent(comp.ante.remove(p), comp.succ) if side == "L" else \
            CrownComponent(comp.ante, comp.succ.remove(p))
        target = s.replace(crown=s.crown[:i] + (new,) + s.crown[i + 1:])
    rule = pf.rule
    if rule in INITIAL_RULES:
        return leaf(target)
    kids = aligned_premises(pf)
    if where[0] == "root" and (rule is Rule.LDia or rule is Rule.RBox):
        last = len(kids[0].conclusion.crown) - 1
        child_where = ("crown", last, side, p)
    elif rule is Rule.Exch:
        k = pf.instance.crown_index
        if where[0] == "root":
            child_where = ("crown", k, side, p)
        elif where[1] == k:
            child_where = ("root", side, p)
        else:
            child_where = where
    else:
        child_where = where
    return infer(target, pf.instance, [contract_atom(k, child_where) for k in kids])


def contract_external(pf: Proof, i: int, j: int) -> Proof:
    """EC: drop component j, a duplicate of component i (height-preserving)."""
    s = pf.conclusion
    _check_index(s, i, j)
    if i == j or s.crown[i] != s.crown[j]:
        raise TransformError("external contraction needs two equal components")
    dup = s.crown[j]
    out = merge_crown(pf, i, j)
    at = index_after_removal(i, j)
    for p in dup.ante:
        out = contract_atom(out, ("crown", at, "L", p))
    for p in dup.succ:
        out = contract_atom(out, ("crown", at, "R", p))
    target = s.replace(crown=s.crown[:j] + s.crown[j + 1:])
    return relabel(out, target)


# ------------------------------------------------------ propositional inversion

def invert_propositional(pf: Proof, inst: RuleInstance) -> list[Proof]:
    """Proofs of each premise of inst applied to pf's conclusion (height-preserving)."""
    tick()
    targets = apply_backward(pf.conclusion, inst)
    mine = pf.instance
    if mine.rule is inst.rule and mine.principal == inst.principal:
        return [relabel(k, t) for k, t in zip(aligned_premises(pf), targets)]
    if mine.rule in INITIAL_RULES:
        return [leaf(t) for t in targets]
    if mine.rule in (Rule.LDia, Rule.RBox, Rule.Exch):
        raise TransformError("a jump cannot sit below a compound root formula")
    per_child = [invert_propositional(k, inst) for k in aligned_premises(pf)]
    return [
        infer(t, mine, [results[n] for results in per_child]) for n, t in enumerate(targets)
    ]


def rule_for(side: str, f: Formula) -> Rule:
    table = LEFT_RULES if side == "L" else RIGHT_RULES
    try:
        return table[type(f)]
    except KeyError:
        raise TransformError(f"no {side} rule for {render_formula(f)}") from None
