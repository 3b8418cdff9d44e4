"""Rules of the rooted hypersequent calculus, proof trees and the proof checker.

Rules are read bottom-up: ``apply_backward`` maps a conclusion and a rule
instance to the list of premises the schema demands.  The checker is built
on ``apply_backward`` alone; proof search computes its premises with its own
code so that the two can catch each other's mistakes.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

from .formula import (
    BOT,
    TOP,
    And,
    Atom,
    Box,
    Dia,
    Formula,
    Imp,
    Neg,
    Or,
    render_formula,
    subformulas,
)
from .hypersequent import CrownComponent, RootedHypersequent


class Rule(enum.Enum):
    Ax = "Ax"
    LBot = "LBot"
    RTop = "RTop"
    LNeg = "LNeg"
    RNeg = "RNeg"
    LOr = "LOr"
    ROr = "ROr"
    LAnd = "LAnd"
    RAnd = "RAnd"
    LImp = "LImp"
    RImp = "RImp"
    LDia = "LDia"
    RDia = "RDia"
    LBox = "LBox"
    RBox = "RBox"
    Exch = "Exch"

    def __str__(self) -> str:
        return self.value

    @property
    def side(self) -> Optional[str]:
        """Side of the root the principal formula lives on ("L" or "R")."""
        if self in (Rule.Ax, Rule.Exch):
            return None
        return self.value[0]


INITIAL_RULES = frozenset({Rule.Ax, Rule.LBot, Rule.RTop})
JUMP_RULES = frozenset({Rule.LDia, Rule.RBox, Rule.Exch})
PROPOSITIONAL_RULES = frozenset({
    Rule.LNeg, Rule.RNeg, Rule.LOr, Rule.ROr, Rule.LAnd, Rule.RAnd, Rule.LImp, Rule.RImp,
})

# connective each non-initial logical rule decomposes, by side
LEFT_RULES = {Neg: Rule.LNeg, And: Rule.LAnd, Or: Rule.LOr, Imp: Rule.LImp, Box: Rule.LBox, Dia: Rule.LDia}
RIGHT_RULES = {Neg: Rule.RNeg, And: Rule.RAnd, Or: Rule.ROr, Imp: Rule.RImp, Box: Rule.RBox, Dia: Rule.RDia}
_CONNECTIVE = {rule: conn for conn, rule in LEFT_RULES.items()}
_CONNECTIVE.update({rule: conn for conn, rule in RIGHT_RULES.items()})


class RuleError(ValueError):
    """A rule instance does not match the sequent it is applied to."""


@dataclass(frozen=True)
class RuleInstance:
    rule: Rule
    principal: Optional[Formula] = None
    crown_index: Optional[int] = None

    @property
    def side(self) -> Optional[str]:
        return self.rule.side

    def __str__(self) -> str:
        if self.rule is Rule.Exch:
            return f"Exch({self.crown_index})"
        if self.principal is None:
            return str(self.rule)
        return f"{self.rule}({render_formula(self.principal)})"


class Proof:
    """A derivation tree; height 0 at initial sequents."""

    __slots__ = ("conclusion", "instance", "premises", "height", "size")

    def __init__(self, conclusion: RootedHypersequent, instance: RuleInstance,
                 premises: tuple[Proof, ...] | list[Proof] = ()) -> None:
        self.conclusion = conclusion
        self.instance = instance
        self.premises = tuple(premises)
        self.height = 1 + max(p.height for p in self.premises) if self.premises else 0
        self.size = 1 + sum(p.size for p in self.premises)

    @property
    def rule(self) -> Rule:
        return self.instance.rule

    def __repr__(self) -> str:
        return f"Proof({self.conclusion!s} by {self.instance}, height {self.height})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Proof):
            return NotImplemented
        return (
            self.instance == other.instance
            and self.conclusion.identical(other.conclusion)
            and self.premises == other.premises
        )

    def __hash__(self) -> int:
        return hash((self.conclusion, self.instance, self.size))


def proof_height(pf: Proof) -> int:
    return pf.height


def iter_proof(pf: Proof) -> Iterator[tuple[tuple[int, ...], Proof]]:
    """Pre-order traversal yielding (path from the root, node)."""
    stack = [((), pf)]
    while stack:
        path, node = stack.pop()
        yield path, node
        for i in range(len(node.premises) - 1, -1, -1):
            stack.append((path + (i,), node.premises[i]))


def rules_used(pf: Proof) -> set[Rule]:
    return {node.rule for _, node in iter_proof(pf)}


# ------------------------------------------------------------ initial sequents

def is_initial(s: RootedHypersequent) -> Optional[Rule]:
    """Ax, LBot or RTop when the root closes; the crown never closes a sequent."""
    succ = s.succ.items
    for f in s.ante.items:
        if type(f) is Atom and f in succ:
            return Rule.Ax
    if BOT in s.ante.items:
        return Rule.LBot
    if TOP in succ:
        return Rule.RTop
    return None


def initial_instance(s: RootedHypersequent) -> Optional[RuleInstance]:
    """The canonical closing instance of an initial sequent, if any."""
    succ = s.succ.items
    for f in s.ante.items:
        if type(f) is Atom and f in succ:
            return RuleInstance(Rule.Ax, f)
    if BOT in s.ante.items:
        return RuleInstance(Rule.LBot, BOT)
    if TOP in succ:
        return RuleInstance(Rule.RTop, TOP)
    return None


# ------------------------------------------------------------------- schemas

def backward_instances(s: RootedHypersequent) -> list[RuleInstance]:
    """Every non-initial rule instance whose conclusion matches s.

    One instance per distinct principal formula and side, and for Exch one per
    crown index.  The jump rules (LDia, RBox, Exch) are only offered when
    every root formula is an atom or a modal formula.
    """
    jumps = s.root_is_modal_atomic()
    out = []
    for f in s.ante.distinct():
        rule = LEFT_RULES.get(type(f))
        if rule is None or (rule is Rule.LDia and not jumps):
            continue
        out.append(RuleInstance(rule, f))
    for f in s.succ.distinct():
        rule = RIGHT_RULES.get(type(f))
        if rule is None or (rule is Rule.RBox and not jumps):
            continue
        out.append(RuleInstance(rule, f))
    if jumps:
        out.extend(RuleInstance(Rule.Exch, crown_index=k) for k in range(len(s.crown)))
    return out


def _require_jump(s: RootedHypersequent, rule: Rule) -> None:
    if not s.root_is_modal_atomic():
        offenders = [f for f in s.ante.items + s.succ.items if not isinstance(f, (Atom, Box, Dia))]
        raise RuleError(
            f"{rule} needs a root of atoms and modal formulas; found {render_formula(offenders[0])}"
        )


def apply_backward(s: RootedHypersequent, r: RuleInstance) -> list[RootedHypersequent]:
    """The premises of rule instance r with conclusion s, exactly as in the schema."""
    rule = r.rule
    a = r.principal
    if rule in INITIAL_RULES:
        if rule is Rule.Ax:
            ok = (a is None and is_initial(s) is Rule.Ax) or (
                isinstance(a, Atom) and a in s.ante and a in s.succ
            )
        elif rule is Rule.LBot:
            ok = BOT in s.ante
        else:
            ok = TOP in s.succ
        if not ok:
            raise RuleError("not an initial sequent")
        return []

    if rule is Rule.Exch:
        k = r.crown_index
        if k is None or not 0 <= k < len(s.crown):
            raise RuleError(f"Exch crown index {k} out of range")
        _require_jump(s, rule)
        m, p, q, n = s.root_partition()
        comp = s.crown[k]
        crown = s.crown[:k] + (CrownComponent(p, q),) + s.crown[k + 1:]
        return [RootedHypersequent(m + comp.ante, n + comp.succ, crown)]

    if a is None or type(a) is not _CONNECTIVE[rule]:
        raise RuleError(f"{rule} needs a principal formula of the matching shape")
    side = s.ante if rule.side == "L" else s.succ
    if a not in side:
        raise RuleError(f"principal formula {render_formula(a)} not in the {'antecedent' if rule.side == 'L' else 'succedent'}")

    if rule is Rule.LDia or rule is Rule.RBox:
        _require_jump(s, rule)
        rest = s.remove(ante=[a]) if rule is Rule.LDia else s.remove(succ=[a])
        m, p, q, n = rest.root_partition()
        crown = s.crown + (CrownComponent(p, q),)
        if rule is Rule.LDia:
            return [RootedHypersequent(m.add(a.sub), n, crown)]
        return [RootedHypersequent(m, n.add(a.sub), crown)]
    if rule is Rule.LBox:
        return [s.add(ante=[a.sub])]
    if rule is Rule.RDia:
        return [s.add(succ=[a.sub])]

    if rule.side == "L":
        base = s.remove(ante=[a])
        if rule is Rule.LNeg:
            return [base.add(succ=[a.sub])]
        if rule is Rule.LAnd:
            return [base.add(ante=[a.left, a.right])]
        if rule is Rule.LOr:
            return [base.add(ante=[a.left]), base.add(ante=[a.right])]
        return [base.add(succ=[a.left]), base.add(ante=[a.right])]  # LImp
    base = s.remove(succ=[a])
    if rule is Rule.RNeg:
        return [base.add(ante=[a.sub])]
    if rule is Rule.ROr:
        return [base.add(succ=[a.left, a.right])]
    if rule is Rule.RAnd:
        return [base.add(succ=[a.left]), base.add(succ=[a.right])]
    return [base.add(ante=[a.left], succ=[a.right])]  # RImp


# ------------------------------------------------------------------- checker

@dataclass(frozen=True)
class CheckResult:
    """Outcome of check_proof; truthy when the proof is valid."""

    ok: bool
    path: tuple[int, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        where = "root" if not self.path else "root." + ".".join(map(str, self.path))
        return f"invalid at {where}: {self.reason}"


def check_proof(pf: Proof) -> CheckResult:
    """Check every inference locally; report the first bad node in pre-order."""
    for path, node in iter_proof(pf):
        inst = node.instance
        try:
            expected = apply_backward(node.conclusion, inst)
        except RuleError as e:
            return CheckResult(False, path, f"{e} ({inst})")
        if len(expected) != len(node.premises):
            return CheckResult(False, path, f"premise count mismatch for {inst.rule}")
        for want, child in zip(expected, node.premises):
            if want != child.conclusion:
                return CheckResult(False, path, f"premise mismatch for {inst.rule}")
    return CheckResult(True)


def proof_formulas(pf: Proof) -> set[Formula]:
    out: set[Formula] = set()
    for _, node in iter_proof(pf):
        out.update(node.conclusion.formulas())
    return out


def subformula_violations(pf: Proof) -> set[Formula]:
    """Formulas in the proof that are not subformulas of the end-sequent."""
    allowed: set[Formula] = set()
    for f in pf.conclusion.formulas():
        allowed |= subformulas(f)
    return proof_formulas(pf) - allowed


__all__ = [
    "Rule", "RuleInstance", "RuleError", "Proof", "CheckResult",
    "INITIAL_RULES", "JUMP_RULES", "PROPOSITIONAL_RULES",
    "is_initial", "initial_instance", "backward_instances", "apply_backward",
    "check_proof", "proof_height", "iter_proof", "rules_used",
    "proof_formulas", "subformula_violations",
]
