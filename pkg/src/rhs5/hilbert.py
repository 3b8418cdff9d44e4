"""The Hilbert system for S5 and its translation into the rooted hypersequent calculus.

Axioms are all propositional tautologies (checked by truth table over
atoms and modal subformulas) and the schemas Dual, K, T, 4, 5 and B; the
rules are modus ponens and necessitation, the latter only on steps that
depend on no assumption.

Text format, one step per line after an optional assumption header::

    assumptions: p, p -> q
    1: p ; Assumption
    2: p -> q ; Assumption
    3: q ; MP(1,2)

``MP(i,j)`` needs step j to be ``step i -> current``.  Indices start at 1.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .calculus import Proof, Rule, RuleInstance, initial_instance
from .formula import (
    BOT,
    TOP,
    Atom,
    Box,
    Dia,
    Formula,
    FormulaSyntaxError,
    Iff,
    And,
    Imp,
    Neg,
    Or,
    is_atom,
    is_constant,
    is_modal,
    iter_nodes,
    parse_formula,
    render_formula,
)
from .hypersequent import EMPTY_COMPONENT, CrownComponent, FMultiset, RootedHypersequent
from .qnf import decompose, skeleton_tautology
from .search import Provable, prove
from .transform import core, cut, normal
from .transform.core import TransformError, infer, leaf, with_budget

AXIOM_KINDS = ("AxDual", "AxK", "AxT", "Ax4", "Ax5", "AxB")
KINDS = ("Assumption", "Taut") + AXIOM_KINDS + ("MP", "Nec")

# placeholders for the schema letters A and B; only ever used inside patterns
_A, _B = Atom("schema_a"), Atom("schema_b")
_METAVARS = {_A, _B}

SCHEMAS: dict[str, tuple[Formula, ...]] = {
    # Dual is accepted as the biconditional or either of its directions
    "AxDual": (
        Iff(Box(_A), Neg(Dia(Neg(_A)))),
        Imp(Box(_A), Neg(Dia(Neg(_A)))),
        Imp(Neg(Dia(Neg(_A))), Box(_A)),
    ),
    "AxK": (Imp(Box(Imp(_A, _B)), Imp(Box(_A), Box(_B))),),
    "AxT": (Imp(Box(_A), _A),),
    "Ax4": (Imp(Box(_A), Box(Box(_A))),),
    "Ax5": (Imp(Dia(_A), Box(Dia(_A))),),
    "AxB": (Imp(_A, Box(Dia(_A))),),
}


class HilbertSyntaxError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Justification:
    kind: str
    refs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown justification {self.kind!r}")
        want = {"MP": 2, "Nec": 1}.get(self.kind, 0)
        if len(self.refs) != want:
            raise ValueError(f"{self.kind} takes {want} step references")

    def __str__(self) -> str:
        if self.refs:
            return f"{self.kind}({','.join(map(str, self.refs))})"
        return self.kind


@dataclass(frozen=True)
class HilbertStep:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class HilbertProof:
    assumptions: FMultiset
    steps: tuple[HilbertStep, ...]

    @classmethod
    def of(cls, assumptions, steps) -> HilbertProof:
        return cls(
            FMultiset(assumptions),
            tuple(HilbertStep(f, j if isinstance(j, Justification) else Justification(*j)) for f, j in steps),
        )

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def end_sequent(self) -> RootedHypersequent:
        return RootedHypersequent(self.assumptions, (self.conclusion,))


@dataclass(frozen=True)
class HilbertCheck:
    ok: bool
    step: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else f"step {self.step}: {self.reason}"


# ------------------------------------------------------------------ checking

def match_schema(pattern: Formula, f: Formula, env: Optional[dict] = None) -> Optional[dict]:
    """A substitution for the metavariables A, B making pattern equal to f, if any."""
    env = {} if env is None else env
    if pattern in _METAVARS:
        bound = env.get(pattern)
        if bound is None:
            env[pattern] = f
            return env
        return env if bound == f else None
    if type(pattern) is not type(f):
        return None
    if is_atom(pattern):
        return env if pattern == f else None
    for p, g in zip(pattern.children, f.children):
        if match_schema(p, g, env) is None:
            return None
    return env


def axiom_kind(f: Formula) -> Optional[str]:
    for kind, patterns in SCHEMAS.items():
        if any(match_schema(p, f) is not None for p in patterns):
            return kind
    return None


def _theorem_steps(hp: HilbertProof) -> list[bool]:
    """For each step, whether it depends on no assumption."""
    out: list[bool] = []
    for step in hp.steps:
        j = step.justification
        if j.kind == "Assumption":
            out.append(False)
        elif j.kind == "MP":
            out.append(out[j.refs[0] - 1] and out[j.refs[1] - 1])
        else:
            out.append(True)
    return out


def check_hilbert(hp: HilbertProof) -> HilbertCheck:
    """Check every step; report the first one that is not justified."""
    if not hp.steps:
        return HilbertCheck(False, None, "empty derivation")
    theorem: list[bool] = []
    for n, step in enumerate(hp.steps, start=1):
        f, j = step.formula, step.justification
        bad = lambda reason: HilbertCheck(False, n, reason)
        for r in j.refs:
            if not 1 <= r < n:
                return bad(f"reference {r} does not point to an earlier step")
        if j.kind == "Assumption":
            if f not in hp.assumptions:
                return bad(f"{render_formula(f)} is not an assumption")
            theorem.append(False)
        elif j.kind == "Taut":
            if not skeleton_tautology(f):
                return bad(f"{render_formula(f)} is not a propositional tautology")
            theorem.append(True)
        elif j.kind in SCHEMAS:
            if not any(match_schema(p, f) is not None for p in SCHEMAS[j.kind]):
                return bad(f"{render_formula(f)} is not an instance of {j.kind}")
            theorem.append(True)
        elif j.kind == "MP":
            i, k = j.refs
            minor, major = hp.steps[i - 1].formula, hp.steps[k - 1].formula
            if major != Imp(minor, f):
                return bad(f"step {k} is not step {i} -> {render_formula(f)}")
            theorem.append(theorem[i - 1] and theorem[k - 1])
        else:  # Nec
            (i,) = j.refs
            if f != Box(hp.steps[i - 1].formula):
                return bad(f"{render_formula(f)} is not [] of step {i}")
            if not theorem[i - 1]:
                return bad("necessitation on non-theorem")
            theorem.append(True)
    return HilbertCheck(True)


# ----------------------------------------------------------------- text form

_LINE = re.compile(r"^\s*(\d+)\s*:\s*(.*?)\s*;\s*([A-Za-z0-9]+)\s*(?:\(\s*([\d\s,]*)\))?\s*$")


def parse_hilbert(text: str) -> HilbertProof:
    assumptions: list[Formula] = []
    steps: list[HilbertStep] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("assumptions:"):
            body = line.split(":", 1)[1].strip()
            try:
                assumptions.extend(parse_formula(part) for part in _split_top(body))
            except FormulaSyntaxError as e:
                raise HilbertSyntaxError(lineno, str(e)) from None
            continue
        m = _LINE.match(line)
        if not m:
            raise HilbertSyntaxError(lineno, "expected '<idx>: <formula> ; <justification>'")
        idx, ftext, kind, refs = m.groups()
        if int(idx) != len(steps) + 1:
            raise HilbertSyntaxError(lineno, f"step number {idx}, expected {len(steps) + 1}")
        try:
            f = parse_formula(ftext)
        except FormulaSyntaxError as e:
            raise HilbertSyntaxError(lineno, str(e)) from None
        nums = tuple(int(x) for x in refs.replace(" ", "").split(",") if x) if refs else ()
        try:
            steps.append(HilbertStep(f, Justification(kind, nums)))
        except ValueError as e:
            raise HilbertSyntaxError(lineno, str(e)) from None
    if not steps:
        raise HilbertSyntaxError(0, "no steps")
    return HilbertProof(FMultiset(assumptions), tuple(steps))


def _split_top(text: str) -> list[str]:
    """Split at commas outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        parts.append("".join(cur))
    return [p for p in parts if p.strip()]


def render_hilbert(hp: HilbertProof) -> str:
    lines = ["assumptions: " + ", ".join(render_formula(f) for f in hp.assumptions)]
    for n, step in enumerate(hp.steps, start=1):
        lines.append(f"{n}: {render_formula(step.formula)} ; {step.justification}")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------- translation

def _seq(ante=(), succ=(), crown=()) -> RootedHypersequent:
    return RootedHypersequent(ante, succ, crown)


def identity(a: Formula) -> Proof:
    """A proof of A => A, by induction on A."""
    s = _seq([a], [a])
    t = type(a)
    if is_atom(a) or is_constant(a):
        return leaf(s)
    if t is Neg:
        # ~A => ~A  from  A, ~A =>  from  A => A
        inner = _seq([a.sub, a], [])
        return infer(s, RuleInstance(Rule.RNeg, a), [infer(inner, RuleInstance(Rule.LNeg, a), [identity(a.sub)])])
    if t is Box:
        # []A => []A  from  []A => A || =>  from  A, []A => A || =>
        body = core.external_weaken(core.thread_formula(identity(a.sub), "L", a), EMPTY_COMPONENT)
        upper = infer(_seq([a], [a.sub], [EMPTY_COMPONENT]), RuleInstance(Rule.LBox, a), [body])
        return infer(s, RuleInstance(Rule.RBox, a), [upper])
    if t is Dia:
        body = core.external_weaken(core.thread_formula(identity(a.sub), "R", a), EMPTY_COMPONENT)
        upper = infer(_seq([a.sub], [a], [EMPTY_COMPONENT]), RuleInstance(Rule.RDia, a), [body])
        return infer(s, RuleInstance(Rule.LDia, a), [upper])
    left, right = identity(a.left), identity(a.right)
    if t is And:
        both = _seq([a.left, a.right], [a])
        upper = infer(both, RuleInstance(Rule.RAnd, a), [
            core.weaken_formula(left, "L", a.right), core.weaken_formula(right, "L", a.left),
        ])
        return infer(s, RuleInstance(Rule.LAnd, a), [upper])
    if t is Or:
        both = _seq([a], [a.left, a.right])
        upper = infer(both, RuleInstance(Rule.LOr, a), [
            core.weaken_formula(left, "R", a.right), core.weaken_formula(right, "R", a.left),
        ])
        return infer(s, RuleInstance(Rule.ROr, a), [upper])
    # A -> B => A -> B  from  A, A -> B => B  from  A => B, A  and  B, A => B
    both = _seq([a.left, a], [a.right])
    upper = infer(both, RuleInstance(Rule.LImp, a), [
        core.weaken_formula(left, "R", a.right), core.weaken_formula(right, "L", a.left),
    ])
    return infer(s, RuleInstance(Rule.RImp, a), [upper])


def _weakened_identity(a: Formula, target: RootedHypersequent) -> Proof:
    return core.weaken_to(identity(a), target)


def _imp(a: Formula, b: Formula, premise: Proof) -> Proof:
    """=> A -> B from A => B."""
    return infer(_seq([], [Imp(a, b)]), RuleInstance(Rule.RImp, Imp(a, b)), [premise])


def axiom_proof(kind: str, f: Formula) -> Proof:
    """A cut-free proof of => f for an instance f of the named schema.

    The hand-built derivation weakens identity proofs into context.  When the
    instance carries top or bot into a place where it blocks a jump, that
    weakening is impossible and proof search on => f is tried instead; some
    such instances have no proof at all.
    """
    if kind == "AxDual" and type(f) is And:
        return infer(_seq([], [f]), RuleInstance(Rule.RAnd, f), [axiom_proof(kind, f.left), axiom_proof(kind, f.right)])
    env = next((e for p in SCHEMAS[kind] if (e := match_schema(p, f)) is not None), None)
    if env is None:
        raise TransformError(f"{render_formula(f)} is not an instance of {kind}")
    try:
        return _axiom_template(kind, f, env)
    except TransformError:
        if not any(is_constant(g) for g in iter_nodes(f)):
            raise
    goal = _seq([], [f])
    verdict = prove(goal)
    if isinstance(verdict, Provable) and verdict.proof.conclusion == goal:
        return verdict.proof
    raise TransformError(f"no cut-free proof of => {render_formula(f)}: its constants block every jump")


def _axiom_template(kind: str, f: Formula, env: dict) -> Proof:
    a, b = env.get(_A), env.get(_B)
    E = EMPTY_COMPONENT
    if kind == "AxT":
        # []A => A  from  A, []A => A
        upper = core.thread_formula(identity(a), "L", Box(a))
        return _imp(Box(a), a, infer(_seq([Box(a)], [a]), RuleInstance(Rule.LBox, Box(a)), [upper]))
    if kind == "Ax4":
        # []A => [][]A  from  []A => []A || =>
        upper = core.external_weaken(identity(Box(a)), E)
        return _imp(Box(a), Box(Box(a)), infer(_seq([Box(a)], [Box(Box(a))]), RuleInstance(Rule.RBox, Box(Box(a))), [upper]))
    if kind == "Ax5":
        upper = core.external_weaken(identity(Dia(a)), E)
        return _imp(Dia(a), Box(Dia(a)), infer(_seq([Dia(a)], [Box(Dia(a))]), RuleInstance(Rule.RBox, Box(Dia(a))), [upper]))
    if kind == "AxK":
        ab = Imp(a, b)
        # [](A->B), []A => []B  from  [](A->B), []A => B || =>  by LBox twice, then LImp
        ctx = [Box(ab), Box(a)]
        left = core.weaken_to(identity(a), _seq([a] + ctx, [b, a], [E]))
        right = core.weaken_to(identity(b), _seq([b, a] + ctx, [b], [E]))
        limp = infer(_seq([ab, a] + ctx, [b], [E]), RuleInstance(Rule.LImp, ab), [left, right])
        lbox_a = infer(_seq([ab] + ctx, [b], [E]), RuleInstance(Rule.LBox, Box(a)), [limp])
        lbox_ab = infer(_seq(ctx, [b], [E]), RuleInstance(Rule.LBox, Box(ab)), [lbox_a])
        rbox = infer(_seq(ctx, [Box(b)]), RuleInstance(Rule.RBox, Box(b)), [lbox_ab])
        inner = infer(_seq([Box(ab)], [Imp(Box(a), Box(b))]), RuleInstance(Rule.RImp, Imp(Box(a), Box(b))), [rbox])
        return _imp(Box(ab), Imp(Box(a), Box(b)), inner)
    if kind == "AxDual":
        nna = Neg(Dia(Neg(a)))
        if f == Imp(Box(a), nna):
            # []A => ~<>~A  from  <>~A, []A =>  from  ~A, []A => || =>  from  []A => A || =>
            base = core.external_weaken(core.thread_formula(identity(a), "L", Box(a)), E)
            lbox = infer(_seq([Box(a)], [a], [E]), RuleInstance(Rule.LBox, Box(a)), [base])
            lneg = infer(_seq([Neg(a), Box(a)], [], [E]), RuleInstance(Rule.LNeg, Neg(a)), [lbox])
            ldia = infer(_seq([Dia(Neg(a)), Box(a)], []), RuleInstance(Rule.LDia, Dia(Neg(a))), [lneg])
            rneg = infer(_seq([Box(a)], [nna]), RuleInstance(Rule.RNeg, nna), [ldia])
            return _imp(Box(a), nna, rneg)
        # ~<>~A => []A  from  => []A, <>~A  from  => <>~A, A || =>  from  => <>~A, A, ~A  from  A => <>~A, A
        base = core.external_weaken(core.thread_formula(identity(a), "R", Dia(Neg(a))), E)
        rneg = infer(_seq([], [Dia(Neg(a)), a, Neg(a)], [E]), RuleInstance(Rule.RNeg, Neg(a)), [base])
        rdia = infer(_seq([], [Dia(Neg(a)), a], [E]), RuleInstance(Rule.RDia, Dia(Neg(a))), [rneg])
        rbox = infer(_seq([], [Box(a), Dia(Neg(a))]), RuleInstance(Rule.RBox, Box(a)), [rdia])
        lneg = infer(_seq([nna], [Box(a)]), RuleInstance(Rule.LNeg, nna), [rbox])
        return _imp(nna, Box(a), lneg)
    # AxB: A => []<>A, built per phrase of A so that the root is atomic or modal at the jump
    goal = Box(Dia(a))
    proofs = []
    pieces = normal.nf_split(identity(a), (("L", a),))
    for top, piece in zip(decompose(a, "L"), pieces):
        conclusion = core.add_items(_seq([], [goal]), top)
        if ("L", BOT) in top:
            proofs.append(leaf(conclusion))
            continue
        dropped = [(sd, g) for sd, g in top if (sd, g) in (("L", TOP), ("R", BOT))]
        for sd, g in dropped:
            piece = core.delete_constant(piece, sd, g)
        # piece proves the phrase => A; add <>A on the right and an empty component
        widened = core.external_weaken(core.thread_formula(piece, "R", Dia(a)), E)
        s0 = widened.conclusion
        rdia = infer(s0.remove(succ=[a]), RuleInstance(Rule.RDia, Dia(a)), [widened])
        m, p, q, n = rdia.conclusion.root_partition()
        swapped = RootedHypersequent(m, n, (CrownComponent(p, q),))
        exch = infer(swapped, RuleInstance(Rule.Exch, crown_index=0), [rdia])
        rbox_conc = RootedHypersequent(m + p, (n - FMultiset([Dia(a)])) + q + FMultiset([goal]), ())
        rbox = infer(rbox_conc, RuleInstance(Rule.RBox, goal), [exch])
        for sd, g in dropped:
            rbox = core.thread_formula(rbox, sd, g)
        proofs.append(rbox)
    assembled = normal.nf_assemble((("L", a),), _seq([], [goal]), iter(proofs))
    return _imp(a, goal, assembled)


def tautology_proof(f: Formula) -> Proof:
    """A cut-free proof of => f for a propositional tautology f (over atoms and modal formulas)."""
    if not skeleton_tautology(f):
        raise TransformError(f"{render_formula(f)} is not a propositional tautology")
    proofs = []
    for top in decompose(f, "R"):
        conclusion = core.add_items(_seq(), top)
        if initial_instance(conclusion) is not None:
            proofs.append(leaf(conclusion))
            continue
        shared = next(
            (g for sd, g in top if sd == "L" and is_modal(g) and ("R", g) in top), None
        )
        if shared is None:
            raise TransformError(f"top-sequent {conclusion} of a tautology is not closed")
        proofs.append(_weakened_identity(shared, conclusion))
    return normal.nf_assemble((("R", f),), _seq(), iter(proofs))


def _modus_ponens(minor: Proof, major: Proof, a: Formula, b: Formula, ctx: FMultiset) -> Proof:
    """ctx => B from ctx => A and ctx => A -> B: two cuts, then contraction."""
    ab = Imp(a, b)
    # A, A -> B => B  from  A => B, A  and  B, A => B
    left = core.weaken_to(identity(a), _seq([a], [b, a]))
    right = core.weaken_to(identity(b), _seq([b, a], [b]))
    aux = infer(_seq([a, ab], [b]), RuleInstance(Rule.LImp, ab), [left, right])
    first = cut.eliminate_cut(major, aux, ab)  # ctx, A => B
    second = cut.eliminate_cut(minor, first, a)  # ctx, ctx => B
    return normal.contract_to(second, _seq(ctx, [b]))


def translate(hp: HilbertProof, steps: int = 5_000_000) -> Proof:
    """A cut-free proof of assumptions => conclusion from a checked Hilbert derivation."""
    verdict = check_hilbert(hp)
    if not verdict:
        raise ValueError(f"invalid Hilbert derivation: {verdict}")
    gamma = hp.assumptions
    theorem = _theorem_steps(hp)
    proofs: list[Proof] = []
    with with_budget(steps):
        for n, step in enumerate(hp.steps):
            f, j = step.formula, step.justification
            if j.kind == "Assumption":
                pf = _weakened_identity(f, _seq(gamma, [f]))
            elif j.kind == "Taut":
                pf = tautology_proof(f)
            elif j.kind in SCHEMAS:
                pf = axiom_proof(j.kind, f)
            elif j.kind == "MP":
                i, k = j.refs[0] - 1, j.refs[1] - 1
                ctx = FMultiset() if theorem[n] else gamma
                minor = core.weaken_to(proofs[i], _seq(ctx, [hp.steps[i].formula]))
                major = core.weaken_to(proofs[k], _seq(ctx, [hp.steps[k].formula]))
                pf = _modus_ponens(minor, major, hp.steps[i].formula, f, ctx)
            else:
                (i,) = j.refs
                body = core.external_weaken(proofs[i - 1], EMPTY_COMPONENT)
                pf = infer(_seq([], [f]), RuleInstance(Rule.RBox, f), [body])
            proofs.append(pf)
        return core.weaken_to(proofs[-1], hp.end_sequent())


__all__ = [
    "AXIOM_KINDS",
    "HilbertCheck",
    "HilbertProof",
    "HilbertStep",
    "HilbertSyntaxError",
    "Justification",
    "SCHEMAS",
    "axiom_kind",
    "axiom_proof",
    "check_hilbert",
    "identity",
    "match_schema",
    "parse_hilbert",
    "render_hilbert",
    "tautology_proof",
    "translate",
]
