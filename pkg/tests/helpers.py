"""Shared builders for tests: hand transcriptions of the worked derivations and sequent generators."""
from __future__ import annotations

import random
from typing import Optional

from hypothesis import strategies as st

from rhs5.calculus import Proof, Rule, RuleInstance
from rhs5.formula import BOT, TOP, And, Atom, Box, Dia, Formula, Imp, Neg, Or, parse_formula
from rhs5.generate import random_formula
from rhs5.hypersequent import CrownComponent, RootedHypersequent, parse_sequent
from rhs5.search import Provable, prove

EXAMPLE_1 = "(r & p) -> (q -> []( <>(p & q) & <>r ))"
EXAMPLE_2 = "[]([]~p | p) -> [](~p | []p)"


def node(seq: str, rule: str, *premises: Proof, principal: Optional[str] = None,
         crown_index: Optional[int] = None) -> Proof:
    inst = RuleInstance(Rule(rule), parse_formula(principal) if principal else None, crown_index)
    return Proof(parse_sequent(seq), inst, tuple(premises))


def example_1_transcription() -> Proof:
    """The first worked derivation, with empty crown components written out."""
    pq = "<>(p & q)"
    left = node(
        "=> <>(p & q) || r, p, q =>", "Exch",
        node(
            "r, p, q => <>(p & q) || =>", "RDia",
            node(
                "r, p, q => <>(p & q), p & q || =>", "RAnd",
                node("p, q, r => <>(p & q), p || =>", "Ax", principal="p"),
                node("r, p, q => <>(p & q), q || =>", "Ax", principal="q"),
                principal="p & q",
            ),
            principal=pq,
        ),
        crown_index=0,
    )
    right = node(
        "=> <>r || r, p, q =>", "Exch",
        node(
            "r, p, q => <>r || =>", "RDia",
            node("r, p, q => <>r, r || =>", "Ax", principal="r"),
            principal="<>r",
        ),
        crown_index=0,
    )
    body = "<>(p & q) & <>r"
    return node(
        f"=> {EXAMPLE_1}", "RImp",
        node(
            f"r & p => q -> []({body})", "RImp",
            node(
                f"r & p, q => []({body})", "LAnd",
                node(
                    f"r, p, q => []({body})", "RBox",
                    node(f"=> {body} || r, p, q =>", "RAnd", left, right, principal=body),
                    principal=f"[]({body})",
                ),
                principal="r & p",
            ),
            principal=f"q -> []({body})",
        ),
        principal=EXAMPLE_1,
    )


def example_2_subproof(pad: str = "") -> Proof:
    """The part of the second worked derivation above '[]([]~p | p) => p || p =>'.

    pad is prepended to every crown (e.g. "=> | ") to embed it in the full proof.
    """
    g = "[]([]~p | p)"
    exch_branch = node(
        f"[]~p, {g} => p || {pad}p =>", "Exch",
        node(
            f"[]~p, {g}, p => || {pad}=> p", "LBox",
            node(
                f"~p, []~p, {g}, p => || {pad}=> p", "LNeg",
                node(f"[]~p, {g}, p => p || {pad}=> p", "Ax", principal="p"),
                principal="~p",
            ),
            principal="[]~p",
        ),
        crown_index=len(pad.split("|")) - 1 if pad else 0,
    )
    return node(
        f"{g} => p || {pad}p =>", "LBox",
        node(
            f"[]~p | p, {g} => p || {pad}p =>", "LOr",
            exch_branch,
            node(f"p, {g} => p || {pad}p =>", "Ax", principal="p"),
            principal="[]~p | p",
        ),
        principal=g,
    )


def example_2_transcription() -> Proof:
    g = "[]([]~p | p)"
    return node(
        f"=> {EXAMPLE_2}", "RImp",
        node(
            f"{g} => [](~p | []p)", "RBox",
            node(
                f"{g} => ~p | []p || =>", "ROr",
                node(
                    f"{g} => ~p, []p || =>", "RNeg",
                    node(
                        f"{g}, p => []p || =>", "RBox",
                        example_2_subproof("=> | "),
                        principal="[]p",
                    ),
                    principal="~p",
                ),
                principal="~p | []p",
            ),
            principal="[](~p | []p)",
        ),
        principal=EXAMPLE_2,
    )


# ------------------------------------------------------------------ generators

ATOMS = ("p", "q", "r")


def random_sequent(rng: random.Random, max_nodes: int = 5, constants: bool = False,
                   atoms=("p", "q")) -> RootedHypersequent:
    def f():
        return random_formula(rng, max_nodes, atoms, constants=constants)

    crown = [
        CrownComponent(
            [Atom(rng.choice(atoms)) for _ in range(rng.randint(0, 1))],
            [Atom(rng.choice(atoms)) for _ in range(rng.randint(0, 1))],
        )
        for _ in range(rng.randint(0, 2))
    ]
    return RootedHypersequent(
        [f() for _ in range(rng.randint(0, 2))], [f() for _ in range(rng.randint(0, 2))], crown
    )


def provable_corpus(seed: int, count: int, max_nodes: int = 5, atoms=("p", "q"),
                    want=None) -> list[Proof]:
    """Search proofs of `count` random provable constant-free sequents."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = random_sequent(rng, max_nodes, atoms=atoms)
        if want is not None and not want(s):
            continue
        v = prove(s)
        if isinstance(v, Provable) and v.proof.conclusion == s:
            out.append(v.proof)
    return out


def formulas(max_leaves: int = 8, atoms=("p", "q", "r"), constants: bool = True) -> st.SearchStrategy[Formula]:
    leaves = [st.sampled_from([Atom(a) for a in atoms])]
    if constants:
        leaves.append(st.sampled_from([BOT, TOP]))
    base = st.one_of(*leaves)

    def extend(children):
        return st.one_of(
            st.builds(Neg, children), st.builds(Box, children), st.builds(Dia, children),
            st.builds(And, children, children), st.builds(Or, children, children),
            st.builds(Imp, children, children),
        )

    return st.recursive(base, extend, max_leaves=max_leaves)


@st.composite
def sequents(draw, max_leaves: int = 4, constants: bool = False, atoms=("p", "q")):
    fs = formulas(max_leaves, atoms, constants)
    atom = st.sampled_from([Atom(a) for a in atoms])
    comp = st.builds(CrownComponent, st.lists(atom, max_size=1), st.lists(atom, max_size=1))
    return RootedHypersequent(
        draw(st.lists(fs, max_size=2)), draw(st.lists(fs, max_size=2)), draw(st.lists(comp, max_size=2))
    )
