import pytest
from hypothesis import given

from helpers import formulas
from rhs5.formula import BOT, TOP, Atom, Iff, Neg, parse_formula, subformulas
from rhs5.qnf import (
    QuasiClause,
    QuasiLiteral,
    is_literal_unit,
    qnf_equivalent,
    skeleton_tautology,
    to_cqnf,
    to_dqnf,
)
from rhs5.semantics import is_valid

p, q = Atom("p"), Atom("q")

ALREADY_CQNF = "(~[](a -> b) | p | <>c) & ~q & ([]<>a | ~<>(a & b) | ~r)"


def test_already_in_cqnf_is_unchanged():
    f = parse_formula(ALREADY_CQNF)
    n = to_cqnf(f)
    assert len(n.clauses) == 3
    assert n.formula() == f
    first = n.clauses[0]
    assert first.P == (p,) and first.Q == () and first.M == (parse_formula("<>c"),)
    assert first.N == (parse_formula("[](a -> b)"),)


def test_atom():
    n = to_cqnf(p)
    assert [[str(l) for l in c.literals] for c in n.clauses] == [["p"]]


def test_implication_clause():
    n = to_cqnf(parse_formula("<>p -> q"))
    assert len(n.clauses) == 1
    assert {str(l) for l in n.clauses[0].literals} == {"~<>p", "q"}
    assert qnf_equivalent(parse_formula("<>p -> q"), n)


def test_contradiction_and_modal_tautology():
    f = parse_formula("p & ~p")
    assert qnf_equivalent(f, to_dqnf(f))
    assert skeleton_tautology(Neg(f))
    g = parse_formula("[]p -> []p")
    assert qnf_equivalent(g, to_cqnf(g))


def test_degenerate_encodings():
    assert to_cqnf(TOP).degenerate and to_cqnf(TOP).formula() == TOP
    assert to_cqnf(BOT).degenerate and to_cqnf(BOT).formula() == BOT
    assert to_dqnf(BOT).degenerate and to_dqnf(BOT).formula() == BOT
    # complementary literals stay in their clause
    assert str(to_cqnf(parse_formula("p | ~p"))) == "p | ~p"


def test_type_invariants():
    with pytest.raises(ValueError):
        QuasiLiteral(True, parse_formula("p & q"))
    with pytest.raises(ValueError):
        QuasiClause((), "disjunctive")
    assert all(is_literal_unit(parse_formula(t)) for t in ("p", "[]~p", "<>(p & q)", "bot", "top"))
    assert not is_literal_unit(parse_formula("~[]p"))


@given(formulas(max_leaves=7))
def test_normal_forms_are_equivalent(f):
    c, d = to_cqnf(f), to_dqnf(f)
    assert qnf_equivalent(f, c) and qnf_equivalent(f, d)
    assert all(cl.kind == "disjunctive" for cl in c.clauses)
    assert all(cl.kind == "conjunctive" for cl in d.clauses)


@given(formulas(max_leaves=7))
def test_modal_cores_are_untouched(f):
    subs = subformulas(f)
    for n in (to_cqnf(f), to_dqnf(f)):
        for cl in n.clauses:
            assert all(l.core in subs for l in cl.literals)
            assert set(cl.P + cl.Q + cl.M + cl.N) == {l.core for l in cl.literals}


@given(formulas(max_leaves=5))
def test_quasi_equivalence_is_s5_equivalence(f):
    assert is_valid(Iff(f, to_cqnf(f).formula()))
    assert is_valid(Iff(f, to_dqnf(f).formula()))
