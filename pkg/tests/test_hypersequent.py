import pytest
from hypothesis import given

from helpers import sequents
from rhs5.formula import BOT, TOP, And, Atom, Box, Dia, FormulaSyntaxError, Imp, Or
from rhs5.hypersequent import (
    CrownComponent,
    FMultiset,
    interpretation,
    parse_sequent,
    render_sequent,
    render_sequent_latex,
    set_project,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_parse_root_only():
    s = parse_sequent("r, p, q => <>(p & q)")
    assert s.ante == FMultiset([r, p, q])
    assert s.succ == FMultiset([Dia(And(p, q))])
    assert s.crown == ()


def test_parse_with_crown():
    s = parse_sequent("=> <>r || r, p, q =>")
    assert len(s.ante) == 0
    assert s.succ == FMultiset([Dia(r)])
    assert s.crown == (CrownComponent([r, p, q], []),)


def test_crown_must_be_atomic():
    with pytest.raises(FormulaSyntaxError, match=r"non-atomic formula in crown: \[\]p"):
        parse_sequent("=> p || []p => q")
    with pytest.raises(ValueError, match="non-atomic"):
        CrownComponent([Box(p)], [])


def test_empty_components_round_trip():
    s = parse_sequent("p => || => | q =>")
    assert s.crown == (CrownComponent(), CrownComponent([q], []))
    assert parse_sequent(render_sequent(s)) == s


@given(sequents(constants=True))
def test_render_parse_round_trip(s):
    assert parse_sequent(render_sequent(s)) == s
    assert parse_sequent(render_sequent(s, "unicode").replace("⇒", "=>").replace("‖", "||")
                         .replace("□", "[]").replace("◇", "<>").replace("¬", "~").replace("∧", "&")
                         .replace("∨", "|").replace("→", "->").replace("⊥", "bot").replace("⊤", "top")) == s


def test_multiset_semantics():
    a = parse_sequent("p, q => || p => | => q")
    b = parse_sequent("q, p => || => q | p =>")
    assert a == b and hash(a) == hash(b)
    assert parse_sequent("p, p =>") != parse_sequent("p =>")


def test_interpretation():
    assert interpretation(parse_sequent("p => p")) == Imp(p, p)
    assert interpretation(parse_sequent("=>")) == Imp(TOP, BOT)
    got = interpretation(parse_sequent("=> <>r || r, p, q =>"))
    assert got == Imp(TOP, Or(Dia(r), Box(Imp(And(And(p, q), r), BOT))))


def test_set_project():
    assert set_project(parse_sequent("p, p => q")) == parse_sequent("p => q")
    assert set_project(parse_sequent("=> || p => | p =>")) == parse_sequent("=> || p =>")
    s = parse_sequent("p => q || =>")
    assert set_project(s) == s


def test_root_partition():
    s = parse_sequent("[]p, q, <>r => p, []q")
    m, pp, qq, n = s.root_partition()
    assert set(m) == {Box(p), Dia(r)} and list(pp) == [q] and list(qq) == [p] and list(n) == [Box(q)]
    assert s.root_is_modal_atomic()
    assert not parse_sequent("~p =>").root_is_modal_atomic()


def test_latex():
    assert render_sequent_latex(parse_sequent("[]p => q || p =>")) == r"\Box p \Rightarrow q \parallel p \Rightarrow"
