"""Rooted hypersequents: a root sequent of formulas plus a crown of atomic components."""
from __future__ import annotations

from typing import Iterable, Iterator

from .formula import (
    BOT,
    TOP,
    And,
    Box,
    Formula,
    FormulaSyntaxError,
    Imp,
    Or,
    Parser,
    is_atom,
    is_quasi_atom,
    render_formula,
    render_latex,
    render_unicode,
)


def _sort_key(f: Formula) -> tuple:
    return f._key


class FMultiset:
    """Finite multiset of formulas, stored as a canonically sorted tuple."""

    __slots__ = ("items", "_hash")

    def __init__(self, items: Iterable[Formula] = ()) -> None:
        self.items = tuple(sorted(items, key=_sort_key))
        self._hash = hash(self.items)

    @classmethod
    def _sorted(cls, items: tuple) -> FMultiset:
        m = cls.__new__(cls)
        m.items = items
        m._hash = hash(items)
        return m

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __contains__(self, f: object) -> bool:
        return f in self.items

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FMultiset):
            return NotImplemented
        return self._hash == other._hash and self.items == other.items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "FMultiset([" + ", ".join(render_formula(f) for f in self.items) + "])"

    def __add__(self, other: Iterable[Formula]) -> FMultiset:
        return FMultiset(self.items + tuple(other))

    def __sub__(self, other: Iterable[Formula]) -> FMultiset:
        """Multiset difference; every element of other must be present."""
        items = list(self.items)
        for f in other:
            try:
                items.remove(f)
            except ValueError:
                raise KeyError(f"{render_formula(f)} not in multiset") from None
        return FMultiset._sorted(tuple(items))

    def count(self, f: Formula) -> int:
        return self.items.count(f)

    def add(self, *fs: Formula) -> FMultiset:
        return self + fs

    def remove(self, f: Formula) -> FMultiset:
        return self - (f,)

    def issubset(self, other: FMultiset) -> bool:
        try:
            other - self.items
        except KeyError:
            return False
        return True

    def distinct(self) -> list[Formula]:
        """Distinct elements in canonical order."""
        return list(dict.fromkeys(self.items))


EMPTY = FMultiset()


def _multiset(items) -> FMultiset:
    return items if isinstance(items, FMultiset) else FMultiset(items)


class CrownComponent:
    """A sequent P => Q whose formulas are all atoms."""

    __slots__ = ("ante", "succ", "_key", "_hash")

    def __init__(self, ante: Iterable[Formula] = (), succ: Iterable[Formula] = ()) -> None:
        self.ante = _multiset(ante)
        self.succ = _multiset(succ)
        for f in self.ante.items + self.succ.items:
            if not is_atom(f):
                raise ValueError(f"non-atomic formula in crown: {render_formula(f)}")
        self._key = (tuple(f._key for f in self.ante), tuple(f._key for f in self.succ))
        self._hash = hash((self.ante, self.succ))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CrownComponent):
            return NotImplemented
        return self._hash == other._hash and self.ante == other.ante and self.succ == other.succ

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: CrownComponent) -> bool:
        return self._key < other._key

    def __repr__(self) -> str:
        return f"CrownComponent({_render_side(self.ante)} => {_render_side(self.succ)})"

    def __str__(self) -> str:
        return _render_sequent_part(self.ante, self.succ, render_formula, "=>")

    def merged(self, other: CrownComponent) -> CrownComponent:
        return CrownComponent(self.ante + other.ante, self.succ + other.succ)


EMPTY_COMPONENT = CrownComponent()


class RootedHypersequent:
    """Gamma => Delta || P1 => Q1 | ... | Pn => Qn.

    The crown is kept in order (rule instances index into it) but equality
    and hashing treat it as a multiset of components.
    """

    __slots__ = ("ante", "succ", "crown", "_canon", "_hash")

    def __init__(
        self,
        ante: Iterable[Formula] = (),
        succ: Iterable[Formula] = (),
        crown: Iterable[CrownComponent] = (),
    ) -> None:
        self.ante = _multiset(ante)
        self.succ = _multiset(succ)
        self.crown = tuple(crown)
        for c in self.crown:
            if not isinstance(c, CrownComponent):
                raise TypeError("crown entries must be CrownComponent")
        self._canon = (self.ante, self.succ, tuple(sorted(self.crown)))
        self._hash = hash(self._canon)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedHypersequent):
            return NotImplemented
        return self._hash == other._hash and self._canon == other._canon

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"RootedHypersequent({render_sequent(self)!r})"

    def __str__(self) -> str:
        return render_sequent(self)

    def identical(self, other: RootedHypersequent) -> bool:
        """Equality that also respects crown order."""
        return self == other and self.crown == other.crown

    # -- construction helpers; all return new values

    def replace(self, ante=None, succ=None, crown=None) -> RootedHypersequent:
        return RootedHypersequent(
            self.ante if ante is None else ante,
            self.succ if succ is None else succ,
            self.crown if crown is None else crown,
        )

    def add(self, ante: Iterable[Formula] = (), succ: Iterable[Formula] = (),
            crown: Iterable[CrownComponent] = ()) -> RootedHypersequent:
        return RootedHypersequent(self.ante + ante, self.succ + succ, self.crown + tuple(crown))

    def remove(self, ante: Iterable[Formula] = (), succ: Iterable[Formula] = ()) -> RootedHypersequent:
        return RootedHypersequent(self.ante - ante, self.succ - succ, self.crown)

    def formulas(self) -> Iterator[Formula]:
        yield from self.ante
        yield from self.succ
        for c in self.crown:
            yield from c.ante
            yield from c.succ

    def root_is_modal_atomic(self) -> bool:
        """True when every root formula is an atom or a modal formula."""
        return all(is_quasi_atom(f) for f in self.ante.items) and all(
            is_quasi_atom(f) for f in self.succ.items
        )

    def root_partition(self) -> tuple[FMultiset, FMultiset, FMultiset, FMultiset]:
        """(M, P, Q, N): modal antecedent, atomic antecedent, atomic succedent, modal succedent."""
        m = FMultiset._sorted(tuple(f for f in self.ante.items if not is_atom(f)))
        p = FMultiset._sorted(tuple(f for f in self.ante.items if is_atom(f)))
        q = FMultiset._sorted(tuple(f for f in self.succ.items if is_atom(f)))
        n = FMultiset._sorted(tuple(f for f in self.succ.items if not is_atom(f)))
        return m, p, q, n


# ------------------------------------------------------------------ parsing

def _parse_list(p: Parser, stop: set[str], item) -> list:
    out = []
    if p.peek in stop:
        return out
    out.append(item())
    while p.peek == ",":
        p.advance()
        out.append(item())
    return out


def _parse_crown_atom(p: Parser) -> Formula:
    offset = p.offset
    f = p.conj()
    if not is_atom(f):
        raise FormulaSyntaxError(f"non-atomic formula in crown: {render_formula(f)}", offset, p.text)
    return f


def parse_sequent(text: str) -> RootedHypersequent:
    p = Parser(text)
    ante = _parse_list(p, {"=>"}, p.formula)
    p.expect("=>")
    succ = _parse_list(p, {"||", ""}, p.formula)
    crown = []
    if p.peek == "||":
        p.advance()
        while True:
            cante = _parse_list(p, {"=>"}, lambda: _parse_crown_atom(p))
            p.expect("=>")
            csucc = _parse_list(p, {"|", ""}, lambda: _parse_crown_atom(p))
            crown.append(CrownComponent(cante, csucc))
            if p.peek != "|":
                break
            p.advance()
    if not p.at_end():
        raise p.error(f"unexpected token {p.peek!r}")
    return RootedHypersequent(ante, succ, crown)


# ---------------------------------------------------------------- rendering

def _render_side(items: Iterable[Formula], render=render_formula) -> str:
    return ", ".join(render(f) for f in items)


def _render_sequent_part(ante, succ, render, arrow: str) -> str:
    left = _render_side(ante, render)
    right = _render_side(succ, render)
    return f"{left} {arrow} {right}".strip() if left or right else arrow


def render_sequent(s: RootedHypersequent, style: str = "ascii") -> str:
    """Print in the sequent grammar ("ascii"), or with logical symbols ("unicode")."""
    render, arrow, bar, sep = {
        "ascii": (render_formula, "=>", "||", "|"),
        "unicode": (render_unicode, "⇒", "||", "|"),
    }[style]
    text = _render_sequent_part(s.ante, s.succ, render, arrow)
    if s.crown:
        comps = f" {sep} ".join(_render_sequent_part(c.ante, c.succ, render, arrow) for c in s.crown)
        text = f"{text} {bar} {comps}"
    return text


def render_sequent_latex(s: RootedHypersequent) -> str:
    def side(items):
        return ", ".join(render_latex(f) for f in items)

    def part(ante, succ):
        return f"{side(ante)} \\Rightarrow {side(succ)}".strip()

    text = part(s.ante, s.succ)
    if s.crown:
        text += " \\parallel " + " \\mid ".join(part(c.ante, c.succ) for c in s.crown)
    return text


# ----------------------------------------------------------- interpretation

def _fold(op, items: list[Formula], empty: Formula) -> Formula:
    if not items:
        return empty
    acc = items[0]
    for f in items[1:]:
        acc = op(acc, f)
    return acc


def interpretation(s: RootedHypersequent) -> Formula:
    """The formula /\\Gamma -> \\/Delta | \\/_i [](/\\P_i -> \\/Q_i)."""
    boxes = sorted(
        Box(Imp(_fold(And, list(c.ante), TOP), _fold(Or, list(c.succ), BOT))) for c in s.crown
    )
    succ = _fold(Or, list(s.succ), BOT)
    if boxes:
        succ = _fold(Or, [succ] + boxes, BOT)
    return Imp(_fold(And, list(s.ante), TOP), succ)


def set_project(s: RootedHypersequent) -> RootedHypersequent:
    """Collapse multiplicities and duplicate crown components; canonical crown order."""
    crown = sorted({
        CrownComponent(FMultiset(set(c.ante)), FMultiset(set(c.succ))) for c in s.crown
    })
    return RootedHypersequent(FMultiset(set(s.ante)), FMultiset(set(s.succ)), crown)
