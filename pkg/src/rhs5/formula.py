"""Formulas of propositional modal logic S5.

Formulas are immutable trees.  Every node caches its hash and a canonical
sort key, so multisets of formulas can be kept as sorted tuples and
compared cheaply.
"""
from __future__ import annotations

import enum
import re
from typing import Iterator


class FormulaClass(enum.Enum):
    ATOMIC = "atomic"
    MODAL = "modal"
    CONSTANT = "constant"
    COMPOUND = "compound"


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ("_hash", "_key", "_size")
    rank = -1
    symbol = ""

    def _init(self, parts: tuple) -> None:
        self._hash = hash((self.rank,) + parts)
        self._key = (self.rank,) + tuple(
            p._key if isinstance(p, Formula) else p for p in parts
        )
        self._size = 1 + sum(p._size for p in parts if isinstance(p, Formula))

    @property
    def children(self) -> tuple[Formula, ...]:
        return ()

    @property
    def key(self) -> tuple:
        """Canonical ordering key: structural rank first, then atom names."""
        return self._key

    @property
    def size(self) -> int:
        """Number of AST nodes."""
        return self._size

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __lt__(self, other: Formula) -> bool:
        return self._key < other._key

    def __str__(self) -> str:
        return render_formula(self)

    def __repr__(self) -> str:
        return f"Formula({render_formula(self)!r})"

    def __reduce__(self):
        return (type(self), self._args())

    def _args(self) -> tuple:
        return self.children


class Atom(Formula):
    __slots__ = ("name",)
    rank = 0

    def __init__(self, name: str) -> None:
        if not isinstance(name, str) or not ATOM_RE.fullmatch(name) or name in KEYWORDS:
            raise ValueError(f"invalid atom name {name!r}")
        self.name = name
        self._init((name,))

    def _args(self) -> tuple:
        return (self.name,)


class Bottom(Formula):
    __slots__ = ()
    rank = 1

    def __init__(self) -> None:
        self._init(())


class Top(Formula):
    __slots__ = ()
    rank = 2

    def __init__(self) -> None:
        self._init(())


class Unary(Formula):
    __slots__ = ("sub",)

    def __init__(self, sub: Formula) -> None:
        if not isinstance(sub, Formula):
            raise TypeError(f"expected Formula, got {type(sub).__name__}")
        self.sub = sub
        self._init((sub,))

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.sub,)


class Binary(Formula):
    __slots__ = ("left", "right")

    def __init__(self, left: Formula, right: Formula) -> None:
        if not isinstance(left, Formula) or not isinstance(right, Formula):
            raise TypeError("binary connectives take two formulas")
        self.left = left
        self.right = right
        self._init((left, right))

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


class Neg(Unary):
    __slots__ = ()
    rank = 3
    symbol = "~"


class And(Binary):
    __slots__ = ()
    rank = 4
    symbol = "&"


class Or(Binary):
    __slots__ = ()
    rank = 5
    symbol = "|"


class Imp(Binary):
    __slots__ = ()
    rank = 6
    symbol = "->"


class Dia(Unary):
    __slots__ = ()
    rank = 7
    symbol = "<>"


class Box(Unary):
    __slots__ = ()
    rank = 8
    symbol = "[]"


BOT = Bottom()
TOP = Top()

ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")
KEYWORDS = frozenset({"bot", "top"})


def Iff(left: Formula, right: Formula) -> Formula:
    """A <-> B, expanded to (A -> B) & (B -> A)."""
    return And(Imp(left, right), Imp(right, left))


def classify(f: Formula) -> FormulaClass:
    if isinstance(f, Atom):
        return FormulaClass.ATOMIC
    if isinstance(f, (Dia, Box)):
        return FormulaClass.MODAL
    if isinstance(f, (Bottom, Top)):
        return FormulaClass.CONSTANT
    return FormulaClass.COMPOUND


def is_atom(f: Formula) -> bool:
    return type(f) is Atom


def is_modal(f: Formula) -> bool:
    return type(f) is Box or type(f) is Dia


def is_constant(f: Formula) -> bool:
    return type(f) is Bottom or type(f) is Top


def is_quasi_atom(f: Formula) -> bool:
    """Atoms and modal formulas, the units the jump rules can move."""
    t = type(f)
    return t is Atom or t is Box or t is Dia


# ---------------------------------------------------------------- traversal

def iter_nodes(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal of every node occurrence."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children))


def subformulas(f: Formula) -> set[Formula]:
    return set(iter_nodes(f))


def atoms(f: Formula) -> set[str]:
    return {g.name for g in iter_nodes(f) if type(g) is Atom}


def modal_subformulas(f: Formula) -> set[Formula]:
    return {g for g in iter_nodes(f) if is_modal(g)}


def modal_depth(f: Formula) -> int:
    if is_modal(f):
        return 1 + modal_depth(f.sub)
    return max((modal_depth(c) for c in f.children), default=0)


def substitute(f: Formula, mapping: dict[str, Formula]) -> Formula:
    """Replace atoms by formulas, simultaneously."""
    if type(f) is Atom:
        return mapping.get(f.name, f)
    if isinstance(f, Unary):
        return type(f)(substitute(f.sub, mapping))
    if isinstance(f, Binary):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    return f


def simplify_constants(f: Formula) -> Formula:
    """Propagate bot and top upward until the result is constant-free or a constant.

    The result is equivalent to f in every Kripke model.
    """
    t = type(f)
    if t is Atom or t is Bottom or t is Top:
        return f
    if t is Neg:
        a = simplify_constants(f.sub)
        if a == TOP:
            return BOT
        if a == BOT:
            return TOP
        return f if a is f.sub else Neg(a)
    if t is Box or t is Dia:
        a = simplify_constants(f.sub)
        if is_constant(a):
            return a
        return f if a is f.sub else t(a)
    a = simplify_constants(f.left)
    b = simplify_constants(f.right)
    if t is And:
        if a == BOT or b == BOT:
            return BOT
        if a == TOP:
            return b
        if b == TOP:
            return a
    elif t is Or:
        if a == TOP or b == TOP:
            return TOP
        if a == BOT:
            return b
        if b == BOT:
            return a
    else:
        if a == BOT or b == TOP:
            return TOP
        if a == TOP:
            return b
        if b == BOT:
            return Neg(a)
    if a is f.left and b is f.right:
        return f
    return t(a, b)


# ------------------------------------------------------------------ parsing

class FormulaSyntaxError(ValueError):
    """Malformed formula or sequent text; carries the character offset."""

    def __init__(self, message: str, offset: int, text: str = "") -> None:
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|=>|\|\||\[\]|<>|[~&|(),])|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))"
)


def tokenize(text: str) -> list[tuple[str, int]]:
    """Split text into (token, offset) pairs; ends with ("", len(text))."""
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        if m.group("bad") is not None:
            raise FormulaSyntaxError(f"unexpected character {m.group('bad')!r}", m.start("bad"), text)
        kind = "op" if m.group("op") is not None else "id"
        tokens.append((m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class Parser:
    """Recursive-descent parser over a token list, shared with the sequent grammar."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> str:
        return self.tokens[self.i][0]

    @property
    def offset(self) -> int:
        return self.tokens[self.i][1]

    def error(self, message: str) -> FormulaSyntaxError:
        return FormulaSyntaxError(message, self.offset, self.text)

    def advance(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek != tok:
            found = repr(self.peek) if self.peek else "end of input"
            raise self.error(f"expected {tok!r}, found {found}")
        self.advance()

    def at_end(self) -> bool:
        return self.peek == ""

    def formula(self) -> Formula:
        left = self.imp()
        if self.peek == "<->":
            self.advance()
            return Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek == "->":
            self.advance()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek == "|":
            self.advance()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek
        if tok == "~":
            self.advance()
            return Neg(self.unary())
        if tok == "[]":
            self.advance()
            return Box(self.unary())
        if tok == "<>":
            self.advance()
            return Dia(self.unary())
        if tok == "(":
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if tok == "bot":
            self.advance()
            return BOT
        if tok == "top":
            self.advance()
            return TOP
        if tok and ATOM_RE.fullmatch(tok):
            self.advance()
            return Atom(tok)
        if tok == "":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected token {tok!r}")


def parse_formula(text: str) -> Formula:
    p = Parser(text)
    f = p.formula()
    if not p.at_end():
        raise p.error(f"unexpected token {p.peek!r}")
    return f


# ---------------------------------------------------------------- rendering

# binding strength used to decide where parentheses are needed
_PREC = {Imp: 1, Or: 2, And: 3}

ASCII_SYMBOLS = {
    Bottom: "bot", Top: "top", Neg: "~", Dia: "<>", Box: "[]",
    And: " & ", Or: " | ", Imp: " -> ",
}
UNICODE_SYMBOLS = {
    Bottom: "⊥", Top: "⊤", Neg: "¬", Dia: "◇", Box: "□",
    And: "∧", Or: "∨", Imp: "→",
}
LATEX_SYMBOLS = {
    Bottom: r"\bot", Top: r"\top", Neg: r"\neg ", Dia: r"\Diamond ", Box: r"\Box ",
    And: r" \wedge ", Or: r" \vee ", Imp: r" \rightarrow ",
}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 4)


def render_formula(f: Formula, symbols: dict = ASCII_SYMBOLS) -> str:
    """Print with minimal parentheses; the ASCII form parses back to f."""
    t = type(f)
    if t is Atom:
        return f.name
    if t is Bottom or t is Top:
        return symbols[t]
    if isinstance(f, Unary):
        inner = render_formula(f.sub, symbols)
        if _prec(f.sub) < 4:
            inner = f"({inner})"
        return symbols[t] + inner
    p = _prec(f)
    left = render_formula(f.left, symbols)
    right = render_formula(f.right, symbols)
    # -> associates to the right, & and | to the left
    left_tight = p if t is Imp else p - 1
    right_tight = p - 1 if t is Imp else p
    if _prec(f.left) <= left_tight:
        left = f"({left})"
    if _prec(f.right) <= right_tight:
        right = f"({right})"
    return left + symbols[t] + right


def render_unicode(f: Formula) -> str:
    return render_formula(f, UNICODE_SYMBOLS)


def render_latex(f: Formula) -> str:
    return render_formula(f, LATEX_SYMBOLS)
