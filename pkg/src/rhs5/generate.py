"""Formula enumeration and seeded random generation for corpora and tests."""
from __future__ import annotations

import random
from typing import Iterator, Sequence

from .formula import BOT, TOP, And, Atom, Box, Dia, Formula, Imp, Neg, Or

UNARY = (Neg, Dia, Box)
BINARY = (And, Or, Imp)


def formulas_by_size(max_nodes: int, leaves: Sequence[Formula]) -> list[list[Formula]]:
    """table[n] lists every formula with exactly n AST nodes over the given leaves."""
    table: list[list[Formula]] = [[] for _ in range(max_nodes + 1)]
    if max_nodes >= 1:
        table[1] = list(leaves)
    for n in range(2, max_nodes + 1):
        out = [c(f) for c in UNARY for f in table[n - 1]]
        for left_size in range(1, n - 1):
            right_size = n - 1 - left_size
            for c in BINARY:
                for a in table[left_size]:
                    for b in table[right_size]:
                        out.append(c(a, b))
        table[n] = out
    return table


def enumerate_formulas(max_nodes: int, atom_names: Sequence[str] = ("p", "q"),
                       constants: bool = False) -> Iterator[Formula]:
    """All formulas with at most max_nodes nodes, smallest first."""
    leaves: list[Formula] = [Atom(a) for a in atom_names]
    if constants:
        leaves += [BOT, TOP]
    for layer in formulas_by_size(max_nodes, leaves):
        yield from layer


def random_formula(rng: random.Random, max_nodes: int, atom_names: Sequence[str] = ("p", "q", "r"),
                   constants: bool = True, modal_weight: float = 1.0) -> Formula:
    """A random formula with between 1 and max_nodes nodes."""
    return random_formula_of_size(rng, rng.randint(1, max_nodes), atom_names, constants, modal_weight)


def random_formula_of_size(rng: random.Random, size: int, atom_names: Sequence[str] = ("p", "q", "r"),
                           constants: bool = True, modal_weight: float = 1.0) -> Formula:
    if size <= 1:
        if constants and rng.random() < 0.1:
            return rng.choice((BOT, TOP))
        return Atom(rng.choice(atom_names))
    if size == 2 or rng.random() < 0.35:
        weights = (1.0, modal_weight, modal_weight)
        c = rng.choices(UNARY, weights)[0]
        return c(random_formula_of_size(rng, size - 1, atom_names, constants, modal_weight))
    left = rng.randint(1, size - 2)
    c = rng.choice(BINARY)
    return c(
        random_formula_of_size(rng, left, atom_names, constants, modal_weight),
        random_formula_of_size(rng, size - 1 - left, atom_names, constants, modal_weight),
    )
