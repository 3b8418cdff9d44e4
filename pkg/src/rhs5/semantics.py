"""Kripke semantics for S5 and a brute-force validity oracle.

Models use the universal accessibility relation: a formula is S5-valid iff
it holds at every world of every such model.  Worlds are distinct
valuations, so a model is just a set of valuations.  The truth of a formula
in a model is computed once for all worlds as a bitmask.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import comb
from typing import Optional, Union

from .calculus import Proof, iter_proof
from .formula import (
    And,
    Atom,
    Bottom,
    Box,
    Dia,
    Formula,
    Imp,
    Neg,
    Or,
    Top,
    atoms,
    iter_nodes,
    modal_subformulas,
    render_formula,
)
from .hypersequent import RootedHypersequent, interpretation

MODEL_CEILING = 2_000_000


class OracleResourceError(RuntimeError):
    """The model enumeration for a formula would exceed the configured ceiling."""


@dataclass(frozen=True)
class KripkeModel:
    """Worlds 0..n-1 with their sets of true atoms; every world sees every world."""

    valuations: tuple[frozenset, ...]

    def __post_init__(self) -> None:
        if not self.valuations:
            raise ValueError("a Kripke model needs at least one world")

    @classmethod
    def of(cls, *valuations) -> KripkeModel:
        return cls(tuple(frozenset(v) for v in valuations))

    @property
    def worlds(self) -> range:
        return range(len(self.valuations))

    def __len__(self) -> int:
        return len(self.valuations)

    def truth_mask(self, f: Formula, memo: Optional[dict] = None) -> int:
        """Bit w is set iff f is true at world w."""
        if memo is None:
            memo = {}
        return _mask(f, self.valuations, (1 << len(self.valuations)) - 1, memo)

    def to_dict(self) -> dict:
        return {"worlds": [sorted(v) for v in self.valuations]}


def _mask(f: Formula, vals: tuple, full: int, memo: dict) -> int:
    got = memo.get(f)
    if got is not None:
        return got
    t = type(f)
    if t is Atom:
        m = 0
        for w, v in enumerate(vals):
            if f.name in v:
                m |= 1 << w
    elif t is Bottom:
        m = 0
    elif t is Top:
        m = full
    elif t is Neg:
        m = full ^ _mask(f.sub, vals, full, memo)
    elif t is And:
        m = _mask(f.left, vals, full, memo) & _mask(f.right, vals, full, memo)
    elif t is Or:
        m = _mask(f.left, vals, full, memo) | _mask(f.right, vals, full, memo)
    elif t is Imp:
        m = (full ^ _mask(f.left, vals, full, memo)) | _mask(f.right, vals, full, memo)
    elif t is Dia:
        m = full if _mask(f.sub, vals, full, memo) else 0
    elif t is Box:
        m = full if _mask(f.sub, vals, full, memo) == full else 0
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[f] = m
    return m


def eval_formula(m: KripkeModel, w: int, f: Formula) -> bool:
    """Truth of f at world w of m."""
    if not 0 <= w < len(m.valuations):
        raise IndexError(f"unknown world {w}")
    return bool(m.truth_mask(f) >> w & 1)


# short alias; shadows the builtin only where imported by name
eval = eval_formula


def eval_sequent(m: KripkeModel, w: int, s: RootedHypersequent) -> bool:
    return eval_formula(m, w, interpretation(s))


@dataclass(frozen=True)
class Valid:
    status = "valid"

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Countermodel:
    formula: Formula
    model: KripkeModel
    world: int

    status = "countermodel"

    def __post_init__(self) -> None:
        if eval_formula(self.model, self.world, self.formula):
            raise ValueError("countermodel does not falsify the formula")

    def __bool__(self) -> bool:
        return False

    def to_dict(self) -> dict:
        return {
            "formula": render_formula(self.formula),
            "world": self.world,
            **self.model.to_dict(),
        }

    def render(self) -> str:
        return render_countermodel(self)


OracleVerdict = Union[Valid, Countermodel]


def world_bound(f: Formula) -> int:
    """Number of worlds the oracle considers: modal subformulas plus one, at most 2^atoms."""
    return min(len(modal_subformulas(f)) + 1, 2 ** len(atoms(f)))


def model_count(f: Formula) -> int:
    n = 2 ** len(atoms(f))
    return sum(comb(n, k) for k in range(1, world_bound(f) + 1))


def all_valuations(names: list[str]) -> list[frozenset]:
    """All subsets of names, ordered by their bit pattern."""
    return [
        frozenset(a for i, a in enumerate(names) if bits >> i & 1)
        for bits in range(2 ** len(names))
    ]


@functools.lru_cache(maxsize=200_000)
def oracle_validity(f: Formula, ceiling: int = MODEL_CEILING) -> OracleVerdict:
    """Valid, or a countermodel with as few worlds as possible."""
    if model_count(f) > ceiling:
        raise OracleResourceError(
            f"{model_count(f)} models needed for {render_formula(f)}, ceiling is {ceiling}"
        )
    names = sorted(atoms(f))
    vals = all_valuations(names)
    # atom masks are assembled per model from per-valuation bits
    for k in range(1, world_bound(f) + 1):
        full = (1 << k) - 1
        for chosen in itertools.combinations(vals, k):
            mask = _mask(f, chosen, full, {})
            if mask != full:
                world = ((full ^ mask) & -(full ^ mask)).bit_length() - 1
                return Countermodel(f, KripkeModel(chosen), world)
    return Valid()


def is_valid(f: Formula) -> bool:
    return isinstance(oracle_validity(f), Valid)


def render_countermodel(cm: Countermodel) -> str:
    m = cm.model
    lines = [f"countermodel for {render_formula(cm.formula)} ({len(m)} worlds, all mutually accessible)"]
    for w, v in enumerate(m.valuations):
        mark = "  <- falsified here" if w == cm.world else ""
        lines.append(f"  w{w}: {{{', '.join(sorted(v))}}}{mark}")
    lines.append("truth table (T/F per world):")
    memo: dict = {}
    subs = sorted(set(iter_nodes(cm.formula)), key=lambda g: (g.size, g.key))
    width = max(len(render_formula(g)) for g in subs)
    header = " ".join(f"w{w}" for w in m.worlds)
    lines.append(f"  {'':<{width}}  {header}")
    for g in subs:
        mask = m.truth_mask(g, memo)
        row = " ".join(f"{'T' if mask >> w & 1 else 'F':>{len(f'w{w}')}}" for w in m.worlds)
        lines.append(f"  {render_formula(g):<{width}}  {row}")
    return "\n".join(lines)


# --------------------------------------------------------------- soundness

@dataclass(frozen=True)
class SoundnessResult:
    ok: bool
    path: tuple[int, ...] = ()
    node: Optional[Proof] = None
    countermodel: Optional[Countermodel] = None

    def __bool__(self) -> bool:
        return self.ok


def check_soundness(pf: Proof) -> SoundnessResult:
    """Every sequent in the proof must be S5-valid; report the first that is not."""
    seen: set = set()
    for path, node in iter_proof(pf):
        if node.conclusion in seen:
            continue
        seen.add(node.conclusion)
        verdict = oracle_validity(interpretation(node.conclusion))
        if not isinstance(verdict, Valid):
            return SoundnessResult(False, path, node, verdict)
    return SoundnessResult(True)
