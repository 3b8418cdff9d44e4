"""Backward proof search.

Strategy, per branch:

1. close the branch if the root is initial;
2. apply LNeg, RNeg, ROr, LAnd, RImp eagerly;
3. apply the branching rules LOr, RAnd, LImp;
4. apply LBox and RDia once per formula and world (the "used" sets are
   cleared whenever a jump enters another world);
5. once the root holds only atoms and modal formulas, try every RBox, LDia
   and Exch instance as an alternative.

A state whose set projection already occurs lower on the branch is pruned.
All rules are invertible, so if one alternative fails without touching the
branch history the state itself is unprovable and the remaining alternatives
are skipped; such failures are also cached.

Passes are run with an increasing bound on the number of jumps per branch,
so proofs that need few worlds are found before long detours through many.
A pass in which the bound never cut off a branch is conclusive.

Premises are computed here directly on tuples, not through
``calculus.apply_backward``, so that ``check_proof`` is an independent test.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Optional, Union

from .calculus import Proof, Rule, RuleInstance
from .formula import (
    BOT,
    TOP,
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
    is_constant,
    iter_nodes,
    simplify_constants,
)
from .hypersequent import CrownComponent, RootedHypersequent

_NO_LOOP = sys.maxsize
_LIMIT = -1  # failure caused by the jump limit: depends on the whole branch

# jump limits tried in turn; the last pass is unbounded
_JUMP_SCHEDULE = (2, 4, 8, 16)


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 200
    max_visited: int = 500_000

    def __post_init__(self) -> None:
        if self.max_depth < 1 or self.max_visited < 1:
            raise ValueError("search budgets must be at least 1")


@dataclass
class Provable:
    proof: Proof
    visited: int = 0

    status = "provable"

    @property
    def goal(self) -> RootedHypersequent:
        """The sequent actually proved (the goal after constant simplification)."""
        return self.proof.conclusion


@dataclass
class NotProvable:
    saturated_states: int

    status = "notProvable"


@dataclass
class BudgetExceeded:
    reason: str = ""
    visited: int = 0

    status = "budgetExceeded"


SearchVerdict = Union[Provable, NotProvable, BudgetExceeded]


class _OutOfBudget(Exception):
    pass


def _projection(ante: tuple, succ: tuple, crown: tuple) -> tuple:
    return (
        frozenset(ante),
        frozenset(succ),
        frozenset((frozenset(c.ante.items), frozenset(c.succ.items)) for c in crown),
    )


def _remove(items: tuple, f: Formula) -> tuple:
    i = items.index(f)
    return items[:i] + items[i + 1:]


@dataclass
class _Searcher:
    budget: SearchBudget
    visited: int = 0
    on_path: dict = field(default_factory=dict)
    refuted: set = field(default_factory=set)
    jump_limit: Optional[int] = None
    limit_hit: bool = False

    def node(self, ante, succ, crown, inst, premises=()) -> Proof:
        return Proof(RootedHypersequent(ante, succ, crown), inst, premises)

    def search(self, ante: tuple, succ: tuple, crown: tuple,
               used_box: frozenset, used_dia: frozenset, depth: int, jumps: int = 0
               ) -> tuple[Optional[Proof], int]:
        """Return (proof, _) on success, else (None, shallowest ancestor depth the failure relied on)."""
        self.visited += 1
        if self.visited > self.budget.max_visited:
            raise _OutOfBudget(f"visited more than {self.budget.max_visited} states")
        if depth > self.budget.max_depth:
            raise _OutOfBudget(f"branch deeper than {self.budget.max_depth}")

        # 1. initial sequents
        for f in ante:
            if type(f) is Atom and f in succ:
                return self.node(ante, succ, crown, RuleInstance(Rule.Ax, f)), 0
        if BOT in ante:
            return self.node(ante, succ, crown, RuleInstance(Rule.LBot, BOT)), 0
        if TOP in succ:
            return self.node(ante, succ, crown, RuleInstance(Rule.RTop, TOP)), 0

        # 2. invertible rules with one premise
        for f in ante:
            t = type(f)
            if t is Neg:
                prem = (_remove(ante, f), succ + (f.sub,))
                rule = Rule.LNeg
            elif t is And:
                prem = (_remove(ante, f) + (f.left, f.right), succ)
                rule = Rule.LAnd
            else:
                continue
            return self.unary(ante, succ, crown, RuleInstance(rule, f), prem, used_box, used_dia, depth, jumps)
        for f in succ:
            t = type(f)
            if t is Neg:
                prem = (ante + (f.sub,), _remove(succ, f))
                rule = Rule.RNeg
            elif t is Or:
                prem = (ante, _remove(succ, f) + (f.left, f.right))
                rule = Rule.ROr
            elif t is Imp:
                prem = (ante + (f.left,), _remove(succ, f) + (f.right,))
                rule = Rule.RImp
            else:
                continue
            return self.unary(ante, succ, crown, RuleInstance(rule, f), prem, used_box, used_dia, depth, jumps)

        # 3. branching rules
        for f in ante:
            t = type(f)
            if t is Or:
                rest = _remove(ante, f)
                prems = [(rest + (f.left,), succ), (rest + (f.right,), succ)]
                rule = Rule.LOr
            elif t is Imp:
                rest = _remove(ante, f)
                prems = [(rest, succ + (f.left,)), (rest + (f.right,), succ)]
                rule = Rule.LImp
            else:
                continue
            return self.branch(ante, succ, crown, RuleInstance(rule, f), prems, used_box, used_dia, depth, jumps)
        for f in succ:
            if type(f) is And:
                rest = _remove(succ, f)
                prems = [(ante, rest + (f.left,)), (ante, rest + (f.right,))]
                return self.branch(ante, succ, crown, RuleInstance(Rule.RAnd, f), prems,
                                   used_box, used_dia, depth, jumps)

        # 4. LBox / RDia, once per formula in this world
        for f in ante:
            if type(f) is Box and f not in used_box:
                return self.unary(ante, succ, crown, RuleInstance(Rule.LBox, f),
                                  (ante + (f.sub,), succ), used_box | {f}, used_dia, depth, jumps)
        for f in succ:
            if type(f) is Dia and f not in used_dia:
                return self.unary(ante, succ, crown, RuleInstance(Rule.RDia, f),
                                  (ante, succ + (f.sub,)), used_box, used_dia | {f}, depth, jumps)

        # 5. the root is saturated; constants would block the jumps
        if any(type(f) is Top for f in ante) or any(type(f) is Bottom for f in succ):
            return None, _NO_LOOP
        return self.jump(ante, succ, crown, depth, jumps)

    def unary(self, ante, succ, crown, inst, prem, used_box, used_dia, depth, jumps):
        pf, loop = self.search(prem[0], prem[1], crown, used_box, used_dia, depth + 1, jumps)
        if pf is None:
            return None, loop
        return self.node(ante, succ, crown, inst, (pf,)), 0

    def branch(self, ante, succ, crown, inst, prems, used_box, used_dia, depth, jumps):
        children = []
        for a, s in prems:
            pf, loop = self.search(a, s, crown, used_box, used_dia, depth + 1, jumps)
            if pf is None:
                return None, loop
            children.append(pf)
        return self.node(ante, succ, crown, inst, children), 0

    def jump(self, ante, succ, crown, depth, jumps):
        key = _projection(ante, succ, crown)
        if key in self.refuted:
            return None, _NO_LOOP
        if key in self.on_path:
            return None, self.on_path[key]
        if self.jump_limit is not None and jumps >= self.jump_limit:
            self.limit_hit = True
            return None, _LIMIT

        p = tuple(f for f in ante if type(f) is Atom)
        q = tuple(f for f in succ if type(f) is Atom)
        m = tuple(f for f in ante if type(f) is not Atom)
        n = tuple(f for f in succ if type(f) is not Atom)
        alternatives = []
        seen = set()
        for f in n:
            if type(f) is Box and f not in seen:
                seen.add(f)
                n_rest = _remove(n, f)
                here = CrownComponent(p, q)
                alternatives.append((RuleInstance(Rule.RBox, f), m, n_rest + (f.sub,), crown + (here,)))
        for f in m:
            if type(f) is Dia and f not in seen:
                seen.add(f)
                m_rest = _remove(m, f)
                here = CrownComponent(p, q)
                alternatives.append((RuleInstance(Rule.LDia, f), m_rest + (f.sub,), n, crown + (here,)))
        here = None
        seen_comps = set()
        for k, comp in enumerate(crown):
            if comp in seen_comps:
                continue
            seen_comps.add(comp)
            if here is None:
                here = CrownComponent(p, q)
            if comp == here:
                continue  # swapping equal parts changes nothing
            alternatives.append((
                RuleInstance(Rule.Exch, crown_index=k),
                m + comp.ante.items,
                n + comp.succ.items,
                crown[:k] + (here,) + crown[k + 1:],
            ))

        self.on_path[key] = depth
        shallowest = _NO_LOOP
        try:
            for inst, a, s, c in alternatives:
                pf, loop = self.search(a, s, c, frozenset(), frozenset(), depth + 1, jumps + 1)
                if pf is not None:
                    return self.node(ante, succ, crown, inst, (pf,)), 0
                if loop > depth:
                    # failed without help from this state or its ancestors
                    shallowest = _NO_LOOP
                    break
                shallowest = min(shallowest, loop)
        finally:
            del self.on_path[key]
        if shallowest >= depth:
            self.refuted.add(key)
            return None, _NO_LOOP
        return None, shallowest


def _simplified_goal(goal: RootedHypersequent) -> RootedHypersequent:
    ante = [simplify_constants(f) for f in goal.ante]
    succ = [simplify_constants(f) for f in goal.succ]
    return RootedHypersequent(
        [f for f in ante if f != TOP], [f for f in succ if f != BOT], goal.crown
    )


def _has_constants(s: RootedHypersequent) -> bool:
    return any(is_constant(g) for f in s.formulas() for g in iter_nodes(f))


def _run(goal: RootedHypersequent, budget: SearchBudget) -> SearchVerdict:
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20 * budget.max_depth + 1000))
    visited = 0
    refuted: set = set()
    try:
        for jump_limit in _JUMP_SCHEDULE + (None,):
            searcher = _Searcher(budget, visited=visited, refuted=refuted, jump_limit=jump_limit)
            try:
                pf, _ = searcher.search(goal.ante.items, goal.succ.items, goal.crown,
                                        frozenset(), frozenset(), 0)
            except _OutOfBudget as e:
                return BudgetExceeded(str(e), searcher.visited)
            visited = searcher.visited
            if pf is not None:
                return Provable(pf, visited)
            if not searcher.limit_hit:
                break
    finally:
        sys.setrecursionlimit(limit)
    return NotProvable(visited)


def prove(goal: RootedHypersequent, budget: SearchBudget = SearchBudget()) -> SearchVerdict:
    """Search for a proof of goal.

    Goals mentioning bot or top are first searched as given; if that fails,
    the constants are simplified away (top on the left and bot on the right
    can block the modal rules) and the simplified goal is searched instead.
    In that case the returned proof concludes the simplified goal.
    """
    if not _has_constants(goal):
        return _run(goal, budget)
    first = _run(goal, budget)
    if isinstance(first, Provable):
        return first
    simple = _simplified_goal(goal)
    if simple == goal:
        return first
    second = _run(simple, budget)
    if isinstance(second, NotProvable) and isinstance(first, NotProvable):
        second.saturated_states += first.saturated_states
    return second


def decide_formula(f: Formula, budget: SearchBudget = SearchBudget()) -> SearchVerdict:
    return prove(RootedHypersequent((), (f,)), budget)
