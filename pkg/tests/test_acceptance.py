"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

Proof-producing criteria cache their results so that the soundness and
subformula checks can revisit every proof without recomputing it.
"""
import functools
import random
import time

import pytest

from helpers import EXAMPLE_1, EXAMPLE_2, example_1_transcription, example_2_transcription, random_sequent
from rhs5.calculus import (
    PROPOSITIONAL_RULES,
    Rule,
    apply_backward,
    backward_instances,
    check_proof,
    proof_height,
    rules_used,
    subformula_violations,
)
from rhs5.formula import Atom, Box, Dia, Iff, is_atom, is_modal, modal_depth, parse_formula, render_formula
from rhs5.generate import enumerate_formulas, random_formula, random_formula_of_size
from rhs5.hilbert import check_hilbert, parse_hilbert, translate
from rhs5.hypersequent import CrownComponent, RootedHypersequent
from rhs5.qnf import qnf_equivalent, to_cqnf, to_dqnf
from rhs5.search import BudgetExceeded, NotProvable, Provable, SearchBudget, decide_formula, prove
from rhs5.semantics import Countermodel, Valid, check_soundness, eval_formula, oracle_validity
from rhs5 import transform as T

f = parse_formula


def _record(record_criterion, number, failures, detail):
    passed = not failures
    record_criterion(number, passed, detail if passed else f"{detail}; first failure: {failures[0]}")
    assert passed, failures[:5]


def _exact_proof(s):
    """A search proof whose conclusion is exactly s, or None."""
    v = prove(s)
    if isinstance(v, Provable) and v.proof.conclusion == s:
        return v.proof
    return None


# ---------------------------------------------------------------- 1

@functools.cache
def criterion_1():
    failures, proofs, timings = [], [], []
    for text in (EXAMPLE_1, EXAMPLE_2):
        start = time.perf_counter()
        v = decide_formula(f(text))
        elapsed = time.perf_counter() - start
        timings.append(elapsed)
        if not isinstance(v, Provable):
            failures.append(f"{text}: {v.status}")
            continue
        proofs.append(v.proof)
        if elapsed > 1.0:
            failures.append(f"{text}: {elapsed:.2f}s")
        if not check_proof(v.proof):
            failures.append(f"{text}: {check_proof(v.proof)}")
    for pf in (example_1_transcription(), example_2_transcription()):
        if not check_proof(pf):
            failures.append(f"transcription: {check_proof(pf)}")
    if proof_height(example_1_transcription()) != 8:
        failures.append(f"height {proof_height(example_1_transcription())} != 8")
    return failures, proofs, max(timings)


def test_criterion_1_worked_examples(record_criterion):
    failures, _, worst = criterion_1()
    _record(record_criterion, 1, failures, f"both examples proved (slowest {worst:.3f}s), transcriptions check, height 8")


# ---------------------------------------------------------------- 2

AXIOMS = {
    "Dual->": "[]p -> ~<>~p",
    "Dual<-": "~<>~p -> []p",
    "K": "[](p -> q) -> []p -> []q",
    "T": "[]p -> p",
    "4": "[]p -> [][]p",
    "5": "<>p -> []<>p",
    "B": "p -> []<>p",
}
AXIOM_5_RULES = {Rule.RDia, Rule.LDia, Rule.RBox, Rule.RImp, Rule.Ax}


@functools.cache
def criterion_2():
    failures, proofs = [], []
    for name, text in AXIOMS.items():
        v = decide_formula(f(text))
        if not isinstance(v, Provable) or not check_proof(v.proof):
            failures.append(f"{name} not provable")
            continue
        proofs.append(v.proof)
        if not isinstance(oracle_validity(f(text)), Valid):
            failures.append(f"{name} not valid")
        if name == "5" and not rules_used(v.proof) <= AXIOM_5_RULES:
            failures.append(f"axiom 5 proof uses {sorted(r.value for r in rules_used(v.proof) - AXIOM_5_RULES)}")
    return failures, proofs


def test_criterion_2_axioms(record_criterion):
    failures, proofs = criterion_2()
    _record(record_criterion, 2, failures, f"{len(proofs)}/7 axioms provable and valid; axiom 5 within its rule set")


# ---------------------------------------------------------------- 3

REFUTED = ["p -> []p", "<>p -> p", "[](p | q) -> []p | []q", "[]<>p -> p"]


def test_criterion_3_refutations(record_criterion):
    failures, sizes = [], []
    for text in REFUTED:
        g = f(text)
        v = decide_formula(g)
        if not isinstance(v, NotProvable):
            failures.append(f"{text}: {v.status}")
        cm = oracle_validity(g)
        if not isinstance(cm, Countermodel):
            failures.append(f"{text}: oracle says valid")
            continue
        sizes.append(len(cm.model))
        if len(cm.model) > 3 or eval_formula(cm.model, cm.world, g):
            failures.append(f"{text}: bad countermodel {cm.to_dict()}")
    _record(record_criterion, 3, failures, f"4/4 refuted, countermodel worlds {sizes}")


# ---------------------------------------------------------------- 4

def _c4_formulas():
    # "<= 7 connective nodes" is read as at most 7 nodes in the syntax tree; see the README
    exhaustive = [g for g in enumerate_formulas(7, ("p", "q"), constants=True) if modal_depth(g) <= 2]
    rng = random.Random(2024)
    sampled = [random_formula_of_size(rng, rng.randint(1, 10), ("p", "q", "r")) for _ in range(500)]
    return exhaustive, sampled


@functools.cache
def criterion_4():
    exhaustive, sampled = _c4_formulas()
    failures, proofs, budget = [], [], 0
    start = time.perf_counter()
    for g in exhaustive + sampled:
        v = decide_formula(g, SearchBudget(max_depth=200))
        if isinstance(v, BudgetExceeded):
            budget += 1
            failures.append(f"budget exceeded on {render_formula(g)}")
            continue
        if isinstance(v, Provable) != isinstance(oracle_validity(g), Valid):
            failures.append(f"disagreement on {render_formula(g)}: {v.status}")
        if isinstance(v, Provable):
            proofs.append(v.proof)
    elapsed = time.perf_counter() - start
    if elapsed > 600:
        failures.append(f"took {elapsed:.0f}s")
    return failures, proofs, len(exhaustive), len(sampled), elapsed, budget


@pytest.mark.slow
def test_criterion_4_agreement(record_criterion):
    failures, proofs, n_ex, n_rand, elapsed, budget = criterion_4()
    _record(
        record_criterion, 4, failures,
        f"{n_ex} enumerated + {n_rand} random formulas agree with the oracle, "
        f"{len(proofs)} proofs, {budget} budget exceeded, {elapsed:.0f}s",
    )


# ------------------------------------------------------------ corpus

def _corpus(seed, count, want=None):
    """Provable constant-free sequents with exact search proofs."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = random_sequent(rng, 6, atoms=("p", "q", "r"))
        if want is not None and not want(s):
            continue
        pf = _exact_proof(s)
        if pf is not None:
            out.append(pf)
    return out


def _modal_atomic_or_crowned(s):
    return s.root_is_modal_atomic() or bool(s.crown)


# ---------------------------------------------------------------- 5

@functools.cache
def criterion_5():
    corpus = _corpus(505, 50) + _corpus(506, 50, _modal_atomic_or_crowned)
    failures, outputs, calls, hp_calls = [], [], 0, 0
    for pf in corpus:
        for inst in backward_instances(pf.conclusion):
            wanted = apply_backward(pf.conclusion, inst)
            try:
                reports = T.invert(pf, inst)
            except T.TransformError as e:
                failures.append(f"invert {inst} on {pf.conclusion}: {e}")
                continue
            calls += 1
            for rep, want in zip(reports, wanted):
                outputs.append(rep.output)
                if rep.output.conclusion != want or not check_proof(rep.output):
                    failures.append(f"invert {inst} on {pf.conclusion}: wrong or invalid output")
                if inst.rule in PROPOSITIONAL_RULES:
                    hp_calls += 1
                    if rep.height_out > rep.height_in:
                        failures.append(f"invert {inst} on {pf.conclusion}: height {rep.height_in} -> {rep.height_out}")
    return failures, corpus, outputs, calls, hp_calls


def test_criterion_5_invertibility(record_criterion):
    failures, corpus, outputs, calls, hp_calls = criterion_5()
    _record(
        record_criterion, 5, failures,
        f"{len(corpus)} sequents, {calls} inversions, {len(outputs)} premise proofs valid, "
        f"{hp_calls} propositional outputs within height",
    )


# ---------------------------------------------------------------- 6

def _transform_calls(pf, rng):
    """Randomized admissible-rule calls on pf, each with the end-sequent its schema dictates."""
    s = pf.conclusion
    ante, succ, crown = list(s.ante), list(s.succ), list(s.crown)
    extra = random_formula(rng, 4, ("p", "q", "r"), constants=False)
    atom = Atom(rng.choice("pqr"))
    calls = [
        ("weaken-left", lambda: T.weaken(pf, T.LeftRoot(extra)),
         RootedHypersequent(ante + [extra], succ, crown)),
        ("weaken-right", lambda: T.weaken(pf, T.RightRoot(extra)),
         RootedHypersequent(ante, succ + [extra], crown)),
        ("weaken-new", lambda: T.weaken(pf, T.NewComponent((atom,), ())),
         RootedHypersequent(ante, succ, crown + [CrownComponent([atom], [])])),
    ]
    for i, comp in enumerate(crown):
        rest = crown[:i] + crown[i + 1:]
        calls.append((f"merge-root {i}", lambda i=i: T.merge_root(pf, i),
                      RootedHypersequent(ante + list(comp.ante), succ + list(comp.succ), rest)))
        grown = CrownComponent(list(comp.ante) + [atom], comp.succ)
        calls.append((f"weaken-crown {i}", lambda i=i: T.weaken(pf, T.CrownAtoms(i, (atom,), ())),
                      RootedHypersequent(ante, succ, crown[:i] + [grown] + crown[i + 1:])))
    if len(crown) >= 2:
        i, j = sorted(rng.sample(range(len(crown)), 2))
        fused = CrownComponent(list(crown[i].ante) + list(crown[j].ante), list(crown[i].succ) + list(crown[j].succ))
        merged = [fused if k == i else c for k, c in enumerate(crown) if k != j]
        calls.append((f"merge-crown {i},{j}", lambda: T.merge_crown(pf, i, j), RootedHypersequent(ante, succ, merged)))
    for g in set(ante):
        if type(g) is Dia:
            calls.append((f"strip-dia {render_formula(g)}", lambda g=g: T.strip_modality(pf, T.LeftDia(g.sub)),
                          RootedHypersequent(_swap(ante, g, g.sub), succ, crown)))
    for g in set(succ):
        if type(g) is Box:
            calls.append((f"strip-box {render_formula(g)}", lambda g=g: T.strip_modality(pf, T.RightBox(g.sub)),
                          RootedHypersequent(ante, _swap(succ, g, g.sub), crown)))
    return calls


def _swap(items, old, new):
    out = list(items)
    out[out.index(old)] = new
    return out


def _contraction_calls(pf, rng):
    """Duplicate something by weakening, then contract it away again."""
    s = pf.conclusion
    out = []
    pool = [("L", g) for g in s.ante] + [("R", g) for g in s.succ]
    if pool:
        side, g = rng.choice(pool)
        where = T.LeftRoot(g) if side == "L" else T.RightRoot(g)
        out.append((f"contract {side} {render_formula(g)}", where))
    for i, comp in enumerate(s.crown):
        for a in comp.ante:
            out.append((f"contract crown-left {i} {render_formula(a)}", T.CrownLeft(i, a)))
        for a in comp.succ:
            out.append((f"contract crown-right {i} {render_formula(a)}", T.CrownRight(i, a)))
    if s.crown:
        out.append(("contract external 0", T.External(0, len(s.crown))))
    return out


def _duplicate(pf, where):
    if isinstance(where, (T.LeftRoot, T.RightRoot)):
        return T.weaken(pf, where).output
    if isinstance(where, (T.CrownLeft, T.CrownRight)):
        atoms = ((where.atom,), ()) if isinstance(where, T.CrownLeft) else ((), (where.atom,))
        return T.weaken(pf, T.CrownAtoms(where.index, *atoms)).output
    comp = pf.conclusion.crown[where.first]
    return T.weaken(pf, T.NewComponent(tuple(comp.ante), tuple(comp.succ))).output


# the transforms whose height bound is claimed: merges, external and crown weakening,
# atomic and crown and external contraction, and weakening by atoms or modal formulas
def _claims_height(name, where=None):
    if name.startswith(("merge", "weaken-new", "weaken-crown")):
        return True
    if name.startswith("contract"):
        return not isinstance(where, (T.LeftRoot, T.RightRoot)) or is_atom(where.formula)
    return False


@functools.cache
def criterion_6():
    rng = random.Random(606)
    corpus = _corpus(601, 50) + _corpus(602, 50, _modal_atomic_or_crowned)
    failures, outputs, hp_checked, total = [], [], 0, 0
    for pf in corpus:
        for name, call, want in _transform_calls(pf, rng):
            total += 1
            try:
                rep = call()
            except T.TransformError as e:
                failures.append(f"{name} on {pf.conclusion}: {e}")
                continue
            outputs.append(rep.output)
            if rep.output.conclusion != want or not check_proof(rep.output):
                failures.append(f"{name} on {pf.conclusion}: wrong or invalid output")
            if _claims_height(name):
                hp_checked += 1
                if not rep.height_preserving or rep.height_out > rep.height_in:
                    failures.append(f"{name} on {pf.conclusion}: height {rep.height_in} -> {rep.height_out}")
        for name, where in _contraction_calls(pf, rng):
            total += 1
            try:
                doubled = _duplicate(pf, where)
                rep = T.contract(doubled, where)
            except T.TransformError as e:
                failures.append(f"{name} on {pf.conclusion}: {e}")
                continue
            outputs.append(rep.output)
            if rep.output.conclusion != pf.conclusion or not check_proof(rep.output):
                failures.append(f"{name} on {pf.conclusion}: wrong or invalid output")
            if _claims_height(name, where):
                hp_checked += 1
                if rep.height_out > rep.height_in:
                    failures.append(f"{name} on {pf.conclusion}: height {rep.height_in} -> {rep.height_out}")
    return failures, corpus, outputs, total, hp_checked


def test_criterion_6_admissibility(record_criterion):
    failures, corpus, outputs, total, hp_checked = criterion_6()
    _record(
        record_criterion, 6, failures,
        f"{len(corpus)} sequents, {total} transform calls valid, {hp_checked} height-bounded calls, 0 violations",
    )


# ---------------------------------------------------------------- 7

def _cut_instances(seed, count):
    """Pairs of proofs of G => D', D and D, G' => D'' with D of at most 6 nodes."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = random_formula_of_size(rng, rng.randint(1, 6), ("p", "q", "r"), constants=False)
        if len(out) % 2 == 0 or not is_modal(d):
            # search both sides with D placed in otherwise random sequents
            left_s, right_s = random_sequent(rng, 4, atoms=("p", "q", "r")), random_sequent(rng, 4, atoms=("p", "q", "r"))
            left_s = left_s.add(succ=[d])
            right_s = right_s.add(ante=[d])
            left, right = _exact_proof(left_s), _exact_proof(right_s)
            if left is None or right is None:
                continue
        else:
            # build one side by weakening D into a proof of a random provable sequent
            base = _exact_proof(random_sequent(rng, 4, atoms=("p", "q", "r")))
            other = _exact_proof(random_sequent(rng, 4, atoms=("p", "q", "r")).add(ante=[d]))
            if base is None or other is None:
                continue
            try:
                left = T.weaken(base, T.RightRoot(d)).output
            except T.TransformError:
                continue
            right = other
        out.append((left, right, d))
    return out


@functools.cache
def criterion_7():
    failures, outputs, worst = [], [], 0.0
    instances = _cut_instances(707, 100)
    modal = sum(1 for *_, d in instances if any(type(g) in (Box, Dia) for g in _nodes(d)))
    for left, right, d in instances:
        ls, rs = left.conclusion, right.conclusion
        want = RootedHypersequent(
            list(ls.remove(succ=[d]).ante) + list(rs.remove(ante=[d]).ante),
            list(ls.remove(succ=[d]).succ) + list(rs.remove(ante=[d]).succ),
            list(ls.crown) + list(rs.crown),
        )
        start = time.perf_counter()
        try:
            rep = T.eliminate_cut(left, right, d)
        except T.TransformError as e:
            failures.append(f"cut on {render_formula(d)}: {e}")
            continue
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        outputs.append(rep.output)
        if rep.output.conclusion != want or not check_proof(rep.output):
            failures.append(f"cut on {render_formula(d)}: wrong or invalid output")
        if elapsed > 30:
            failures.append(f"cut on {render_formula(d)}: {elapsed:.1f}s")
    return failures, instances, outputs, worst, modal


def _nodes(g):
    yield g
    for c in g.children:
        yield from _nodes(c)


@pytest.mark.slow
def test_criterion_7_cut_elimination(record_criterion):
    failures, instances, outputs, worst, modal = criterion_7()
    _record(
        record_criterion, 7, failures,
        f"{len(outputs)}/{len(instances)} cuts eliminated ({modal} with modal cut formulas), slowest {worst:.2f}s",
    )


# ---------------------------------------------------------------- 8

def _all_proofs():
    yield from criterion_1()[1]
    yield from criterion_2()[1]
    yield from criterion_4()[1]
    yield from criterion_5()[1]
    yield from criterion_5()[2]
    yield from criterion_6()[1]
    yield from criterion_6()[2]
    yield from criterion_7()[2]


@pytest.mark.slow
def test_criterion_8_soundness(record_criterion):
    failures, count = [], 0
    for pf in _all_proofs():
        count += 1
        res = check_soundness(pf)
        if not res:
            failures.append(f"{pf.conclusion}: node {res.path} is not valid")
    _record(record_criterion, 8, failures, f"{count} proofs, every node valid under the oracle")


# ---------------------------------------------------------------- 9

def test_criterion_9_qnf(record_criterion):
    rng = random.Random(909)
    sample = [random_formula(rng, rng.randint(1, 12), ("p", "q", "r")) for _ in range(200)]
    failures = [
        render_formula(g) for g in sample
        if not (qnf_equivalent(g, to_cqnf(g)) and qnf_equivalent(g, to_dqnf(g)))
    ]
    smallest = sorted(sample, key=lambda g: (g.size, g.key))[:50]
    failures += [
        f"not S5-equivalent: {render_formula(g)}" for g in smallest
        if not isinstance(oracle_validity(Iff(g, to_cqnf(g).formula())), Valid)
    ]
    _record(record_criterion, 9, failures, "200 formulas quasi-equivalent to both forms; 50 smallest S5-equivalent")


# ---------------------------------------------------------------- 10

HILBERT_K = """\
assumptions: [](p -> q), []p
1: [](p -> q) ; Assumption
2: [](p -> q) -> ([]p -> []q) ; AxK
3: []p -> []q ; MP(1,2)
4: []p ; Assumption
5: []q ; MP(4,3)
"""

HILBERT_NEC = """\
assumptions:
1: [](p -> q) -> ([]p -> []q) ; AxK
2: []([](p -> q) -> ([]p -> []q)) ; Nec(1)
"""

HILBERT_BAD_NEC = """\
assumptions: p
1: p ; Assumption
2: []p ; Nec(1)
"""


def test_criterion_10_hilbert(record_criterion):
    failures = []
    for text in (HILBERT_K, HILBERT_NEC):
        hp = parse_hilbert(text)
        if not check_hilbert(hp):
            failures.append(f"rejected: {check_hilbert(hp)}")
            continue
        pf = translate(hp)
        if pf.conclusion != hp.end_sequent() or not check_proof(pf):
            failures.append(f"translation of {render_formula(hp.conclusion)} is wrong or invalid")
        if not check_soundness(pf):
            failures.append(f"translation of {render_formula(hp.conclusion)} is unsound")
    bad = check_hilbert(parse_hilbert(HILBERT_BAD_NEC))
    if bad or bad.reason != "necessitation on non-theorem":
        failures.append("necessitation on an assumption was accepted")
    _record(record_criterion, 10, failures,
            "5-step K+MP derivation and a necessitation derivation translate to valid cut-free proofs; bad Nec rejected")


# ---------------------------------------------------------------- 11

@pytest.mark.slow
def test_criterion_11_subformula_property(record_criterion):
    proofs = criterion_1()[1] + criterion_2()[1] + criterion_4()[1]
    failures = []
    for pf in proofs:
        bad = subformula_violations(pf)
        if bad:
            failures.append(f"{pf.conclusion}: {sorted(render_formula(g) for g in bad)}")
    _record(record_criterion, 11, failures, f"{len(proofs)} search proofs, 0 violations")
