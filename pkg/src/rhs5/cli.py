"""Command-line front end.

Exit status: 0 success (or provable as expected), 1 refuted or mismatch,
2 usage or input error, 3 search or transformation budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import transform as T
from .calculus import Rule, RuleInstance, check_proof
from .formula import FormulaSyntaxError, is_atom, parse_formula
from .hilbert import HilbertSyntaxError, check_hilbert, parse_hilbert, translate
from .hypersequent import CrownComponent, RootedHypersequent, interpretation, parse_sequent, render_sequent
from .qnf import to_cqnf, to_dqnf
from .search import BudgetExceeded, NotProvable, Provable, SearchBudget, prove
from .semantics import Countermodel, OracleResourceError, Valid, oracle_validity, render_countermodel
from .serialize import ProofFormatError, dump_proof, load_proof, render_proof_latex, render_tree

OK, REFUTED, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_goal(text: str) -> RootedHypersequent:
    """A sequent, or a bare formula read as => formula."""
    if "=>" in text:
        return parse_sequent(text)
    return RootedHypersequent((), (parse_formula(text),))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _emit_proof(pf, args, out) -> None:
    if getattr(args, "json", False):
        print(dump_proof(pf), file=out)
    elif getattr(args, "latex", False):
        print(render_proof_latex(pf), file=out)
    else:
        print(render_tree(pf), file=out)


# --------------------------------------------------------------- subcommands

def cmd_prove(args, out) -> int:
    goal = parse_goal(args.sequent)
    budget = SearchBudget(max_depth=args.max_depth, max_visited=args.max_visited)
    verdict = prove(goal, budget)
    if isinstance(verdict, BudgetExceeded):
        print(f"budget exceeded: {verdict.reason}", file=out)
        return BUDGET
    if isinstance(verdict, NotProvable):
        print(f"not provable: {render_sequent(goal)}", file=out)
        if args.oracle:
            cm = oracle_validity(interpretation(goal))
            if isinstance(cm, Countermodel):
                print(render_countermodel(cm), file=out)
            else:
                print("oracle disagrees: the sequent is valid", file=out)
        return REFUTED
    pf = verdict.proof
    checked = check_proof(pf)
    if not checked:
        print(f"internal error: emitted proof fails the checker: {checked}", file=sys.stderr)
        return REFUTED
    if pf.conclusion != goal:
        print(f"note: proved the constant-simplified goal {render_sequent(pf.conclusion)}", file=out)
    if args.oracle and not isinstance(oracle_validity(interpretation(goal)), Valid):
        print("oracle disagrees: the sequent has a countermodel", file=out)
        return REFUTED
    _emit_proof(pf, args, out)
    return OK


def cmd_check(args, out) -> int:
    pf = load_proof(_read(args.prooffile))
    result = check_proof(pf)
    if result:
        print(f"ok: {render_sequent(pf.conclusion)} (height {pf.height}, {pf.size} nodes)", file=out)
        return OK
    print(f"invalid: {result}", file=out)
    return REFUTED


def cmd_oracle(args, out) -> int:
    f = parse_formula(args.formula)
    try:
        verdict = oracle_validity(f)
    except OracleResourceError as e:
        print(str(e), file=out)
        return BUDGET
    if isinstance(verdict, Valid):
        print(json.dumps({"status": "valid"}) if args.json else "valid", file=out)
        return OK
    if args.json:
        print(json.dumps({"status": "countermodel", **verdict.to_dict()}), file=out)
    else:
        print(render_countermodel(verdict), file=out)
    return REFUTED


def cmd_qnf(args, out) -> int:
    f = parse_formula(args.formula)
    if args.cqnf:
        print(to_cqnf(f), file=out)
    elif args.dqnf:
        print(to_dqnf(f), file=out)
    else:
        print(f"CQNF: {to_cqnf(f)}", file=out)
        print(f"DQNF: {to_dqnf(f)}", file=out)
    return OK


DESCRIPTOR_HELP = """transform descriptors:
  merge-crown:I,J        fuse crown components I and J
  merge-root:I           fold crown component I into the root
  weaken-left:F          add formula F to the antecedent
  weaken-right:F         add formula F to the succedent
  weaken-new:COMP        append a crown component, e.g. "p => q"
  weaken-crown:I:COMP    add the atoms of COMP to component I
  contract-left:F        contract a duplicate F in the antecedent
  contract-right:F       contract a duplicate F in the succedent
  contract-crown-left:I:P / contract-crown-right:I:P
  contract-external:I,J  drop component J, a copy of component I
  invert:RULE[:F|:K]     invert RULE on principal F (or crown index K)
  strip-dia:A            <>A on the left becomes A
  strip-box:A            []A on the right becomes A
  cut:FILE:D             cut on D against the proof in FILE (D on its left)
"""


def _component(text: str) -> CrownComponent:
    s = parse_sequent(text)
    if s.crown or not all(is_atom(f) for f in s.formulas()):
        raise UsageError(f"not a crown component: {text}")
    return CrownComponent(s.ante, s.succ)


def _ints(text: str, n: int) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected {n} integer(s), got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"expected {n} integer(s), got {text!r}")
    return vals


def apply_descriptor(pf, descriptor: str) -> list[T.TransformReport]:
    name, _, arg = descriptor.partition(":")
    if name == "merge-crown":
        return [T.merge_crown(pf, *_ints(arg, 2))]
    if name == "merge-root":
        return [T.merge_root(pf, *_ints(arg, 1))]
    if name == "weaken-left":
        return [T.weaken(pf, T.LeftRoot(parse_formula(arg)))]
    if name == "weaken-right":
        return [T.weaken(pf, T.RightRoot(parse_formula(arg)))]
    if name == "weaken-new":
        c = _component(arg)
        return [T.weaken(pf, T.NewComponent(c.ante.items, c.succ.items))]
    if name == "weaken-crown":
        i, _, comp = arg.partition(":")
        c = _component(comp)
        return [T.weaken(pf, T.CrownAtoms(_ints(i, 1)[0], c.ante.items, c.succ.items))]
    if name == "contract-left":
        return [T.contract(pf, T.LeftRoot(parse_formula(arg)))]
    if name == "contract-right":
        return [T.contract(pf, T.RightRoot(parse_formula(arg)))]
    if name in ("contract-crown-left", "contract-crown-right"):
        i, _, atom = arg.partition(":")
        cls = T.CrownLeft if name.endswith("left") else T.CrownRight
        return [T.contract(pf, cls(_ints(i, 1)[0], parse_formula(atom)))]
    if name == "contract-external":
        return [T.contract(pf, T.External(*_ints(arg, 2)))]
    if name == "invert":
        rule_name, _, rest = arg.partition(":")
        try:
            rule = Rule(rule_name)
        except ValueError:
            raise UsageError(f"unknown rule {rule_name!r}") from None
        if rule is Rule.Exch:
            inst = RuleInstance(rule, crown_index=_ints(rest, 1)[0])
        else:
            inst = RuleInstance(rule, parse_formula(rest))
        return T.invert(pf, inst)
    if name == "strip-dia":
        return [T.strip_modality(pf, T.LeftDia(parse_formula(arg)))]
    if name == "strip-box":
        return [T.strip_modality(pf, T.RightBox(parse_formula(arg)))]
    if name == "cut":
        path, _, d = arg.partition(":")
        right = load_proof(_read(path))
        return [T.eliminate_cut(pf, right, parse_formula(d))]
    raise UsageError(f"unknown transform descriptor {descriptor!r}\n{DESCRIPTOR_HELP}")


def cmd_transform(args, out) -> int:
    pf = load_proof(_read(args.prooffile))
    if not check_proof(pf):
        print(f"input proof is invalid: {check_proof(pf)}", file=out)
        return REFUTED
    try:
        reports = apply_descriptor(pf, args.descriptor)
    except T.TransformError as e:
        print(f"transform failed: {e}", file=out)
        return BUDGET if "budget" in str(e) else REFUTED
    docs = []
    for n, r in enumerate(reports):
        ok = check_proof(r.output)
        print(
            f"premise {n}: {render_sequent(r.output.conclusion)}  height {r.height_in} -> {r.height_out}, "
            f"{pf.size} -> {r.output.size} nodes, check {'ok' if ok else 'FAILED'}",
            file=sys.stderr if args.out is None else out,
        )
        docs.append(dump_proof(r.output))
    text = docs[0] if len(docs) == 1 else "[" + ",\n".join(docs) + "]"
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text, file=out)
    return OK


def cmd_hilbert(args, out) -> int:
    hp = parse_hilbert(_read(args.prooffile))
    verdict = check_hilbert(hp)
    if not verdict:
        print(f"invalid Hilbert derivation: {verdict}", file=out)
        return REFUTED
    try:
        pf = translate(hp)
    except T.TransformError as e:
        print(f"translation failed: {e}", file=out)
        return BUDGET if "budget" in str(e) else REFUTED
    result = check_proof(pf)
    if not result:
        print(f"internal error: translated proof fails the checker: {result}", file=sys.stderr)
        return REFUTED
    print(f"# {render_sequent(pf.conclusion)} (height {pf.height}, {pf.size} nodes)", file=out)
    _emit_proof(pf, args, out)
    return OK


# -------------------------------------------------------------------- corpus

@dataclass(frozen=True)
class CorpusEntry:
    id: str
    expected: str  # provable | notProvable | unknown
    goal: RootedHypersequent


EXPECTED = ("provable", "notProvable", "unknown")


def parse_corpus(text: str) -> list[CorpusEntry]:
    entries: list[CorpusEntry] = []
    ids: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(";", 2)]
        if len(parts) != 3:
            raise UsageError(f"corpus line {lineno}: expected 'id ; expected ; sequent'")
        ident, expected, goal = parts
        if expected not in EXPECTED:
            raise UsageError(f"corpus line {lineno}: expected one of {', '.join(EXPECTED)}")
        if ident in ids:
            raise UsageError(f"corpus line {lineno}: duplicate id {ident!r}")
        ids.add(ident)
        try:
            entries.append(CorpusEntry(ident, expected, parse_goal(goal)))
        except FormulaSyntaxError as e:
            raise UsageError(f"corpus line {lineno}: {e}") from None
    return entries


def _run_entry(entry: CorpusEntry, max_depth: int, max_visited: int) -> tuple[str, str, float, bool]:
    start = time.perf_counter()
    verdict = prove(entry.goal, SearchBudget(max_depth, max_visited))
    elapsed = time.perf_counter() - start
    checked = True
    if isinstance(verdict, Provable):
        checked = bool(check_proof(verdict.proof))
    return entry.id, verdict.status, elapsed, checked


def cmd_corpus(args, out) -> int:
    entries = parse_corpus(_read(args.file))
    jobs = [(e, args.max_depth, args.max_visited) for e in entries]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_entry, *zip(*jobs))) if jobs else []
    else:
        results = [_run_entry(*j) for j in jobs]
    counts = {"provable": 0, "notProvable": 0, "budgetExceeded": 0}
    mismatches = 0
    for entry, (ident, status, elapsed, checked) in zip(entries, results):
        counts[status] += 1
        bad = (entry.expected != "unknown" and status != "budgetExceeded" and status != entry.expected) or not checked
        mismatches += bad
        mark = "MISMATCH" if bad else "ok"
        print(f"{ident:<24} expected {entry.expected:<12} got {status:<15} {elapsed:8.3f}s  {mark}", file=out)
    print("-" * 72, file=out)
    print(
        f"entries {len(entries)}  provable {counts['provable']}  notProvable {counts['notProvable']}  "
        f"budgetExceeded {counts['budgetExceeded']}  mismatches {mismatches}",
        file=out,
    )
    if mismatches:
        return REFUTED
    if counts["budgetExceeded"]:
        return BUDGET
    return OK


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rhs5", description="Rooted hypersequent prover for S5.")
    sub = p.add_subparsers(dest="command", required=True)

    def budget_flags(q):
        q.add_argument("--max-depth", type=int, default=200)
        q.add_argument("--max-visited", type=int, default=500_000)

    q = sub.add_parser("prove", help="search for a proof of a sequent or formula")
    q.add_argument("sequent")
    budget_flags(q)
    fmt = q.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--latex", action="store_true")
    q.add_argument("--oracle", action="store_true", help="cross-check the verdict semantically")
    q.set_defaults(func=cmd_prove)

    q = sub.add_parser("check", help="check a proof file")
    q.add_argument("prooffile")
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("oracle", help="decide validity by model enumeration")
    q.add_argument("formula")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_oracle)

    q = sub.add_parser("qnf", help="quasi-normal forms")
    q.add_argument("formula")
    g = q.add_mutually_exclusive_group()
    g.add_argument("--cqnf", action="store_true")
    g.add_argument("--dqnf", action="store_true")
    q.set_defaults(func=cmd_qnf)

    q = sub.add_parser("transform", help="apply an admissible rule to a proof file",
                       epilog=DESCRIPTOR_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    q.add_argument("prooffile")
    q.add_argument("descriptor")
    q.add_argument("--out", help="write the resulting proof here")
    q.set_defaults(func=cmd_transform)

    q = sub.add_parser("hilbert", help="check and translate a Hilbert derivation")
    q.add_argument("prooffile")
    fmt = q.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--latex", action="store_true")
    q.set_defaults(func=cmd_hilbert)

    q = sub.add_parser("corpus", help="run a corpus of goals")
    q.add_argument("file")
    q.add_argument("--jobs", type=int, default=1)
    budget_flags(q)
    q.set_defaults(func=cmd_corpus)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args, out)
    except (UsageError, FormulaSyntaxError, HilbertSyntaxError, ProofFormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
