"""Proof files and renderings: JSON records, indented text trees, bussproofs LaTeX."""
from __future__ import annotations

import json
from typing import Any

from .calculus import Proof, Rule, RuleInstance
from .formula import FormulaSyntaxError, parse_formula, render_formula
from .hypersequent import parse_sequent, render_sequent, render_sequent_latex


class ProofFormatError(ValueError):
    """A proof record is malformed."""


def proof_to_dict(pf: Proof) -> dict[str, Any]:
    inst = pf.instance
    out: dict[str, Any] = {"conclusion": render_sequent(pf.conclusion), "rule": inst.rule.value}
    if inst.principal is not None:
        out["principal"] = render_formula(inst.principal)
        out["side"] = inst.rule.side
    if inst.crown_index is not None:
        out["crown_index"] = inst.crown_index
    out["premises"] = [proof_to_dict(p) for p in pf.premises]
    return out


def proof_from_dict(d: dict[str, Any]) -> Proof:
    try:
        conclusion = parse_sequent(d["conclusion"])
        rule = Rule(d["rule"])
        principal = parse_formula(d["principal"]) if d.get("principal") is not None else None
        premises = tuple(proof_from_dict(p) for p in d.get("premises", ()))
        inst = RuleInstance(rule, principal, d.get("crown_index"))
    except (KeyError, TypeError) as e:
        raise ProofFormatError(f"malformed proof record: {e}") from None
    except FormulaSyntaxError as e:
        raise ProofFormatError(f"bad formula in proof record: {e}") from None
    except ValueError as e:
        raise ProofFormatError(str(e)) from None
    return Proof(conclusion, inst, premises)


def dump_proof(pf: Proof, indent: int | None = 1) -> str:
    return json.dumps(proof_to_dict(pf), indent=indent, ensure_ascii=False)


def load_proof(text: str) -> Proof:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProofFormatError(f"not JSON: {e}") from None
    if not isinstance(data, dict):
        raise ProofFormatError("a proof file holds one JSON object")
    return proof_from_dict(data)


def _label(inst: RuleInstance) -> str:
    if inst.principal is not None:
        return f"{inst.rule.value} {render_formula(inst.principal)}"
    if inst.crown_index is not None:
        return f"{inst.rule.value} {inst.crown_index}"
    return inst.rule.value


def render_tree(pf: Proof, style: str = "ascii") -> str:
    """Conclusion first, premises indented below, each line tagged with its rule."""
    lines: list[str] = []

    def walk(node: Proof, depth: int) -> None:
        lines.append(f"{'  ' * depth}{render_sequent(node.conclusion, style)}   [{_label(node.instance)}]")
        for child in node.premises:
            walk(child, depth + 1)

    walk(pf, 0)
    return "\n".join(lines)


_INF = {0: "UnaryInfC", 1: "UnaryInfC", 2: "BinaryInfC", 3: "TrinaryInfC"}


def render_proof_latex(pf: Proof) -> str:
    """A bussproofs prooftree, one inference per node; initial sequents get an empty axiom line."""
    lines: list[str] = []

    def walk(node: Proof) -> None:
        if not node.premises:
            lines.append(r"\AxiomC{}")
        for child in node.premises:
            walk(child)
        rule = node.instance.rule.value.replace("Dia", r"$\Diamond$").replace("Box", r"$\Box$")
        lines.append(rf"\RightLabel{{\scriptsize {rule}}}")
        lines.append(rf"\{_INF[len(node.premises)]}{{${render_sequent_latex(node.conclusion)}$}}")

    walk(pf)
    return "\n".join([r"\begin{prooftree}", *lines, r"\end{prooftree}"])


__all__ = [
    "ProofFormatError",
    "dump_proof",
    "load_proof",
    "proof_from_dict",
    "proof_to_dict",
    "render_proof_latex",
    "render_tree",
]
