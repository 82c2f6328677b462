"""Report -> plain data, and a JSON writer with 17-significant-digit floats."""

from __future__ import annotations

import json
import math
from dataclasses import asdict

from .classes import MembershipVerdict
from .hadamard import InequalityReport
from .means import MeanChain, PropositionReport


def fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def dumps(obj, indent: int = 2) -> str:
    """JSON text; floats always carry 17 significant digits."""
    parts: list[str] = []

    def emit(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, bool) or o is None:
            parts.append(json.dumps(o))
        elif isinstance(o, int):
            parts.append(str(o))
        elif isinstance(o, float):
            parts.append(fmt_float(o))
        elif isinstance(o, str):
            parts.append(json.dumps(o))
        elif isinstance(o, dict):
            if not o:
                parts.append("{}")
                return
            parts.append("{\n")
            for i, (k, v) in enumerate(o.items()):
                parts.append(f"{pad}{json.dumps(str(k))}: ")
                emit(v, level + 1)
                parts.append(",\n" if i < len(o) - 1 else "\n")
            parts.append(end + "}")
        elif isinstance(o, (list, tuple)):
            if not o:
                parts.append("[]")
                return
            parts.append("[\n")
            for i, v in enumerate(o):
                parts.append(pad)
                emit(v, level + 1)
                parts.append(",\n" if i < len(o) - 1 else "\n")
            parts.append(end + "]")
        elif hasattr(o, "item"):  # numpy scalar
            emit(o.item(), level)
        else:
            raise TypeError(f"cannot serialize {type(o).__name__}")

    emit(obj, 0)
    return "".join(parts) + "\n"


def verdict_dict(v: MembershipVerdict) -> dict:
    return {
        "kind": "membership",
        "class": v.spec_label,
        "status": v.status,
        "max_defect": v.max_defect,
        "tolerance": v.tolerance,
        "grid": list(v.grid),
        "evaluations": v.evaluations,
        "partial": v.partial,
        "min_f": v.min_f,
        "negative_at": v.negative_at,
        "witness": asdict(v.witness) if v.witness is not None else None,
    }


def inequality_dict(r: InequalityReport) -> dict:
    return {
        "kind": "inequality",
        "theorem": r.theorem,
        "parameters": dict(r.parameters),
        "terms": [{"label": t.label, "value": t.value, "error": t.error} for t in r.terms],
        "comparisons": [
            {"lhs": c.lhs, "rhs": c.rhs, "margin": c.margin, "slack": c.slack, "holds": c.holds}
            for c in r.comparisons
        ],
        "holds": r.holds,
        "converged": r.converged,
        "hypothesis_established": r.hypothesis_established,
        "hypotheses": [verdict_dict(v) for v in r.hypotheses],
        "notes": list(r.notes),
    }


def chain_dict(c: MeanChain) -> dict:
    return {
        "kind": "mean_chain",
        "a": c.a,
        "b": c.b,
        "values": dict(c.values),
        "comparisons": [
            {"lhs": lo, "rhs": hi, "margin": m, "holds": ok} for lo, hi, m, ok in c.comparisons
        ],
        "holds": c.holds,
    }


def proposition_dict(p: PropositionReport) -> dict:
    return {
        "kind": "proposition",
        "proposition": p.proposition,
        "a": p.a,
        "b": p.b,
        "s": p.s,
        "theorem": p.theorem,
        "ln_identric": p.ln_identric,
        "ln_identric_quadrature": p.ln_identric_quadrature,
        "quadrature_error": p.quadrature_error,
        "left_printed": p.left_printed,
        "right_printed": p.right_printed,
        "left_derived": p.left_derived,
        "right_derived": p.right_derived,
        "holds_as_printed": p.holds_as_printed,
        "holds_as_derived": p.holds_as_derived,
        "hypothesis_established": p.hypothesis_established,
        "hypothesis": verdict_dict(p.hypothesis) if p.hypothesis is not None else None,
    }
