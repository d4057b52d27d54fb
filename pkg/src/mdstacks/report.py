"""Machine-readable reports (``--json``)."""

from __future__ import annotations

import json
from typing import Any, Optional, Sequence

from . import __version__
from .abelian import AbelianGroup
from .document import serialize_stack
from .stack import Diagnostic, DivisorRoot, RootRecord, StackData

SCHEMA = 1


def group_json(G: AbelianGroup) -> dict:
    return {"torsion": list(G.torsion), "free_rank": G.free_rank, "factors": list(G.factors), "text": str(G)}


def stack_json(X: StackData) -> dict:
    order = list(X.cox.names)
    return {
        "name": X.name,
        "grading": group_json(X.grading),
        "variables": [{"name": v, "degree": list(d)} for v, d in X.cox.variables],
        "relations": [p.format(order) for p in X.cox.relations],
        "irrelevant": [p.format(order) for p in X.cox.irrelevant],
        "document": serialize_stack(X),
    }


def record_json(rec: RootRecord) -> dict:
    if isinstance(rec.kind, DivisorRoot):
        kind = {"kind": "divisor", "section": str(rec.kind.section), "variable": rec.variable}
    else:
        kind = {"kind": "line-bundle", "degree": list(rec.kind.degree)}
    return {
        **kind,
        "order": rec.order,
        "tautological": list(rec.tautological),
        "datum_class": list(rec.datum_class),
    }


def diagnostic_json(d: Diagnostic) -> dict:
    out = {"check": d.check, "verdict": d.verdict.value, "detail": d.detail}
    if d.data:
        out["data"] = d.data
    return out


def make_report(
    command: str,
    inputs: Sequence[str],
    verdict: str,
    result: Optional[dict] = None,
    diagnostics: Sequence[Diagnostic] = (),
    provenance: Sequence[RootRecord] = (),
    warnings: Sequence[str] = (),
) -> dict:
    return {
        "schema": SCHEMA,
        "tool": {"name": "mdstacks", "version": __version__},
        "command": command,
        "inputs": list(inputs),
        "verdict": verdict,
        "result": result or {},
        "diagnostics": [diagnostic_json(d) for d in diagnostics],
        "provenance": [record_json(r) for r in provenance],
        "warnings": list(warnings),
    }


def dumps(report: Any) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
