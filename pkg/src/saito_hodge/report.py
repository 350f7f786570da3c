"""Canonical JSON serialization for reports and basis dumps."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from numbers import Rational

from flint import fmpq

from . import __version__
from .kernel import LocQ, Poly, format_rational

SCHEMA = "saito-hodge-report/1"


def poly_terms(p: Poly) -> list:
    """[[exponents, "p/q"], ...] in descending graded-lex order."""
    return [[list(e), format_rational(c)] for e, c in p.terms()]


def to_jsonable(value, names=None):
    """Convert certificates to plain JSON: rationals as "p/q", polynomials as term lists."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, (Rational, fmpq)):
        return format_rational(value)
    if isinstance(value, Poly):
        return {"terms": poly_terms(value), "text": value.to_str(names)}
    if isinstance(value, LocQ):
        return {"num": poly_terms(value.num), "qexp": value.qexp, "text": value.to_str(names)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v, names) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v, names) for v in value]
    if hasattr(value, "coeffs"):
        return [to_jsonable(c, names) for c in value.coeffs]
    return str(value)


def _natural_key(text: str):
    return [(0, int(t), "") if re.fullmatch(r"-?\d+", t) else (1, 0, t) for t in re.findall(r"-?\d+|[^-\d]+|-", text)]


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    passed: bool
    certificate: dict = field(default_factory=dict)
    seconds: float | None = None

    def to_json(self, timings: bool, names=None) -> dict:
        out = {
            "id": self.check_id,
            "anchor": self.anchor,
            "status": "pass" if self.passed else "fail",
            "certificate": to_jsonable(self.certificate, names),
        }
        if timings and self.seconds is not None:
            out["wall_time_s"] = f"{self.seconds:.3f}"
        return out


@dataclass
class Report:
    datum_name: str
    datum_hash: str
    seed: int
    parameters: dict
    records: list = field(default_factory=list)

    def sorted_records(self) -> list[CheckRecord]:
        return sorted(self.records, key=lambda r: _natural_key(r.check_id))

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def first_failure(self) -> CheckRecord | None:
        return next((r for r in self.sorted_records() if not r.passed), None)

    def to_json(self, timings: bool = False, names=None) -> str:
        recs = self.sorted_records()
        doc = {
            "schema": SCHEMA,
            "tool_version": __version__,
            "datum": {"name": self.datum_name, "sha256": self.datum_hash},
            "seed": self.seed,
            "parameters": to_jsonable(self.parameters),
            "checks": [r.to_json(timings, names) for r in recs],
            "summary": {
                "total": len(recs),
                "passed": sum(r.passed for r in recs),
                "failed": sum(not r.passed for r in recs),
            },
        }
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


__all__ = ["SCHEMA", "CheckRecord", "Report", "poly_terms", "to_jsonable"]
