"""Check records and reports shared by the verification suites and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import sympy as sp

from .scalar import ZeroDecision, ZeroStatus

__all__ = ["CheckRecord", "Report", "status_of", "PASS_STATUSES"]

TOOL_VERSION = "0.1.0"

# record statuses, ordered worst-first for aggregation
_SEVERITY = ["fail", "undecided", "skipped", "probabilistic-pass", "exact-pass"]
PASS_STATUSES = {"exact-pass", "probabilistic-pass", "skipped"}


def status_of(decisions):
    """Aggregate a list of ZeroDecision into a record status."""
    worst = "exact-pass"

    def rank(s):
        return _SEVERITY.index(s)

    for dec in decisions:
        if dec.status is ZeroStatus.NONZERO:
            s = "fail"
        elif dec.status is ZeroStatus.UNDECIDED:
            s = "undecided"
        elif dec.status is ZeroStatus.PROBABILISTIC:
            s = "probabilistic-pass"
        else:
            s = "exact-pass"
        if rank(s) < rank(worst):
            worst = s
    return worst


@dataclass
class CheckRecord:
    check_id: str
    status: str
    detail: str = ""
    residuals: list = field(default_factory=list)
    whitelisted: bool = False

    def first_residual(self):
        for dec in self.residuals:
            if isinstance(dec, ZeroDecision) and not dec.is_zero:
                return dec.residual
        return None

    def to_dict(self, include_residuals=True):
        out = {"check": self.check_id, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if self.whitelisted:
            out["whitelisted"] = True
        if include_residuals and self.status == "fail":
            r = self.first_residual()
            out["residual"] = sp.sstr(r) if r is not None else None
        return out


class Report:
    """An ordered collection of check records with a stable JSON form."""

    def __init__(self, title, input_digest=None):
        self.title = title
        self.input_digest = input_digest
        self.records = []
        self.timing = None  # seconds, opt-in; kept out of golden output

    def add(self, record: CheckRecord):
        self.records.append(record)
        return record

    def extend(self, other: "Report"):
        self.records.extend(other.records)
        return self

    def skip(self, check_id, reason):
        self.add(CheckRecord(check_id, "skipped", detail=reason))

    @property
    def failed(self):
        return [r for r in self.records if r.status == "fail" and not r.whitelisted]

    @property
    def undecided(self):
        return [r for r in self.records if r.status == "undecided"]

    def ok(self, strict=False):
        if self.failed:
            return False
        if strict and self.undecided:
            return False
        return True

    def to_dict(self):
        return {
            "tool": "tractorcalc",
            "version": TOOL_VERSION,
            "title": self.title,
            "input_digest": self.input_digest,
            "timing": self.timing,
            "checks": [r.to_dict() for r in self.records],
            "summary": {
                "total": len(self.records),
                "exact_pass": sum(1 for r in self.records if r.status == "exact-pass"),
                "probabilistic_pass": sum(
                    1 for r in self.records if r.status == "probabilistic-pass"
                ),
                "fail": len(self.failed),
                "undecided": len(self.undecided),
                "skipped": sum(1 for r in self.records if r.status == "skipped"),
            },
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self):
        lines = [f"== {self.title} =="]
        if self.input_digest:
            lines.append(f"input: {self.input_digest}")
        width = max((len(r.check_id) for r in self.records), default=0)
        for r in self.records:
            line = f"  {r.check_id.ljust(width)}  {r.status}"
            if r.detail:
                line += f"  ({r.detail})"
            if r.status == "fail":
                res = r.first_residual()
                if res is not None:
                    line += f"  residual: {sp.sstr(res)}"
            lines.append(line)
        s = self.to_dict()["summary"]
        lines.append(
            f"  -- {s['total']} checks: {s['exact_pass']} exact, "
            f"{s['probabilistic_pass']} probabilistic, {s['fail']} failed, "
            f"{s['undecided']} undecided, {s['skipped']} skipped"
        )
        return "\n".join(lines) + "\n"
