"""Residual reports produced by the law checkers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    residual: float
    tol: float
    witness: object = None
    # "le": residual <= tol passes; "ge": residual >= tol passes
    sense: str = "le"

    @property
    def passed(self) -> bool:
        if math.isnan(self.residual):
            return False
        if self.sense == "ge":
            return self.residual >= self.tol
        return self.residual <= self.tol

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, tuple):
            w = list(w)
        return {
            "name": self.name,
            "residual": float(self.residual),
            "tol": float(self.tol),
            "sense": self.sense,
            "passed": self.passed,
            "witness": w,
        }


@dataclass
class LawReport:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def violations(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def extend(self, other: "LawReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.residual, c.tol, c.witness, c.sense))

    def summary(self) -> str:
        bad = self.violations
        if not bad:
            return f"{self.title}: ok"
        parts = [f"{c.name} residual={c.residual:.3g} (tol {c.tol:g}) at {c.witness}" for c in bad]
        return f"{self.title}: " + "; ".join(parts)

    def to_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": [c.to_dict() for c in self.checks]}
