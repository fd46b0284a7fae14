"""Certificate records.

A Certificate is the exchange format of every pipeline in the package: a
claim identifier, the parameters it was run with, a list of enclosure-level
checks, and an honesty grade distinguishing closed-form inequality proofs
from finite-depth set evidence.  Serialization is deterministic except for
wall_time_ms, which is the schema's designated timing field and always
rendered last.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .realnum import Enclosure

GRADE_PROVED = "proved-inequality"
GRADE_EVIDENCE = "finite-depth-evidence"

STATUS_CERTIFIED = "certified"
STATUS_FAILED = "failed"
STATUS_UNCERTAIN = "uncertain"


@dataclass
class Check:
    """One enclosure-certified comparison inside a Certificate."""
    name: str
    lhs: Optional[Enclosure]
    rhs: Optional[Enclosure]
    status: str
    margin: Optional[Enclosure] = None
    note: str = ""

    def to_json_dict(self) -> dict:
        def bounds(e):
            if e is None:
                return None
            lo, hi = e.float_bounds()
            return [lo, hi]

        out = {
            "name": self.name,
            "lhs": bounds(self.lhs),
            "rhs": bounds(self.rhs),
            "status": self.status,
        }
        if self.margin is not None:
            out["margin"] = bounds(self.margin)
        if self.note:
            out["note"] = self.note
        return out


def check_ge(name: str, lhs: Enclosure, rhs: Enclosure, note: str = "") -> Check:
    """Certified `lhs >= rhs` comparison, fail-closed on overlap."""
    r = lhs.ge(rhs)
    status = STATUS_CERTIFIED if r is True else (STATUS_FAILED if r is False else STATUS_UNCERTAIN)
    return Check(name=name, lhs=lhs, rhs=rhs, status=status, margin=lhs - rhs, note=note)


def check_le(name: str, lhs: Enclosure, rhs: Enclosure, note: str = "") -> Check:
    r = lhs.le(rhs)
    status = STATUS_CERTIFIED if r is True else (STATUS_FAILED if r is False else STATUS_UNCERTAIN)
    return Check(name=name, lhs=lhs, rhs=rhs, status=status, margin=rhs - lhs, note=note)


def check_gt(name: str, lhs: Enclosure, rhs: Enclosure, note: str = "") -> Check:
    r = lhs.gt(rhs)
    status = STATUS_CERTIFIED if r is True else (STATUS_FAILED if r is False else STATUS_UNCERTAIN)
    return Check(name=name, lhs=lhs, rhs=rhs, status=status, margin=lhs - rhs, note=note)


def check_lt(name: str, lhs: Enclosure, rhs: Enclosure, note: str = "") -> Check:
    r = lhs.lt(rhs)
    status = STATUS_CERTIFIED if r is True else (STATUS_FAILED if r is False else STATUS_UNCERTAIN)
    return Check(name=name, lhs=lhs, rhs=rhs, status=status, margin=rhs - lhs, note=note)


def check_consistent(name: str, lhs: Enclosure, rhs: Enclosure, note: str = "") -> Check:
    """Consistency-with-equality check for two routes to the same real.

    Exact equality of two independently computed enclosures is never
    decidable numerically, so the certified outcome here is the refutable
    one: FAILED when the enclosures are provably different (disjoint),
    CERTIFIED when they overlap, i.e. the computations are consistent at
    working precision.
    """
    ok = lhs.intersects(rhs)
    status = STATUS_CERTIFIED if ok else STATUS_FAILED
    return Check(name=name, lhs=lhs, rhs=rhs, status=status, margin=lhs - rhs, note=note)


def check_flag(name: str, ok: Optional[bool], note: str = "") -> Check:
    status = STATUS_CERTIFIED if ok is True else (STATUS_FAILED if ok is False else STATUS_UNCERTAIN)
    return Check(name=name, lhs=None, rhs=None, status=status, note=note)


@dataclass
class Certificate:
    claim: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    evidence_depth: Optional[int] = None
    grade: str = GRADE_PROVED
    wall_time_ms: float = 0.0

    @property
    def certified(self) -> bool:
        return bool(self.checks) and all(c.status == STATUS_CERTIFIED for c in self.checks)

    def to_json_dict(self) -> dict:
        # deterministic field order; wall_time_ms intentionally last so that
        # everything before it is byte-stable across identical runs
        return {
            "claim": self.claim,
            "params": self.params,
            "checks": [c.to_json_dict() for c in self.checks],
            "evidence_depth": self.evidence_depth,
            "grade": self.grade,
            "certified": self.certified,
            "wall_time_ms": self.wall_time_ms,
        }
