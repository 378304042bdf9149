"""Structured verification reports."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import linalg
from .ratmat import RatMat
from .scalars import QI, format_exact


@dataclass
class Check:
    check_id: str
    anchor: str
    residual: float
    tol: float
    passed: bool
    samples: list = field(default_factory=list)
    detail: str = ""


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    seed: int | None = None
    input_hash: str = ""
    wall_time: float = 0.0
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    def add(self, check_id: str, anchor: str, residual: float, tol: float = 0.0,
            samples=(), detail: str = "", passed: bool | None = None) -> Check:
        residual = float(residual)
        if passed is None:
            passed = bool(residual <= tol)
        c = Check(check_id, anchor, residual, float(tol), passed,
                  [_sample_repr(s) for s in samples], detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.check_id, c.anchor, c.residual, c.tol,
                                     c.passed, list(c.samples), c.detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def max_residual(self, prefix: str = "") -> float:
        vals = [c.residual for c in self.checks if c.check_id.startswith(prefix)]
        return max(vals, default=0.0)

    def finish(self) -> "Report":
        self.wall_time = time.perf_counter() - self._t0
        return self

    def to_dict(self, include_time: bool = True) -> dict:
        out = {
            "suite": self.suite,
            "seed": self.seed,
            "input_hash": self.input_hash,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }
        if include_time:
            out["wall_time"] = round(self.wall_time, 6)
        return out

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_time), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["check_id", "anchor", "residual", "tol", "passed"])
        for c in self.checks:
            w.writerow([c.check_id, c.anchor, repr(c.residual), repr(c.tol), c.passed])
        return buf.getvalue()

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"{flag} {c.check_id}: residual={c.residual:.3e} tol={c.tol:.1e}")
        return "\n".join(lines)


def content_hash(*parts) -> str:
    h = hashlib.sha1()
    for p in parts:
        h.update(json.dumps(p, sort_keys=True, default=str).encode())
    return h.hexdigest()


def _sample_repr(s):
    if isinstance(s, QI):
        return format_exact(s)
    if isinstance(s, complex):
        return [s.real, s.imag]
    if isinstance(s, (tuple, list)):
        return [_sample_repr(x) for x in s]
    if isinstance(s, (int, float, str)) or s is None:
        return s
    return str(s)


def residual_norm(x, probes=None) -> float:
    """Sup-norm of a residual: array, RatMat (zero test then probing) or scalar."""
    if isinstance(x, RatMat):
        if x.backend == "exact" and x.is_zero():
            return 0.0
        probes = probes or [QI(7, 3) / 11, QI(-13, 5) / 7, QI(29, -2) / 3]
        vals = []
        for p in probes:
            try:
                vals.append(linalg.max_abs(x(p if x.backend == "exact" else complex(p))))
            except ArithmeticError:
                continue
        val = max(vals, default=0.0)
        if val == 0.0 and not x.is_zero():
            # nonzero rational function vanishing at every probe
            val = max(abs(complex(c)) for f in x.a.flat for c in f.num.c) if x.a.size else 0.0
        return val
    if isinstance(x, np.ndarray):
        return linalg.max_abs(x)
    return abs(complex(x))
