"""Law-check reports shared by every verification routine.

A report serializes to the JSON shape::

    {"suite": str,
     "checks": [{"law": str, "status": "pass"|"fail",
                 "witness": object|null, "max_deviation": number}],
     "seed": int, "samples": int}

Reports hold no wall-clock data, so equal seeds give byte-identical JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from . import exact


@dataclass
class LawCheck:
    law: str
    status: str = "pass"
    witness: dict | None = None
    max_deviation: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def record(self, ok: bool, deviation: float = 0.0, witness=None) -> bool:
        """Fold one observation in; the first failing witness is kept.

        ``witness`` may be a zero-argument callable, evaluated only on failure.
        """
        if deviation > self.max_deviation:
            self.max_deviation = float(deviation)
        if not ok and self.status == "pass":
            self.status = "fail"
            self.witness = witness() if callable(witness) else witness
        return ok

    def to_dict(self) -> dict:
        return {
            "law": self.law,
            "status": self.status,
            "witness": self.witness,
            "max_deviation": self.max_deviation,
        }


@dataclass
class PropertyReport:
    suite: str
    seed: int = 0
    samples: int = 0
    checks: list[LawCheck] = field(default_factory=list)

    def law(self, name: str) -> LawCheck:
        """Return the check named ``name``, creating it on first use."""
        for c in self.checks:
            if c.law == name:
                return c
        c = LawCheck(name)
        self.checks.append(c)
        return c

    def __getitem__(self, name: str) -> LawCheck:
        for c in self.checks:
            if c.law == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.law == name for c in self.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[LawCheck]:
        return [c for c in self.checks if not c.passed]

    def merge(self, other: "PropertyReport", prefix: str | None = None) -> "PropertyReport":
        """Append ``other``'s checks, optionally namespaced as ``prefix:law``."""
        for c in other.checks:
            name = f"{prefix}:{c.law}" if prefix else c.law
            self.checks.append(LawCheck(name, c.status, c.witness, c.max_deviation))
        self.samples = max(self.samples, other.samples)
        return self

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "checks": [c.to_dict() for c in self.checks],
            "seed": self.seed,
            "samples": self.samples,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, default=_json_default)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            line = f"[{c.status.upper()}] {self.suite}:{c.law} (max deviation {c.max_deviation:g})"
            if c.witness is not None:
                line += f" witness={json.dumps(c.witness, default=_json_default)}"
            out.append(line)
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def _json_default(obj):
    if isinstance(obj, (Fraction, exact.Real)):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


# -- comparisons used by the law suites -------------------------------------
#
# ``tol == 0`` means exact: operands are ints/Fractions/Reals and the verdict
# is decided exactly. Deviations are reported as floats.


def _dev(a, b) -> float:
    return abs(float(a - b))


def equal(a, b, tol: float = 0.0) -> tuple[bool, float]:
    """(a == b, |a - b|), exact when ``tol`` is zero."""
    if tol == 0:
        if exact.compare(a, b) == 0:
            return True, 0.0
        return False, _dev(a, b)
    d = abs(float(a) - float(b))
    return d <= tol, d


def at_least(a, b, tol: float = 0.0) -> tuple[bool, float]:
    """(a >= b, size of the violation)."""
    if tol == 0:
        if exact.compare(a, b) >= 0:
            return True, 0.0
        return False, _dev(a, b)
    d = float(b) - float(a)
    return d <= tol, max(d, 0.0)


def greater(a, b, tol: float = 0.0) -> tuple[bool, float]:
    """(a > b, size of the violation)."""
    if tol == 0:
        if exact.compare(a, b) > 0:
            return True, 0.0
        return False, _dev(a, b)
    d = float(b) - float(a)
    return d < 0, max(d, 0.0)


def fmt_witness(**items: Any) -> dict:
    """Witness dict with every value rendered as a string."""
    return {k: (v if isinstance(v, (int, str)) and not isinstance(v, bool) else str(v)) for k, v in items.items()}


def dyadic_oscillations(fn, lo, hi, steps: Iterable[int]) -> list[float]:
    """Max |fn(t_{k+1}) - fn(t_k)| on uniform grids of ``lo..hi`` with each step count."""
    out = []
    for n in steps:
        h = (hi - lo) / n
        vals = [float(fn(lo + k * h)) for k in range(n + 1)]
        out.append(max(abs(vals[k + 1] - vals[k]) for k in range(n)))
    return out


def oscillation_shrinks(oscs: list[float]) -> bool:
    """True when each refinement strictly lowers the oscillation (or it is already 0)."""
    return all(fine < coarse or coarse == 0.0 for coarse, fine in zip(oscs, oscs[1:]))
