"""Continuous t-norms on [0, 1].

Built-ins are ``min``, ``product`` and ``lukasiewicz``; a ``tabulated`` t-norm
is given by values on an (r+1) x (r+1) grid and extended bilinearly.
Arithmetic is exact on Fractions (and on :class:`gyrofuzz.exact.Real`);
``exact=False`` switches an instance to floats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact
from .report import PropertyReport, fmt_witness, oscillation_shrinks

KINDS = ("min", "product", "lukasiewicz", "tabulated")


class TNormConfigError(ValueError):
    pass


def unit_value(v):
    """Validate ``v`` as a member of [0, 1] and return it unchanged."""
    if isinstance(v, float):
        if not (0.0 <= v <= 1.0):
            raise ValueError(f"{v} is not in [0, 1]")
        return v
    if isinstance(v, (int, Fraction, exact.Real)):
        if exact.compare(v, 0) < 0 or exact.compare(v, 1) > 0:
            raise ValueError(f"{v} is not in [0, 1]")
        return v
    raise TypeError(f"unsupported unit value type {type(v).__name__}")


@dataclass(frozen=True)
class TNorm:
    kind: str
    table: tuple[tuple[Fraction, ...], ...] | None = None
    exact: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise TNormConfigError(f"unknown t-norm kind {self.kind!r}")
        if self.table is not None:
            r = len(self.table) - 1
            if r < 1 or any(len(row) != r + 1 for row in self.table):
                raise TNormConfigError("tabulated t-norm needs an (r+1)x(r+1) table with r >= 1")

    @property
    def name(self) -> str:
        return self.kind

    @property
    def resolution(self) -> int | None:
        return None if self.table is None else len(self.table) - 1

    def __call__(self, a, b):
        return tnorm_eval(self, a, b)


MIN = TNorm("min")
PRODUCT = TNorm("product")
LUKASIEWICZ = TNorm("lukasiewicz")
BUILTINS = {"min": MIN, "product": PRODUCT, "lukasiewicz": LUKASIEWICZ}


def get_tnorm(name: str, exact_mode: bool = True) -> TNorm:
    try:
        t = BUILTINS[name]
    except KeyError:
        raise TNormConfigError(f"unknown t-norm {name!r}; choose from {sorted(BUILTINS)}") from None
    return t if exact_mode else TNorm(t.kind, exact=False)


def tabulated(values: Sequence[Sequence], exact_mode: bool = True) -> TNorm:
    conv = exact.to_fraction if exact_mode else float
    table = tuple(tuple(conv(v) for v in row) for row in values)
    return TNorm("tabulated", table, exact_mode)


def _interpolate(table, a, b):
    r = len(table) - 1
    ar, br = a * r, b * r
    i = min(math.floor(ar), r - 1)
    j = min(math.floor(br), r - 1)
    u, v = ar - i, br - j
    return ((1 - u) * (1 - v) * table[i][j] + u * (1 - v) * table[i + 1][j]
            + (1 - u) * v * table[i][j + 1] + u * v * table[i + 1][j + 1])


def tnorm_eval(t: TNorm, a, b):
    """Evaluate ``a * b`` under the t-norm ``t``."""
    if not t.exact:
        a, b = float(a), float(b)
    unit_value(a)
    unit_value(b)
    k = t.kind
    if k == "min":
        if isinstance(a, exact.Real) or isinstance(b, exact.Real):
            return a if exact.compare(a, b) <= 0 else b
        return min(a, b)
    if k == "product":
        return a * b
    if k == "lukasiewicz":
        s = a + b - 1
        if isinstance(s, exact.Real):
            return s if exact.sign(s) > 0 else Fraction(0)
        return s if s > 0 else s * 0
    if t.table is None:
        raise TNormConfigError("tabulated t-norm has no table")
    return _interpolate(t.table, a, b)


def _grid(resolution: int, exact_mode: bool):
    if exact_mode:
        return [Fraction(k, resolution) for k in range(resolution + 1)]
    return [k / resolution for k in range(resolution + 1)]


def _oscillation(t: TNorm, resolution: int) -> float:
    g = _grid(resolution, t.exact)
    worst = 0.0
    vals = [[float(t(a, b)) for b in g] for a in g]
    for i in range(resolution + 1):
        for j in range(resolution + 1):
            if i < resolution:
                worst = max(worst, abs(vals[i + 1][j] - vals[i][j]))
            if j < resolution:
                worst = max(worst, abs(vals[i][j + 1] - vals[i][j]))
    return worst


def tnorm_check_axioms(t: TNorm, resolution: int = 64) -> PropertyReport:
    """Check the t-norm axioms on the grid {k / resolution}.

    Exact instances must satisfy every identity exactly; float instances get
    a 1e-15 allowance. Continuity is checked by requiring the grid-neighbour oscillation to drop
    when the resolution doubles.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    tol = 0.0 if t.exact else 1e-15
    rep = PropertyReport(f"tnorm:{t.kind}", samples=(resolution + 1) ** 3)
    g = _grid(resolution, t.exact)
    vals = {(a, b): t(a, b) for a in g for b in g}

    range_ = rep.law("range")
    for (a, b), v in vals.items():
        ok = 0 <= float(v) <= 1 if not t.exact else (exact.compare(v, 0) >= 0 and exact.compare(v, 1) <= 0)
        if not range_.record(ok, witness=fmt_witness(a=a, b=b)):
            break

    comm = rep.law("commutativity")
    for a, b in itertools.combinations(g, 2):
        ok, dev = _eq(vals[a, b], vals[b, a], tol)
        comm.record(ok, dev, fmt_witness(a=a, b=b))

    assoc = rep.law("associativity")
    for a, b, c in itertools.product(g, repeat=3):
        lhs = t(vals[a, b], c)
        rhs = t(a, vals[b, c])
        ok, dev = _eq(lhs, rhs, tol)
        assoc.record(ok, dev, fmt_witness(a=a, b=b, c=c))

    one = g[-1]
    bound = rep.law("boundary")
    for a in g:
        ok, dev = _eq(vals[a, one], a, tol)
        bound.record(ok, dev, fmt_witness(a=a))

    mono = rep.law("monotonicity")
    for i, a in enumerate(g):
        for j, b in enumerate(g):
            v = vals[a, b]
            if i + 1 < len(g):
                ok, dev = _le(v, vals[g[i + 1], b], tol)
                mono.record(ok, dev, fmt_witness(a=a, b=b, direction="a"))
            if j + 1 < len(g):
                ok, dev = _le(v, vals[a, g[j + 1]], tol)
                mono.record(ok, dev, fmt_witness(a=a, b=b, direction="b"))

    below_min = rep.law("bounded-by-min")
    for (a, b), v in vals.items():
        ok, dev = _le(v, min(a, b), tol)
        below_min.record(ok, dev, fmt_witness(a=a, b=b))

    cont = rep.law("continuity")
    oscs = [_oscillation(t, resolution), _oscillation(t, 2 * resolution)]
    cont.record(oscillation_shrinks(oscs), 0.0, fmt_witness(coarse=repr(oscs[0]), fine=repr(oscs[1])))
    return rep


def _eq(a, b, tol):
    if tol == 0:
        if exact.compare(a, b) == 0:
            return True, 0.0
        return False, abs(float(a) - float(b))
    d = abs(float(a) - float(b))
    return d <= tol, d


def _le(a, b, tol):
    if tol == 0:
        if exact.compare(a, b) <= 0:
            return True, 0.0
        return False, float(a) - float(b)
    d = float(a) - float(b)
    return d <= tol, max(d, 0.0)


def tnorm_root(t: TNorm, target, tol=Fraction(1, 10**9)) -> Fraction:
    """Largest-ish eps0 in (0, 1) with (1 - eps0) * (1 - eps0) > 1 - target.

    Bisection on eps0 using that the left side is nonincreasing in eps0; the
    result is admissible and lies within ``tol`` of the supremum of the
    admissible set.
    """
    target = exact.to_fraction(target)
    tol = exact.to_fraction(tol)
    if not (0 < target < 1):
        raise ValueError("target must lie in (0, 1)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    floor_ = 1 - target

    def admissible(e):
        v = t(1 - e, 1 - e)
        return exact.compare(v, floor_) > 0 if t.exact else float(v) > float(floor_)

    lo, hi = Fraction(0), Fraction(1)
    while hi - lo > tol or lo == 0:
        mid = (lo + hi) / 2
        if admissible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def parse_tnorm_file(text: str, exact_mode: bool = True) -> TNorm:
    """Parse the ``tnorm r`` text format: header then r+1 rows of r+1 values."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TNormConfigError("empty t-norm file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "tnorm" or not head[1].isdigit():
        raise TNormConfigError(f"bad header {lines[0]!r}; expected 'tnorm <r>'")
    r = int(head[1])
    if r < 1:
        raise TNormConfigError("resolution must be positive")
    body = lines[1:]
    if len(body) != r + 1:
        raise TNormConfigError(f"expected {r + 1} rows, found {len(body)}")
    rows = []
    for n, ln in enumerate(body, start=2):
        cells = ln.split()
        if len(cells) != r + 1:
            raise TNormConfigError(f"row {n}: expected {r + 1} values, found {len(cells)}")
        try:
            row = [Fraction(c) for c in cells]
        except ValueError as e:
            raise TNormConfigError(f"row {n}: {e}") from None
        for v in row:
            if not 0 <= v <= 1:
                raise TNormConfigError(f"row {n}: value {v} outside [0, 1]")
        rows.append(row)
    return tabulated(rows, exact_mode)


def format_tnorm_file(t: TNorm) -> str:
    if t.table is None:
        raise TNormConfigError("only tabulated t-norms have a file form")
    out = [f"tnorm {len(t.table) - 1}"]
    out += [" ".join(str(v) for v in row) for row in t.table]
    return "\n".join(out) + "\n"
