"""Gyronorms, fuzzy gyronorms and their law suites.

``fuzzy_from_gyronorm`` turns a gyronorm into the fuzzy gyronorm
``N(x, t) = t / (t + ||x||)``, which is a fuzzy gyronorm for every continuous
t-norm because it already satisfies (N4) for the minimum.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import exact
from .gyro_core import Gyrogroup, MobiusPoint
from .report import (PropertyReport, at_least, dyadic_oscillations, equal, fmt_witness,
                     greater, oscillation_shrinks)
from .tnorm import TNorm

DEFAULT_T_GRID = (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4))

RAPIDITY_LIMIT = 1 - 1e-12


@dataclass(frozen=True)
class Gyronorm:
    base: Gyrogroup
    fn: Callable[[Any], Any]
    name: str = "norm"
    tol: float = 0.0

    def __call__(self, x):
        return self.fn(x)


@dataclass(frozen=True)
class FuzzyGyronorm:
    base: Gyrogroup
    tnorm: TNorm
    fn: Callable[[Any, Any], Any]
    name: str = "fuzzy-norm"
    tol: float = 0.0
    source: Gyronorm | None = field(default=None, compare=False)

    def __call__(self, x, t):
        return self.fn(x, t)


def mobius_norm_abs(a: MobiusPoint):
    """Modulus ``|a|``; exact (a Fraction or a square-root Real) on rational points."""
    if isinstance(a.re, float) or isinstance(a.im, float):
        return math.hypot(a.re, a.im)
    return exact.sqrt_rational(a.norm2)


def mobius_norm_rapidity(a: MobiusPoint) -> float:
    """``artanh |a|`` (float only); rejects points too close to the circle."""
    r = math.hypot(float(a.re), float(a.im))
    if r > RAPIDITY_LIMIT:
        raise ValueError(f"|a| = {r!r} too close to 1 for a finite rapidity")
    return math.atanh(r)


def abs_gyronorm(G: Gyrogroup) -> Gyronorm:
    """``|a|`` on the Möbius disk, or ``|x|`` on a numeric group."""
    if isinstance(G.identity, MobiusPoint):
        return Gyronorm(G, mobius_norm_abs, "abs", G.tol)
    return Gyronorm(G, abs, "abs", G.tol)


def rapidity_gyronorm(G: Gyrogroup, tol: float = 1e-9) -> Gyronorm:
    return Gyronorm(G, mobius_norm_rapidity, "rapidity", tol)


def discrete_gyronorm(G: Gyrogroup) -> Gyronorm:
    """0 at the identity and 1 elsewhere; a gyronorm on every gyrogroup."""
    e = G.identity
    return Gyronorm(G, lambda x: 0 if G.eq(x, e) else 1, "discrete")


def memoized(fn: Callable, maxsize: int = 4096) -> Callable:
    """LRU-cache ``fn`` on hashable arguments; unhashable calls go straight through.

    The law suites evaluate the same point at many values of t, so caching
    the t-independent part saves most of the exact arithmetic.
    """
    cached = functools.lru_cache(maxsize=maxsize)(fn)

    def call(*args):
        try:
            return cached(*args)
        except TypeError:
            return fn(*args)

    return call


def fuzzy_from_gyronorm(nrm: Gyronorm, t: TNorm) -> FuzzyGyronorm:
    """``N(x, s) = s / (s + ||x||)`` paired with the t-norm ``t``."""
    norm_of = memoized(nrm)

    def fn(x, s):
        if s <= 0:
            raise ValueError(f"t must be positive, got {s}")
        r = norm_of(x)
        if isinstance(r, float) or not t.exact:
            return float(s) / (float(s) + float(r))
        return s / (s + r)

    return FuzzyGyronorm(nrm.base, t, fn, f"N[{nrm.name}]", nrm.tol, nrm)


# -- law suites -------------------------------------------------------------


def verify_gyronorm(nrm: Gyronorm, n: int = 1000, seed: int = 0,
                    sampler: Callable | None = None, tol: float | None = None) -> PropertyReport:
    """Check positivity, inverse invariance, subadditivity and gyration invariance."""
    G = nrm.base
    tol = nrm.tol if tol is None else tol
    rng = random.Random(seed)
    draw = sampler or G.sample
    rep = PropertyReport(f"gyronorm:{nrm.name}:{G.name}", seed=seed, samples=n)
    pos, inv, sub, gyr = (rep.law(k) for k in
                          ("positivity", "inverse-invariance", "subadditivity", "gyration-invariance"))
    e = G.identity
    ok, dev = equal(nrm(e), 0, tol)
    pos.record(ok, dev, fmt_witness(x=G.format(e)))
    for x, y, a, b in _tuples(G, 4, n, rng, draw):
        w = lambda **kw: fmt_witness(**{k: G.format(v) for k, v in kw.items()})
        nx = nrm(x)
        if G.eq(x, e):
            ok, dev = equal(nx, 0, tol)
        else:
            ok, dev = greater(nx, 0, tol)
        pos.record(ok, dev, lambda: w(x=x))
        ok, dev = equal(nrm(G.neg(x)), nx, tol)
        inv.record(ok, dev, lambda: w(x=x))
        ok, dev = at_least(nx + nrm(y), nrm(G.oplus(x, y)), tol)
        sub.record(ok, dev, lambda: w(x=x, y=y))
        ok, dev = equal(nrm(G.gyr(a, b, x)), nx, tol)
        gyr.record(ok, dev, lambda: w(a=a, b=b, x=x))
    return rep


def verify_mobius_sharp_bound(nrm: Gyronorm, n: int = 1000, seed: int = 0) -> PropertyReport:
    """``||a ⊕ b|| <= (||a|| + ||b||) / (1 + ||a|| ||b||)`` for the modulus on the disk."""
    G = nrm.base
    rng = random.Random(seed)
    rep = PropertyReport(f"mobius-sharp-bound:{G.name}", seed=seed, samples=n)
    chk = rep.law("sharp-subadditivity")
    for _ in range(n):
        a, b = G.sample(rng), G.sample(rng)
        na, nb = nrm(a), nrm(b)
        ok, dev = at_least((na + nb) / (1 + na * nb), nrm(G.oplus(a, b)), nrm.tol)
        chk.record(ok, dev, fmt_witness(a=G.format(a), b=G.format(b)))
    return rep


def _tuples(G, arity, n, rng, draw):
    elems = G.elements()
    if elems is not None and n >= len(elems) ** arity:
        yield from itertools.product(elems, repeat=arity)
        return
    for _ in range(n):
        yield tuple(draw(rng) for _ in range(arity))


def continuity_in_t(fn: Callable[[Any], Any], t_grid: Sequence) -> tuple[bool, list[float]]:
    """Oscillation of ``fn`` on refining uniform grids of [min t, max t] must shrink."""
    lo, hi = min(t_grid), max(t_grid)
    oscs = dyadic_oscillations(fn, lo, hi, (8, 16))
    return oscillation_shrinks(oscs), oscs


def verify_fuzzy_gyronorm(N: FuzzyGyronorm, n: int = 1000, seed: int = 0,
                          t_grid: Sequence = DEFAULT_T_GRID, sampler: Callable | None = None,
                          tol: float | None = None) -> PropertyReport:
    """Check (N1)-(N6); (N4) runs over every ordered pair from ``t_grid``."""
    G = N.base
    T = N.tnorm
    tol = N.tol if tol is None else tol
    rng = random.Random(seed)
    draw = sampler or G.sample
    rep = PropertyReport(f"fuzzy-gyronorm:{N.name}:{T.name}:{G.name}", seed=seed, samples=n)
    n1, n2, n3, n4, n5, n6 = (rep.law(f"N{i}") for i in range(1, 7))
    e = G.identity
    for t in t_grid:
        ok, dev = equal(N(e, t), 1, tol)
        n2.record(ok, dev, fmt_witness(x=G.format(e), t=t))
    pairs = list(itertools.product(t_grid, repeat=2))
    for x, y, a, b in _tuples(G, 4, n, rng, draw):
        w = lambda **kw: fmt_witness(**{k: (G.format(v) if k in "xyab" else v) for k, v in kw.items()})
        nx = {t: N(x, t) for t in t_grid}
        ny = {t: N(y, t) for t in t_grid}
        xy = G.oplus(x, y)
        is_e = G.eq(x, e)
        below_one = False
        for t in t_grid:
            ok, dev = greater(nx[t], 0, tol)
            n1.record(ok, dev, lambda: w(x=x, t=t))
            if not is_e:
                below = exact.compare(nx[t], 1) < 0 if tol == 0 else float(nx[t]) < 1 - tol
                below_one = below_one or below
            ok, dev = equal(N(G.neg(x), t), nx[t], tol)
            n3.record(ok, dev, lambda: w(x=x, t=t))
            ok, dev = equal(N(G.gyr(a, b, x), t), nx[t], tol)
            n6.record(ok, dev, lambda: w(a=a, b=b, x=x, t=t))
        if is_e:
            for t in t_grid:
                ok, dev = equal(nx[t], 1, tol)
                n2.record(ok, dev, lambda: w(x=x, t=t))
        else:
            n2.record(below_one, 0.0 if below_one else 1.0, lambda: w(x=x))
        for t, s in pairs:
            ok, dev = at_least(N(xy, t + s), T(nx[t], ny[s]), tol)
            n4.record(ok, dev, lambda: w(x=x, y=y, t=t, s=s))
        ok, oscs = continuity_in_t(lambda t: N(x, t), t_grid)
        n5.record(ok, 0.0, lambda: w(x=x, oscillations=oscs))
    return rep
