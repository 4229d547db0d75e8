"""Fuzzy metrics on gyrogroups.

Constructions: the standard fuzzy metric ``t / (t + d)``, the metric
``M_N(x, y, t) = N(⊖x ⊕ y, t)`` induced by a fuzzy gyronorm, and the norm
``N_M(x, t) = M(e, x, t)`` recovered from a left-invariant metric. Checkers
cover the fuzzy-metric axioms (i)-(v), gyrotranslation invariance, the four
Klee-type conditions with a pointwise implication audit, balls, continuity
witnesses for ⊕ and ⊖, and isometry of automorphisms.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import exact
from .gyro_core import Gyrogroup
from .norms import DEFAULT_T_GRID, FuzzyGyronorm, Gyronorm, continuity_in_t, memoized
from .report import PropertyReport, at_least, equal, fmt_witness, greater
from .tnorm import TNorm, tnorm_root


@dataclass(frozen=True)
class Metric:
    carrier: Gyrogroup
    dist: Callable[[Any, Any], Any]
    name: str = "d"
    tol: float = 0.0

    def __call__(self, x, y):
        return self.dist(x, y)


@dataclass(frozen=True)
class FuzzyMetric:
    carrier: Gyrogroup
    tnorm: TNorm
    fn: Callable[[Any, Any, Any], Any]
    name: str = "M"
    tol: float = 0.0
    norm: FuzzyGyronorm | None = field(default=None, compare=False)
    metric: Metric | None = field(default=None, compare=False)

    def __call__(self, x, y, t):
        return self.fn(x, y, t)


@dataclass(frozen=True)
class Ball:
    """``B(center, eps, t) = {y : M(center, y, t) > 1 - eps}``."""

    center: Any
    eps: Any
    t: Any

    def __post_init__(self):
        if not (0 < self.eps < 1):
            raise ValueError(f"ball radius eps must lie in (0, 1), got {self.eps}")
        if self.t <= 0:
            raise ValueError(f"t must be positive, got {self.t}")


def _witness(G, **kw):
    elems = {k: G.format(v) for k, v in kw.items() if k not in ("t", "s", "eps")}
    other = {k: v for k, v in kw.items() if k in ("t", "s", "eps")}
    return fmt_witness(**elems, **other)


def _tuples(G, arity, n, rng, draw):
    elems = G.elements()
    if elems is not None and n >= len(elems) ** arity:
        yield from itertools.product(elems, repeat=arity)
        return
    for _ in range(n):
        yield tuple(draw(rng) for _ in range(arity))


def _exact_pair(tn: TNorm, value) -> bool:
    return tn.exact and not isinstance(value, float)


# -- constructions -------------------------------------------------------------


def gyronorm_metric(nrm: Gyronorm) -> Metric:
    """``d(x, y) = ||⊖x ⊕ y||``; left-invariant by construction."""
    G = nrm.base
    return Metric(G, lambda x, y: nrm(G.oplus(G.neg(x), y)), f"d[{nrm.name}]", nrm.tol)


def abs_difference_metric(G: Gyrogroup, scale=1) -> Metric:
    """``d(x, y) = scale * |x - y|`` on a numeric group."""
    return Metric(G, lambda x, y: scale * abs(x - y), "abs-diff" if scale == 1 else f"{scale}*abs-diff")


def standard_fuzzy_metric(d: Metric, tn: TNorm) -> FuzzyMetric:
    """``M(x, y, t) = t / (t + d(x, y))``."""

    def fn(x, y, t):
        if t <= 0:
            raise ValueError(f"t must be positive, got {t}")
        r = d(x, y)
        if not _exact_pair(tn, r):
            return float(t) / (float(t) + float(r))
        return t / (t + r)

    return FuzzyMetric(d.carrier, tn, fn, f"M[{d.name}]", d.tol, metric=d)


def metric_from_fuzzy_gyronorm(N: FuzzyGyronorm) -> FuzzyMetric:
    """``M_N(x, y, t) = N(⊖x ⊕ y, t)``."""
    G = N.base
    diff = memoized(lambda x, y: G.oplus(G.neg(x), y))
    return FuzzyMetric(G, N.tnorm, lambda x, y, t: N(diff(x, y), t),
                       f"M[{N.name}]", N.tol, norm=N)


def gyronorm_from_invariant_metric(M: FuzzyMetric, check: int = 200, seed: int = 0) -> FuzzyGyronorm:
    """``N_M(x, t) = M(e, x, t)``.

    Left invariance is a precondition; ``check`` samples are spent confirming
    it (0 skips the check).
    """
    G = M.carrier
    if not isinstance(G, Gyrogroup):
        raise TypeError("N_M needs a gyrogroup carrier")
    if check:
        rep = check_invariance(M, "left", n=check, seed=seed)
        if not rep.passed:
            raise ValueError(f"{M.name} is not left-invariant: {rep.failures[0].witness}")
    e = G.identity
    return FuzzyGyronorm(G, M.tnorm, lambda x, t: M(e, x, t), f"N[{M.name}]", M.tol)


# -- law suites ----------------------------------------------------------------


def verify_metric(d: Metric, n: int = 1000, seed: int = 0,
                  sampler: Callable | None = None) -> PropertyReport:
    """Zero exactly on the diagonal, symmetry and the triangle inequality on samples."""
    G = d.carrier
    rng = random.Random(seed)
    draw = sampler or G.sample
    rep = PropertyReport(f"metric:{d.name}:{G.name}", seed=seed, samples=n)
    zero, sym, tri = rep.law("identity-of-indiscernibles"), rep.law("symmetry"), rep.law("triangle")
    for x, y, z in _tuples(G, 3, n, rng, draw):
        dxy = d(x, y)
        ok, dev = equal(d(x, x), 0, d.tol)
        zero.record(ok, dev, lambda: _witness(G, x=x))
        if not G.eq(x, y):
            ok, dev = greater(dxy, 0, d.tol)
            zero.record(ok, dev, lambda: _witness(G, x=x, y=y))
        ok, dev = equal(dxy, d(y, x), d.tol)
        sym.record(ok, dev, lambda: _witness(G, x=x, y=y))
        ok, dev = at_least(d(x, z) + d(z, y), dxy, d.tol)
        tri.record(ok, dev, lambda: _witness(G, x=x, y=y, z=z))
    return rep


def verify_fuzzy_metric(M: FuzzyMetric, n: int = 1000, seed: int = 0,
                        t_grid: Sequence = DEFAULT_T_GRID,
                        sampler: Callable | None = None) -> PropertyReport:
    """Axioms (i)-(v); (iv) runs over every ordered pair from ``t_grid``.

    When ``M`` comes from a fuzzy gyronorm, the gyration step behind
    symmetry, ``⊖(⊖x ⊕ y) = gyr[⊖x, y](⊖y ⊕ x)``, is checked as well.
    """
    G = M.carrier
    T = M.tnorm
    tol = M.tol
    rng = random.Random(seed)
    draw = sampler or G.sample
    rep = PropertyReport(f"fuzzy-metric:{M.name}:{T.name}:{G.name}", seed=seed, samples=n)
    c1, c2, c3, c4, c5 = (rep.law(f"({r})") for r in ("i", "ii", "iii", "iv", "v"))
    step = rep.law("(iii) gyration-step") if M.norm is not None else None
    pairs = list(itertools.product(t_grid, repeat=2))
    for x, y, z in _tuples(G, 3, n, rng, draw):
        same = G.eq(x, y)
        below_one = False
        mxy = {t: M(x, y, t) for t in t_grid}
        for t in t_grid:
            ok, dev = greater(mxy[t], 0, tol)
            c1.record(ok, dev, lambda: _witness(G, x=x, y=y, t=t))
            ok, dev = equal(M(x, x, t), 1, tol)
            c2.record(ok, dev, lambda: _witness(G, x=x, t=t))
            if not same:
                below_one = below_one or (exact.compare(mxy[t], 1) < 0 if tol == 0
                                          else float(mxy[t]) < 1 - tol)
            ok, dev = equal(mxy[t], M(y, x, t), tol)
            c3.record(ok, dev, lambda: _witness(G, x=x, y=y, t=t))
        if not same:
            c2.record(below_one, 0.0 if below_one else 1.0, lambda: _witness(G, x=x, y=y))
        mxz = {t: M(x, z, t) for t in t_grid}
        mzy = {t: M(z, y, t) for t in t_grid}
        for t, s in pairs:
            ok, dev = at_least(M(x, y, t + s), T(mxz[t], mzy[s]), tol)
            c4.record(ok, dev, lambda: _witness(G, x=x, y=y, z=z, t=t, s=s))
        ok, oscs = continuity_in_t(lambda t: M(x, y, t), t_grid)
        c5.record(ok, 0.0, lambda: fmt_witness(x=G.format(x), y=G.format(y), oscillations=oscs))
        if step is not None:
            nx = G.neg(x)
            lhs = G.neg(G.oplus(nx, y))
            rhs = G.gyr(nx, y, G.oplus(G.neg(y), x))
            ok = G.eq(lhs, rhs)
            step.record(ok, 0.0 if ok and G.exact else G.deviation(lhs, rhs), lambda: _witness(G, x=x, y=y))
    return rep


SIDES = ("left", "right", "both", "gyration")


def check_invariance(M: FuzzyMetric, side: str = "left", n: int = 1000, seed: int = 0,
                     t_grid: Sequence = DEFAULT_T_GRID,
                     sampler: Callable | None = None) -> PropertyReport:
    """Compare ``M`` before and after left/right gyrotranslation or a gyration."""
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    G = M.carrier
    rng = random.Random(seed)
    draw = sampler or G.sample
    rep = PropertyReport(f"invariance:{side}:{M.name}:{G.name}", seed=seed, samples=n)
    sides = ("left", "right") if side == "both" else (side,)
    checks = {s: rep.law(f"{s}-invariance") for s in sides}
    for a, b, x, y in _tuples(G, 4, n, rng, draw):
        for s, chk in checks.items():
            if s == "left":
                u, v = G.oplus(a, x), G.oplus(a, y)
            elif s == "right":
                u, v = G.oplus(x, a), G.oplus(y, a)
            else:
                u, v = G.gyr(a, b, x), G.gyr(a, b, y)
            for t in t_grid:
                ok, dev = equal(M(u, v, t), M(x, y, t), M.tol)
                if s == "gyration":
                    chk.record(ok, dev, lambda: _witness(G, u=a, v=b, x=x, y=y, t=t))
                else:
                    chk.record(ok, dev, lambda: _witness(G, a=a, x=x, y=y, t=t))
    return rep


# -- Klee-type conditions --------------------------------------------------------


KLEE_CONDITIONS = ("(I)", "(I)'", "(II)", "(II)'")
KLEE_AUDITS = ("(II)<=>(II)'", "(II)'=>(I)", "(I)=>(I)'", "(I)'=>(I)")


@dataclass
class KleeReport(PropertyReport):
    """Per-condition verdicts plus pointwise implication-audit counts.

    Each audit pairs samples the way the equivalence proofs do:

    * ``(II)<=>(II)'``: (II) at (x, y, a) and (II)' at (⊖x, y, ⊖a) evaluate
      the same quantity, so their verdicts must agree;
    * ``(II)'=>(I)``: equality implies the inequality at the same sample;
    * ``(I)=>(I)'``: (I) at (x, a, b, t) yields (I)' at (x, y, a, b, t, s);
    * ``(I)'=>(I)``: a failure of (I) at (x, y, a, t) must be reproduced by a
      failure of (I)' at (x, a, y, a, t - s, s) for some small s.
    """

    violations: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return not any(self.violations.values())

    def holds(self, cond: str) -> bool:
        return self[cond].passed

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["audit_violations"] = dict(self.violations)
        return d


def check_klee(M: FuzzyMetric, n: int = 1000, seed: int = 0,
               t_grid: Sequence = DEFAULT_T_GRID, sampler: Callable | None = None,
               N: FuzzyGyronorm | None = None, max_halvings: int = 64) -> KleeReport:
    """Evaluate (I), (I)', (II), (II)' on samples and audit their implications.

    (II) is stated through a fuzzy gyronorm; ``N`` defaults to ``M.norm`` and
    then to ``N_M(x, t) = M(e, x, t)``.
    """
    G = M.carrier
    T = M.tnorm
    tol = M.tol
    if N is None:
        N = M.norm or gyronorm_from_invariant_metric(M, check=0)
    rng = random.Random(seed)
    draw = sampler or G.sample
    rep = KleeReport(f"klee:{M.name}:{T.name}:{G.name}", seed=seed, samples=n)
    c_i, c_ip, c_ii, c_iip = (rep.law(c) for c in KLEE_CONDITIONS)
    audits = {k: rep.law(f"audit:{k}") for k in KLEE_AUDITS}
    rep.violations = {k: 0 for k in KLEE_AUDITS}
    neg, op = G.neg, G.oplus

    def cond_i(x, y, a, t):
        return at_least(M(op(x, a), op(y, a), t), M(x, y, t), tol)

    def cond_ip(x, y, a, b, t, s):
        return at_least(M(op(x, y), op(a, b), t + s), T(M(x, a, t), M(y, b, s)), tol)

    def cond_ii(x, y, a, t):
        lhs = N(op(op(a, x), G.gyr(a, x, G.ominus(y, a))), t)
        return equal(lhs, N(op(x, y), t), tol)

    def cond_iip(x, y, a, t):
        return equal(M(op(x, a), op(y, a), t), M(x, y, t), tol)

    def audit(name, ok, wit):
        if not ok:
            rep.violations[name] += 1
        audits[name].record(ok, 0.0 if ok else 1.0, wit)

    for x, y, a, b in _tuples(G, 4, n, rng, draw):
        t = rng.choice(t_grid)
        s = rng.choice(t_grid)
        wit = lambda: _witness(G, x=x, y=y, a=a, b=b, t=t, s=s)

        ok_i, dev = cond_i(x, y, a, t)
        c_i.record(ok_i, dev, lambda: _witness(G, x=x, y=y, a=a, t=t))
        ok_ip, dev = cond_ip(x, y, a, b, t, s)
        c_ip.record(ok_ip, dev, wit)
        ok_ii, dev = cond_ii(x, y, a, t)
        c_ii.record(ok_ii, dev, lambda: _witness(G, x=x, y=y, a=a, t=t))
        ok_iip, dev = cond_iip(x, y, a, t)
        c_iip.record(ok_iip, dev, lambda: _witness(G, x=x, y=y, a=a, t=t))

        mirror, _ = cond_iip(neg(x), y, neg(a), t)
        audit("(II)<=>(II)'", ok_ii == mirror, wit)
        audit("(II)'=>(I)", ok_i or not ok_iip, wit)
        # (I) at (x, a, b, t): M(x ⊕ b, a ⊕ b, t) >= M(x, a, t)
        ok_i_xab, _ = cond_i(x, a, b, t)
        audit("(I)=>(I)'", ok_ip or not ok_i_xab, wit)
        if not ok_i:
            reproduced = False
            h = t
            for _ in range(max_halvings):
                h = h / 2
                ok, _ = cond_ip(x, a, y, a, t - h, h)
                if not ok:
                    reproduced = True
                    break
            audit("(I)'=>(I)", reproduced, wit)
        else:
            audit("(I)'=>(I)", True, wit)
    return rep


# -- balls and continuity ------------------------------------------------------------


def ball_membership(M: FuzzyMetric, ball: Ball, y) -> bool:
    """Strict test ``M(center, y, t) > 1 - eps``."""
    v = M(ball.center, y, ball.t)
    if M.tol == 0 and not isinstance(v, float):
        return exact.compare(v, 1 - exact.to_fraction(ball.eps)) > 0
    return float(v) > 1 - float(ball.eps)


@dataclass
class ContinuityWitness:
    x: Any
    y: Any
    eps: Any
    t: Any
    eps0: Fraction
    t_half: Any
    sound: bool
    checked: int = 0
    failures: int = 0
    inversion_checked: int = 0
    inversion_failures: int = 0
    first_failure: dict | None = None

    @property
    def holds(self) -> bool:
        return self.sound and self.failures == 0 and self.inversion_failures == 0

    def to_dict(self) -> dict:
        return fmt_witness(eps0=self.eps0, t_half=self.t_half) | {
            "sound": self.sound, "checked": self.checked, "failures": self.failures,
            "inversion_checked": self.inversion_checked,
            "inversion_failures": self.inversion_failures,
            "first_failure": self.first_failure,
        }


def _sample_in_ball(M: FuzzyMetric, ball: Ball, rng: random.Random, max_halvings: int = 80):
    """A point of ``ball`` of the form center ⊕ δ with δ drawn at shrinking scales."""
    G = M.carrier
    scale = Fraction(1)
    for _ in range(max_halvings):
        p = G.oplus(ball.center, G.sample_small(rng, scale))
        if ball_membership(M, ball, p):
            return p
        scale /= 2
    return ball.center


def continuity_witness(M: FuzzyMetric, x, y, eps, t, n: int = 1000, seed: int = 0,
                       klee: bool | PropertyReport | None = None,
                       tol=Fraction(1, 10**9)) -> ContinuityWitness:
    """Witness that ⊕ and ⊖ are continuous at (x, y) for the ball B(x ⊕ y, eps, t).

    ``eps0 = tnorm_root(*, eps)``; then ``a ⊕ b`` must land in B(x ⊕ y, eps, t)
    for ``n`` sampled a in B(x, eps0, t/2) and b in B(y, eps0, t/2), and ⊖ must
    map sampled points of B(x, eps, t) into B(⊖x, eps, t). The witness is
    sound only when (I)' is known to hold; ``klee=None`` checks it on 200
    samples.
    """
    G = M.carrier
    eps = exact.to_fraction(eps)
    t = exact.to_fraction(t)
    if klee is None:
        klee = check_klee(M, n=200, seed=seed)
    sound = klee["(I)'"].passed if isinstance(klee, PropertyReport) else bool(klee)
    eps0 = tnorm_root(M.tnorm, eps, tol)
    half = t / 2
    w = ContinuityWitness(x, y, eps, t, eps0, half, sound)
    rng = random.Random(seed)
    bx, by = Ball(x, eps0, half), Ball(y, eps0, half)
    target = Ball(G.oplus(x, y), eps, t)
    for _ in range(n):
        a = _sample_in_ball(M, bx, rng)
        b = _sample_in_ball(M, by, rng)
        w.checked += 1
        if not ball_membership(M, target, G.oplus(a, b)):
            w.failures += 1
            if w.first_failure is None:
                w.first_failure = _witness(G, a=a, b=b)
    bx_full, nx = Ball(x, eps, t), G.neg(x)
    for _ in range(n):
        p = _sample_in_ball(M, bx_full, rng)
        w.inversion_checked += 1
        if not ball_membership(M, Ball(nx, eps, t), G.neg(p)):
            w.inversion_failures += 1
            if w.first_failure is None:
                w.first_failure = _witness(G, inverse_of=p)
    return w


# -- automorphisms ---------------------------------------------------------------


def automorphism_isometry_check(N: FuzzyGyronorm, alpha: Callable, n: int = 1000, seed: int = 0,
                                t_grid: Sequence = DEFAULT_T_GRID, name: str = "alpha",
                                gyrations: int = 20, sampler: Callable | None = None) -> PropertyReport:
    """Check that ``alpha`` is an isometry of ``M_N``.

    The preconditions (``alpha`` respects ⊕ and preserves ``N``) are checked
    first; if either fails, the isometry law is not attempted. ``gyrations``
    sampled gyroautomorphisms gyr[u, v] are checked alongside.
    """
    G = N.base
    M = metric_from_fuzzy_gyronorm(N)
    tol = N.tol
    rng = random.Random(seed)
    draw = sampler or G.sample
    rep = PropertyReport(f"automorphism-isometry:{name}:{G.name}", seed=seed, samples=n)

    def run(fn, label):
        hom = rep.law(f"{label}:precondition:homomorphism")
        pres = rep.law(f"{label}:precondition:norm-preservation")
        tuples = list(_tuples(G, 2, n, rng, draw))
        for x, y in tuples:
            lhs, rhs = fn(G.oplus(x, y)), G.oplus(fn(x), fn(y))
            ok = G.eq(lhs, rhs)
            hom.record(ok, 0.0 if ok and G.exact else G.deviation(lhs, rhs), lambda: _witness(G, x=x, y=y))
            for t in t_grid:
                ok, dev = equal(N(fn(x), t), N(x, t), tol)
                pres.record(ok, dev, lambda: _witness(G, x=x, t=t))
        if not (hom.passed and pres.passed):
            return
        iso = rep.law(f"{label}:isometry")
        for x, y in tuples:
            for t in t_grid:
                ok, dev = equal(M(fn(x), fn(y), t), M(x, y, t), tol)
                iso.record(ok, dev, lambda: _witness(G, x=x, y=y, t=t))

    run(alpha, name)
    for _ in range(gyrations):
        u, v = draw(rng), draw(rng)
        run(lambda c, u=u, v=v: G.gyr(u, v, c), f"gyr[{G.format(u)},{G.format(v)}]")
    return rep


def round_trip_check(N: FuzzyGyronorm, n: int = 1000, seed: int = 0,
                     t_grid: Sequence = DEFAULT_T_GRID,
                     sampler: Callable | None = None) -> PropertyReport:
    """``N -> M_N -> N_{M_N}`` is the identity, and ``M_{N_M} = M`` pointwise."""
    G = N.base
    M = metric_from_fuzzy_gyronorm(N)
    NM = gyronorm_from_invariant_metric(M, check=0)
    MNM = metric_from_fuzzy_gyronorm(NM)
    rng = random.Random(seed)
    draw = sampler or G.sample
    rep = PropertyReport(f"round-trip:{N.name}:{G.name}", seed=seed, samples=n)
    norm_law, metric_law = rep.law("N_M = N"), rep.law("M_(N_M) = M_N")
    for x, y in _tuples(G, 2, n, rng, draw):
        for t in t_grid:
            ok, dev = equal(NM(x, t), N(x, t), N.tol)
            norm_law.record(ok, dev, lambda: _witness(G, x=x, t=t))
            ok, dev = equal(MNM(x, y, t), M(x, y, t), N.tol)
            metric_law.record(ok, dev, lambda: _witness(G, x=x, y=y, t=t))
    return rep
