"""Constructive completion of a gyrogroup with a both-sided invariant metric.

A point of the completion is a :class:`CauchyPoint`: a sequence of base
elements together with a modulus ``mu`` such that ``d(x_i, x_k) < eps``
whenever ``i, k >= mu(eps)``. The lifted operations act termwise and
combine moduli the way the well-definedness argument does:

    mu_{p ⊕ q}(eps) = max(mu_p(eps / 2), mu_q(eps / 2))
    mu_{⊖p}(eps)    = mu_p(eps)

Equality of completion points is only semi-decidable, so laws are checked
with :func:`approx_eq` at an explicit ``eps``.
"""

from __future__ import annotations

import decimal
import itertools
import json
import math
import random
import threading
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from . import exact
from .fuzzy_metric import Metric, abs_difference_metric, check_invariance, standard_fuzzy_metric
from .gyro_core import Gyrogroup, IDENTITY_LAWS, rationals_additive
from .report import PropertyReport, fmt_witness
from .tnorm import PRODUCT, TNorm

FIXTURE_FILE = Path(__file__).parent / "fixtures" / "sequences.json"
ORACLE_DIGITS = 60


class UnsoundOperation(RuntimeError):
    """A lifted operation was requested on a base whose metric is not both-sided invariant."""


class FixtureError(ValueError):
    pass


class CauchyPoint:
    """A Cauchy sequence with an explicit modulus.

    Terms are memoized under a lock so concurrent readers see one
    consistent prefix.
    """

    def __init__(self, space: "CompletionSpace", seq: Callable[[int], Any],
                 modulus: Callable[[Fraction], int], name: str = "p"):
        self.space = space
        self._seq = seq
        self._modulus = modulus
        self.name = name
        self._cache: dict[int, Any] = {}
        self._lock = threading.Lock()

    def term(self, n: int):
        with self._lock:
            if n not in self._cache:
                self._cache[n] = self._seq(n)
            return self._cache[n]

    __getitem__ = term

    def modulus(self, eps) -> int:
        eps = exact.to_fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        return self._modulus(eps)

    def __repr__(self) -> str:
        return f"CauchyPoint({self.name})"


class CompletionSpace:
    """A base gyrogroup with metric ``d`` and t-norm, plus its completion.

    The lifted operations need ``d`` to be invariant on both sides; that is
    checked on ``check`` samples at construction and recorded in
    ``invariance``. Without it, :meth:`embed` and the distance still work
    but the lifted operations raise :class:`UnsoundOperation`.

    ``assume_invariant=True`` lifts anyway. Termwise operations on constant
    sequences are always correct, so this is meant for embedded points;
    moduli of lifted non-constant points are then not guaranteed.
    """

    def __init__(self, base: Gyrogroup, metric: Metric, tnorm: TNorm = PRODUCT,
                 check: int = 200, seed: int = 0, assume_invariant: bool = False):
        self.base = base
        self.metric = metric
        self.tnorm = tnorm
        self.fuzzy = standard_fuzzy_metric(metric, tnorm)
        self.invariance = check_invariance(self.fuzzy, "both", n=check, seed=seed)
        self.assume_invariant = assume_invariant

    @property
    def invariant(self) -> bool:
        return self.invariance.passed

    def _require_invariant(self, what: str):
        if not self.invariant and not self.assume_invariant:
            bad = self.invariance.failures[0]
            raise UnsoundOperation(f"{what} needs a both-sided invariant metric; "
                                   f"{bad.law} fails at {bad.witness}")

    # -- points and operations --------------------------------------------

    def embed(self, x, name: str | None = None) -> CauchyPoint:
        return CauchyPoint(self, lambda n: x, lambda eps: 0, name or self.base.format(x))

    def hat_oplus(self, p: CauchyPoint, q: CauchyPoint) -> CauchyPoint:
        self._require_invariant("⊕̂")
        G = self.base
        return CauchyPoint(self, lambda n: G.oplus(p[n], q[n]),
                           lambda eps: max(p.modulus(eps / 2), q.modulus(eps / 2)),
                           f"({p.name} ⊕ {q.name})")

    def hat_neg(self, p: CauchyPoint) -> CauchyPoint:
        self._require_invariant("⊖̂")
        G = self.base
        return CauchyPoint(self, lambda n: G.neg(p[n]), p.modulus, f"⊖{p.name}")

    def hat_gyr(self, a: CauchyPoint, b: CauchyPoint, c: CauchyPoint) -> CauchyPoint:
        """``⊖̂(a ⊕̂ b) ⊕̂ (a ⊕̂ (b ⊕̂ c))``."""
        return self.hat_oplus(self.hat_neg(self.hat_oplus(a, b)),
                              self.hat_oplus(a, self.hat_oplus(b, c)))

    # -- metric -------------------------------------------------------------

    def hat_distance(self, p: CauchyPoint, q: CauchyPoint, prec) -> tuple[Any, Any]:
        """Interval of width at most ``prec`` containing ``d̂(p, q)``.

        At ``n = max(mu_p(delta), mu_q(delta))`` both terms are within
        ``delta`` of their limits, so ``d̂`` lies in ``d(p_n, q_n) ± 2 delta``.
        """
        delta = exact.to_fraction(prec) / 4
        n = max(p.modulus(delta), q.modulus(delta))
        d = self.metric(p[n], q[n])
        lo = d - 2 * delta
        if exact.compare(lo, 0) < 0:
            lo = Fraction(0)
        return lo, d + 2 * delta

    def lifted_fuzzy_metric(self, p: CauchyPoint, q: CauchyPoint, t, prec) -> tuple[Any, Any]:
        """Interval of width at most ``prec`` containing ``t / (t + d̂(p, q))``.

        ``t / (t + r)`` is ``1/t``-Lipschitz in ``r``, so a distance interval of
        width ``prec * min(1, t)`` suffices.
        """
        t = exact.to_fraction(t)
        if t <= 0:
            raise ValueError("t must be positive")
        prec = exact.to_fraction(prec)
        lo, hi = self.hat_distance(p, q, prec * min(Fraction(1), t))
        return t / (t + hi), t / (t + lo)


def approx_eq(p: CauchyPoint, q: CauchyPoint, eps) -> bool:
    """One-sided test: True guarantees ``d̂(p, q) < eps``; False proves nothing.

    Both points are read at ``max(mu_p(eps/4), mu_q(eps/4))`` and the terms
    compared against ``eps / 2``.
    """
    eps = exact.to_fraction(eps)
    n = max(p.modulus(eps / 4), q.modulus(eps / 4))
    return exact.compare(p.space.metric(p[n], q[n]), eps / 2) < 0


def intervals_overlap(a: tuple, b: tuple) -> bool:
    return exact.compare(a[0], b[1]) <= 0 and exact.compare(b[0], a[1]) <= 0


def fuzzy_cauchy_radius(eps, t) -> Fraction:
    """``M_d(x, y, t) > 1 - eps`` exactly when ``d(x, y) < t eps / (1 - eps)``."""
    eps, t = exact.to_fraction(eps), exact.to_fraction(t)
    if not (0 < eps < 1) or t <= 0:
        raise ValueError("need 0 < eps < 1 and t > 0")
    return t * eps / (1 - eps)


def fuzzy_cauchy_index(p: CauchyPoint, eps, t) -> int:
    """An index past which ``M_d(p_i, p_k, t) > 1 - eps``."""
    return p.modulus(fuzzy_cauchy_radius(eps, t))


# -- continued fractions and fixtures ---------------------------------------------


def sqrt_cf_terms(n: int):
    """Partial quotients of sqrt(n) for a non-square n."""
    a0 = math.isqrt(n)
    if n < 2 or a0 * a0 == n:
        raise FixtureError(f"sqrt({n}) is rational")

    def gen():
        m, d, a = 0, 1, a0
        yield a0
        while True:
            m = d * a - m
            d = (n - m * m) // d
            a = (a0 + m) // d
            yield a

    return gen()


def e_cf_terms():
    yield 2
    k = 1
    while True:
        yield from (1, 2 * k, 1)
        k += 1


def phi_cf_terms():
    while True:
        yield 1


class Convergents:
    """Convergents p_k/q_k of a continued fraction, computed lazily."""

    def __init__(self, terms: Iterable[int]):
        self._terms = iter(terms)
        self._p = [1, 0]  # p_{-1}, p_{-2}
        self._q = [0, 1]
        self._vals: list[Fraction] = []
        self._dens: list[int] = []
        self._lock = threading.Lock()

    def _extend(self, k: int):
        while len(self._vals) <= k:
            a = next(self._terms)
            p = a * self._p[0] + self._p[1]
            q = a * self._q[0] + self._q[1]
            self._p = [p, self._p[0]]
            self._q = [q, self._q[0]]
            self._vals.append(Fraction(p, q))
            self._dens.append(q)

    def value(self, k: int) -> Fraction:
        with self._lock:
            self._extend(k)
            return self._vals[k]

    def denominator(self, k: int) -> int:
        with self._lock:
            self._extend(k)
            return self._dens[k]

    def modulus(self, eps: Fraction) -> int:
        """Least m with ``1 / (q_m q_{m+1}) < eps``.

        Convergents from index m on lie between the m-th and the (m+1)-th, so
        any two of them differ by at most ``1 / (q_m q_{m+1})``.
        """
        m = 0
        while Fraction(1, self.denominator(m) * self.denominator(m + 1)) >= eps:
            m += 1
        return m


@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str
    params: dict

    @property
    def cauchy(self) -> bool | None:
        if self.kind in ("convergents", "constant"):
            return True
        c = self.params.get("cauchy")
        return c if isinstance(c, bool) else None

    def _scale(self) -> Fraction:
        return Fraction(str(self.params.get("scale", 1)))

    def point(self, space: CompletionSpace) -> CauchyPoint:
        """The fixture as a completion point of a numeric base such as (Q, +)."""
        kind, params = self.kind, self.params
        if kind == "constant":
            return space.embed(Fraction(str(params["value"])), self.name)
        if kind == "convergents":
            cf = Convergents(_cf_source(params))
            s = self._scale()
            if s == 0:
                return space.embed(Fraction(0), self.name)
            mu = space.metric(Fraction(0), s)  # the metric scale of |s|
            return CauchyPoint(space, lambda n: s * cf.value(n),
                               lambda eps: cf.modulus(eps / mu), self.name)
        terms = [Fraction(str(v)) for v in params["terms"]]
        repeat = params.get("repeat", "last")
        if repeat == "last":
            last = len(terms) - 1
            return CauchyPoint(space, lambda n: terms[min(n, last)], lambda eps: last, self.name)
        if self.cauchy is not True:
            return CauchyPoint(space, lambda n: terms[n % len(terms)], _no_modulus(self.name),
                               self.name)
        raise FixtureError(f"{self.name}: a cycling sequence cannot be declared Cauchy")

    def oracle(self) -> Decimal:
        """The limit to ORACLE_DIGITS significant digits (decimal arithmetic, independent of the terms)."""
        with decimal.localcontext() as ctx:
            ctx.prec = ORACLE_DIGITS
            if self.kind == "constant":
                return to_decimal(Fraction(str(self.params["value"])))
            if self.kind == "convergents":
                of = self.params["of"]
                if of == "sqrt":
                    base = Decimal(int(self.params["n"])).sqrt()
                elif of == "e":
                    base = Decimal(1).exp()
                elif of == "phi":
                    base = (1 + Decimal(5).sqrt()) / 2
                else:
                    raise FixtureError(f"unknown constant {of!r}")
                return base * to_decimal(self._scale())
            if self.params.get("repeat", "last") == "last":
                return to_decimal(Fraction(str(self.params["terms"][-1])))
        raise FixtureError(f"{self.name} has no limit")


def _no_modulus(name):
    def mu(eps):
        raise FixtureError(f"{name} is not declared Cauchy and has no modulus")
    return mu


def to_decimal(q: Fraction) -> Decimal:
    return Decimal(q.numerator) / Decimal(q.denominator)


def _cf_source(params: dict):
    of = params.get("of")
    if of == "sqrt":
        return sqrt_cf_terms(int(params["n"]))
    if of == "e":
        return e_cf_terms()
    if of == "phi":
        return phi_cf_terms()
    raise FixtureError(f"unknown constant {of!r}")


KINDS = ("convergents", "constant", "explicit")


def parse_fixtures(data) -> dict[str, Fixture]:
    if not isinstance(data, list):
        raise FixtureError("fixture file must hold a JSON list")
    out = {}
    for i, item in enumerate(data):
        if not isinstance(item, dict) or not {"name", "kind", "params"} <= item.keys():
            raise FixtureError(f"entry {i}: needs name, kind and params")
        if item["kind"] not in KINDS:
            raise FixtureError(f"entry {i}: kind must be one of {KINDS}")
        if item["kind"] == "explicit" and not item["params"].get("terms"):
            raise FixtureError(f"entry {i}: explicit fixtures need a non-empty 'terms' list")
        out[item["name"]] = Fixture(item["name"], item["kind"], dict(item["params"]))
    return out


def load_fixtures(path=None) -> dict[str, Fixture]:
    p = Path(path) if path is not None else FIXTURE_FILE
    return parse_fixtures(json.loads(p.read_text(encoding="utf-8")))


def rational_completion(tnorm: TNorm = PRODUCT, scale=1, check: int = 200, seed: int = 0) -> CompletionSpace:
    """(Q, +) with ``scale * |x - y|``; its completion is the real line."""
    G = rationals_additive()
    return CompletionSpace(G, abs_difference_metric(G, scale), tnorm, check=check, seed=seed)


def oracle_delta(p: CauchyPoint, value: Decimal, eps) -> Decimal:
    """``|p_n - value|`` at ``n = mu_p(eps / 2)``, so a sound modulus gives less than eps."""
    eps = exact.to_fraction(eps)
    with decimal.localcontext() as ctx:
        ctx.prec = ORACLE_DIGITS
        return abs(to_decimal(Fraction(p[p.modulus(eps / 2)])) - value)


# -- law suites ----------------------------------------------------------------


def check_modulus(p: CauchyPoint, eps_list: Sequence = (Fraction(1, 10), Fraction(1, 1000), Fraction(1, 10**6)),
                  n: int = 50, seed: int = 0, span: int = 20) -> PropertyReport:
    """Spot-check modulus soundness and monotonicity."""
    rng = random.Random(seed)
    d = p.space.metric
    rep = PropertyReport(f"modulus:{p.name}", seed=seed, samples=n)
    sound, mono = rep.law("modulus-soundness"), rep.law("modulus-monotone")
    eps_sorted = sorted(exact.to_fraction(e) for e in eps_list)
    for small, big in zip(eps_sorted, eps_sorted[1:]):
        ok = p.modulus(small) >= p.modulus(big)
        mono.record(ok, 0.0 if ok else 1.0, lambda: fmt_witness(small=small, big=big))
    for eps in eps_sorted:
        m = p.modulus(eps)
        for _ in range(n):
            i, k = m + rng.randrange(span), m + rng.randrange(span)
            ok = exact.compare(d(p[i], p[k]), eps) < 0
            sound.record(ok, 0.0 if ok else float(d(p[i], p[k])), lambda: fmt_witness(eps=eps, i=i, k=k))
    return rep


LIFTED_AXIOMS = ("G1", "G2", "G3", "G4")


def verify_lifted_laws(space: CompletionSpace, points: Sequence[CauchyPoint], eps=Fraction(1, 10**6),
                       n: int = 200, seed: int = 0) -> PropertyReport:
    """(G1)-(G4) and the seven identities for ⊕̂, ⊖̂, gyr̂, each as ``approx_eq`` at ``eps``."""
    eps = exact.to_fraction(eps)
    rng = random.Random(seed)
    rep = PropertyReport(f"lifted-laws:{space.base.name}", seed=seed, samples=n)
    laws = {k: rep.law(k) for k in LIFTED_AXIOMS + IDENTITY_LAWS}
    op, neg, gyr = space.hat_oplus, space.hat_neg, space.hat_gyr
    e = space.embed(space.base.identity)

    def check(law, lhs, rhs, *pts):
        ok = approx_eq(lhs, rhs, eps)
        laws[law].record(ok, 0.0 if ok else 1.0, lambda: fmt_witness(points=",".join(q.name for q in pts)))

    for _ in range(n):
        a, b, c = (rng.choice(points) for _ in range(3))
        check("G1", op(e, a), a, a)
        check("G2", op(neg(a), a), e, a)
        check("G3", op(a, op(b, c)), op(op(a, b), gyr(a, b, c)), a, b, c)
        check("G4", gyr(op(a, b), b, c), gyr(a, b, c), a, b, c)
        na, nb = neg(a), neg(b)
        check("(1) involution", neg(na), a, a)
        check("(2) left-cancellation", op(na, op(a, b)), b, a, b)
        check("(3) gyrator-identity", gyr(a, b, c), op(neg(op(a, b)), op(a, op(b, c))), a, b, c)
        check("(4) inverse-of-sum", neg(op(a, b)), gyr(a, b, op(nb, na)), a, b)
        check("(5) gyro-chain", op(op(na, b), gyr(na, b, op(nb, c))), op(na, c), a, b, c)
        check("(6) even-property", gyr(a, b, c), gyr(na, nb, c), a, b, c)
        check("(7) inversive-symmetry", gyr(a, b, gyr(b, a, c)), c, a, b, c)
    return rep


def check_completed_invariance(space: CompletionSpace, points: Sequence[CauchyPoint], n: int = 1000,
                               seed: int = 0, prec=Fraction(1, 10**6),
                               t_grid: Sequence = (Fraction(1, 4), Fraction(1, 2), Fraction(1),
                                                   Fraction(2), Fraction(4))) -> PropertyReport:
    """Interval probes: ``M̂(a ⊕̂ p, a ⊕̂ q, t)`` and ``M̂(p ⊕̂ a, q ⊕̂ a, t)`` overlap ``M̂(p, q, t)``."""
    rng = random.Random(seed)
    rep = PropertyReport(f"completed-invariance:{space.base.name}", seed=seed, samples=n)
    left, right = rep.law("left-invariance"), rep.law("right-invariance")
    M = space.lifted_fuzzy_metric
    for _ in range(n):
        a, p, q = (rng.choice(points) for _ in range(3))
        t = rng.choice(t_grid)
        base = M(p, q, t, prec)
        wit = lambda: fmt_witness(a=a.name, p=p.name, q=q.name, t=t)
        ok = intervals_overlap(M(space.hat_oplus(a, p), space.hat_oplus(a, q), t, prec), base)
        left.record(ok, 0.0 if ok else 1.0, wit)
        ok = intervals_overlap(M(space.hat_oplus(p, a), space.hat_oplus(q, a), t, prec), base)
        right.record(ok, 0.0 if ok else 1.0, wit)
    return rep


# -- completeness transfer --------------------------------------------------------

TRANSFER_EPS = (Fraction(1, 4), Fraction(1, 16), Fraction(1, 256), Fraction(1, 4096))
TRANSFER_T = (Fraction(1, 2), Fraction(1), Fraction(2))


def window_cauchy_index(M, terms: Sequence, eps, t) -> int | None:
    """Least j with ``M(x_i, x_k, t) > 1 - eps`` for all i, k in [j, len(terms)).

    Only starting points in the first half of the window count, so a
    sequence must stay settled for at least half the horizon.
    """
    H = len(terms)
    floor_ = 1 - eps
    settled = [True] * (H + 1)  # settled[j]: every pair inside [j, H) passes
    for j in range(H - 1, -1, -1):
        settled[j] = settled[j + 1] and all(
            exact.compare(M(terms[j], terms[k], t), floor_) > 0 for k in range(j + 1, H))
    for j in range(H // 2 + 1):
        if settled[j]:
            return j
    return None


def _nesting_eps0(Nc, M, probes, e, eps, t):
    """Halve eps0 until every probe in B_Nc(e, eps0, t) also lies in B_M(e, eps, t)."""
    eps0 = eps
    for _ in range(64):
        inside_n = [z for z in probes if exact.compare(Nc(e, z, t), 1 - eps0) > 0]
        if all(exact.compare(M(e, z, t), 1 - eps) > 0 for z in inside_n):
            return eps0
        eps0 /= 2
    return None


def completeness_transfer_check(M, Nc, fixtures: Iterable[Fixture], horizon: int = 32,
                                eps_grid: Sequence = TRANSFER_EPS, t_grid: Sequence = TRANSFER_T,
                                space: CompletionSpace | None = None, seed: int = 0) -> PropertyReport:
    """Every ``Nc``-Cauchy fixture is ``M``-Cauchy, via ball nesting at the identity.

    For each (eps, t) an ``eps0`` is found with B_Nc(e, eps0, t) ⊆ B_M(e, eps, t)
    on probes (the differences ⊖x_i ⊕ x_k of the fixture terms); the
    Nc-Cauchy index for (eps0, t) must then serve for M at (eps, t).
    """
    G = M.carrier
    e = G.identity
    space = space or rational_completion()
    rep = PropertyReport("completeness-transfer", seed=seed, samples=0)
    declared = rep.law("declared-status")
    compat = rep.law("compatibility")
    nesting = rep.law("ball-nesting")
    transfer = rep.law("transfer")
    count = 0
    for fx in fixtures:
        if fx.cauchy is None:
            raise FixtureError(f"fixture {fx.name!r} has no declared Cauchy status")
        count += 1
        p = fx.point(space)
        terms = [p[n] for n in range(horizon)]
        probes = [G.oplus(G.neg(a), b) for a, b in itertools.combinations(terms, 2)]
        nc_ok = m_ok = True
        for eps, t in itertools.product(eps_grid, t_grid):
            j_n = window_cauchy_index(Nc, terms, eps, t)
            j_m = window_cauchy_index(M, terms, eps, t)
            nc_ok = nc_ok and j_n is not None
            m_ok = m_ok and j_m is not None
            eps0 = _nesting_eps0(Nc, M, probes, e, eps, t)
            wit = lambda: fmt_witness(fixture=fx.name, eps=eps, t=t)
            nesting.record(eps0 is not None, 0.0 if eps0 is not None else 1.0, wit)
            if eps0 is None:
                continue
            j0 = window_cauchy_index(Nc, terms, eps0, t)
            if j0 is not None:
                ok = all(exact.compare(M(terms[i], terms[k], t), 1 - eps) > 0
                         for i, k in itertools.combinations(range(j0, horizon), 2))
                transfer.record(ok, 0.0 if ok else 1.0, wit)
        declared.record(nc_ok == fx.cauchy, 0.0 if nc_ok == fx.cauchy else 1.0,
                        lambda: fmt_witness(fixture=fx.name, declared=str(fx.cauchy), observed=str(nc_ok)))
        transfer.record(m_ok or not nc_ok, 0.0 if (m_ok or not nc_ok) else 1.0,
                        lambda: fmt_witness(fixture=fx.name))
        compat.record(m_ok == nc_ok, 0.0 if m_ok == nc_ok else 1.0, lambda: fmt_witness(fixture=fx.name))
    rep.samples = count
    return rep
