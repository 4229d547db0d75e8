"""Gyrogroups: the abstraction, concrete instances and their law suites.

Instances:

* :class:`MobiusDisk` -- the complex open unit disk under Möbius addition,
  exact over Gaussian rationals or in floats;
* :class:`GroupAdapter` -- any group seen as a gyrogroup with trivial gyrations
  (cyclic groups, (Q, +), the real line);
* :class:`TableGyrogroup` -- a finite magma given by its Cayley table, with
  gyrations derived from the gyrator identity.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .report import PropertyReport, fmt_witness


class Gyrogroup:
    """Base class; subclasses supply ``oplus``, ``neg``, ``identity`` and ``sample``."""

    name = "gyrogroup"
    exact = True
    tol = 0.0
    identity: Any = None

    def oplus(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def gyr(self, a, b, c):
        return gyr_via_gyrator_identity(self, a, b, c)

    def ominus(self, a, b):
        """``a ⊖ b``, that is ``a ⊕ (⊖b)``."""
        return self.oplus(a, self.neg(b))

    def eq(self, a, b) -> bool:
        return a == b

    def deviation(self, a, b) -> float:
        """How far apart two elements are, for reporting only."""
        return 0.0 if a == b else 1.0

    def format(self, a) -> str:
        return str(a)

    def sample(self, rng: random.Random):
        raise NotImplementedError(f"{self.name} has no sampler")

    def sample_small(self, rng: random.Random, scale):
        """An element near the identity; ``scale`` bounds its size where that makes sense."""
        return self.sample(rng)

    def elements(self) -> list | None:
        """All elements for finite instances, otherwise None."""
        return None

    def is_member(self, a) -> bool:
        return True


def gyr_via_gyrator_identity(G: Gyrogroup, a, b, c):
    """``gyr[a, b](c) = ⊖(a ⊕ b) ⊕ (a ⊕ (b ⊕ c))``."""
    return G.oplus(G.neg(G.oplus(a, b)), G.oplus(a, G.oplus(b, c)))


def left_translate(G: Gyrogroup, a, x):
    return G.oplus(a, x)


def right_translate(G: Gyrogroup, a, x):
    return G.oplus(x, a)


# -- Möbius disk -------------------------------------------------------------


@dataclass(frozen=True)
class MobiusPoint:
    re: Any
    im: Any

    @property
    def norm2(self):
        return self.re * self.re + self.im * self.im

    def conj(self) -> "MobiusPoint":
        return MobiusPoint(self.re, -self.im)

    def __neg__(self) -> "MobiusPoint":
        return MobiusPoint(-self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        return format_literal(self)


def format_literal(p: MobiusPoint) -> str:
    """Render as ``re+imi`` (e.g. ``4/5+0i``, ``1/2-1/3i``)."""
    re, im = p.re, p.im
    if isinstance(re, float) or isinstance(im, float):
        rs, ims = repr(float(re)), repr(abs(float(im)))
        neg = float(im) < 0 or math.copysign(1.0, float(im)) < 0 and float(im) == 0.0
    else:
        rs, ims = str(re), str(abs(im))
        neg = im < 0
    return f"{rs}{'-' if neg else '+'}{ims}i"


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_LITERAL = re.compile(rf"^([+-]?{_NUM})([+-])({_NUM})?i$")


def parse_literal(text: str, exact: bool = True) -> MobiusPoint:
    """Parse ``p/q+r/si``; decimals are accepted only when ``exact`` is False."""
    m = _LITERAL.match(text.strip().replace(" ", ""))
    if m is None:
        raise ValueError(f"element literal {text!r} must look like 'p/q+r/si'")
    re_s, sgn, im_s = m.group(1), m.group(2), m.group(3) or "1"
    if exact and any(ch in re_s + im_s for ch in ".eE"):
        raise ValueError(f"decimal literal {text!r} needs float mode")
    try:
        re_v, im_v = Fraction(re_s), Fraction(sgn + im_s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in literal {text!r}") from None
    if exact:
        return MobiusPoint(re_v, im_v)
    return MobiusPoint(float(re_v), float(im_v))


def _cmul(ar, ai, br, bi):
    return ar * br - ai * bi, ar * bi + ai * br


def _cdiv(ar, ai, br, bi):
    den = br * br + bi * bi
    assert den != 0, "division by zero in disk arithmetic"
    return (ar * br + ai * bi) / den, (ai * br - ar * bi) / den


def mobius_oplus(a: MobiusPoint, b: MobiusPoint) -> MobiusPoint:
    """``(a + b) / (1 + conj(a) b)``."""
    # conj(a) * b
    wr = a.re * b.re + a.im * b.im
    wi = a.re * b.im - a.im * b.re
    re, im = _cdiv(a.re + b.re, a.im + b.im, 1 + wr, wi)
    return MobiusPoint(re, im)


def mobius_gyr(a: MobiusPoint, b: MobiusPoint, c: MobiusPoint) -> MobiusPoint:
    """Rotate ``c`` by the unimodular factor ``(1 + a conj(b)) / (1 + conj(a) b)``."""
    wr = 1 + a.re * b.re + a.im * b.im
    wi = a.re * b.im - a.im * b.re
    # (1 + a conj(b)) = conj(w), so the factor is conj(w)^2 / |w|^2
    n2 = wr * wr + wi * wi
    fr, fi = (wr * wr - wi * wi) / n2, (-2 * wr * wi) / n2
    re, im = _cmul(fr, fi, c.re, c.im)
    return MobiusPoint(re, im)


class MobiusDisk(Gyrogroup):
    """The Möbius gyrogroup on the open unit disk."""

    def __init__(self, exact: bool = True, tol: float = 1e-9, max_den: int = 64):
        self.exact = exact
        self.tol = 0.0 if exact else tol
        self.max_den = max_den
        self.name = "mobius-exact" if exact else "mobius-float"
        zero = Fraction(0) if exact else 0.0
        self.identity = MobiusPoint(zero, zero)

    def point(self, re, im=0) -> MobiusPoint:
        """Validated constructor; rejects points on or outside the unit circle."""
        if self.exact:
            p = MobiusPoint(Fraction(re), Fraction(im))
        else:
            p = MobiusPoint(float(re), float(im))
        if not self.is_member(p):
            raise ValueError(f"{format_literal(p)} is not inside the open unit disk")
        return p

    def is_member(self, a) -> bool:
        return a.norm2 < 1

    def oplus(self, a, b):
        c = mobius_oplus(a, b)
        assert self.exact is False or c.norm2 < 1, "Möbius sum left the disk"
        return c

    def neg(self, a):
        return -a

    def gyr(self, a, b, c):
        return mobius_gyr(a, b, c)

    def eq(self, a, b) -> bool:
        if self.exact:
            return a == b
        return math.hypot(a.re - b.re, a.im - b.im) <= self.tol

    def deviation(self, a, b) -> float:
        return math.hypot(float(a.re - b.re), float(a.im - b.im))

    def format(self, a) -> str:
        return format_literal(a)

    def _coord(self, rng: random.Random):
        q = rng.randint(1, self.max_den)
        return Fraction(rng.randint(-q, q), q)

    def sample(self, rng: random.Random):
        while True:
            re, im = self._coord(rng), self._coord(rng)
            if re * re + im * im < 1:
                break
        if self.exact:
            return MobiusPoint(re, im)
        return MobiusPoint(float(re), float(im))

    def sample_small(self, rng: random.Random, scale):
        p = self.sample(rng)
        if self.exact:
            s = Fraction(scale)
        else:
            s = float(scale)
        s = min(s, 1)
        return MobiusPoint(p.re * s, p.im * s)

    def to_float(self, a: MobiusPoint) -> MobiusPoint:
        return MobiusPoint(float(a.re), float(a.im))


def conjugation(a: MobiusPoint) -> MobiusPoint:
    """Complex conjugation, an automorphism of the Möbius gyrogroup."""
    return a.conj()


# -- groups as gyrogroups ------------------------------------------------------


class GroupAdapter(Gyrogroup):
    """A group viewed as a gyrogroup whose gyrations are all the identity."""

    def __init__(self, name: str, op: Callable, inv: Callable, identity,
                 sampler: Callable[[random.Random], Any],
                 elements: Sequence | None = None,
                 small: Callable[[random.Random, Any], Any] | None = None,
                 fmt: Callable[[Any], str] = str,
                 deviation: Callable[[Any, Any], float] | None = None,
                 exact: bool = True):
        self.name = name
        self._op, self._inv = op, inv
        self.identity = identity
        self._sampler = sampler
        self._elements = list(elements) if elements is not None else None
        self._small = small
        self._fmt = fmt
        self._deviation = deviation
        self.exact = exact

    def oplus(self, a, b):
        return self._op(a, b)

    def neg(self, a):
        return self._inv(a)

    def gyr(self, a, b, c):
        return c

    def format(self, a) -> str:
        return self._fmt(a)

    def deviation(self, a, b) -> float:
        if self._deviation is not None:
            return self._deviation(a, b)
        return super().deviation(a, b)

    def sample(self, rng):
        return self._sampler(rng)

    def sample_small(self, rng, scale):
        if self._small is None:
            return self.sample(rng)
        return self._small(rng, scale)

    def elements(self):
        return self._elements


def cyclic_group(n: int) -> GroupAdapter:
    """Z_n under addition mod n."""
    if n < 1:
        raise ValueError("order must be positive")
    return GroupAdapter(
        f"z{n}", lambda a, b: (a + b) % n, lambda a: (-a) % n, 0,
        lambda rng: rng.randrange(n), elements=range(n),
    )


def _rational_sample(rng: random.Random, max_den: int = 64, bound: int = 4) -> Fraction:
    q = rng.randint(1, max_den)
    return Fraction(rng.randint(-bound * q, bound * q), q)


def rationals_additive(max_den: int = 64) -> GroupAdapter:
    """(Q, +) with Fraction elements."""
    return GroupAdapter(
        "q-add", lambda a, b: a + b, lambda a: -a, Fraction(0),
        lambda rng: _rational_sample(rng, max_den),
        small=lambda rng, s: _rational_sample(rng, max_den, 1) * Fraction(s),
        deviation=lambda a, b: abs(float(a - b)),
    )


def real_line(max_den: int = 64) -> GroupAdapter:
    """(R, +); elements are any exact reals, samples are rationals (a dense subset)."""
    G = rationals_additive(max_den)
    G.name = "r-add"
    return G


# -- finite tables -------------------------------------------------------------


class TableGyrogroup(Gyrogroup):
    """A finite gyrogroup given by a Cayley table over indices 0..n-1.

    Gyrations are derived from the gyrator identity and tabulated once.
    """

    def __init__(self, cells: Sequence[Sequence[int]], names: Sequence[str] | None = None,
                 name: str = "table"):
        n = len(cells)
        self.n = n
        self.cells = tuple(tuple(r) for r in cells)
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        self.name = name
        e = find_identity(self.cells)
        if e is None:
            raise ValueError("table has no two-sided identity")
        self.identity = e
        inv = find_inverses(self.cells, e)
        if inv is None:
            raise ValueError("some element has no left inverse")
        self._inv = inv
        op = self.cells
        self._gyr = [[[op[inv[op[a][b]]][op[a][op[b][c]]] for c in range(n)]
                      for b in range(n)] for a in range(n)]

    def oplus(self, a, b):
        return self.cells[a][b]

    def neg(self, a):
        return self._inv[a]

    def gyr(self, a, b, c):
        return self._gyr[a][b][c]

    def format(self, a) -> str:
        return self.names[a]

    def sample(self, rng):
        return rng.randrange(self.n)

    def elements(self):
        return list(range(self.n))


def find_identity(cells: Sequence[Sequence[int]]) -> int | None:
    """Smallest e with e⊕x = x and x⊕e = x for all x."""
    n = len(cells)
    for e in range(n):
        if all(cells[e][x] == x for x in range(n)) and all(cells[x][e] == x for x in range(n)):
            return e
    return None


def find_inverses(cells: Sequence[Sequence[int]], e: int) -> list[int] | None:
    n = len(cells)
    inv = []
    for x in range(n):
        cands = [y for y in range(n) if cells[y][x] == e]
        if not cands:
            return None
        inv.append(cands[0])
    return inv


# -- law suites ----------------------------------------------------------------


Sampler = Callable[[random.Random], Any]


def _tuples(G: Gyrogroup, arity: int, n: int, rng: random.Random,
            sampler: Sampler | None) -> Iterable[tuple]:
    """All ``arity``-tuples for finite G when n covers them, else n sampled tuples."""
    elems = G.elements()
    if elems is not None and n >= len(elems) ** arity:
        yield from itertools.product(elems, repeat=arity)
        return
    draw = sampler or G.sample
    for _ in range(n):
        yield tuple(draw(rng) for _ in range(arity))


def _check_eq(G, check, lhs, rhs, **wit):
    ok = G.eq(lhs, rhs)
    dev = 0.0 if (ok and G.exact) else G.deviation(lhs, rhs)
    return check.record(ok, dev, lambda: fmt_witness(**{k: G.format(v) for k, v in wit.items()}))


def verify_gyrogroup_axioms(G: Gyrogroup, n: int = 1000, seed: int = 0,
                            sampler: Sampler | None = None) -> PropertyReport:
    """Check (G1)-(G4) and that each gyration is an automorphism.

    Finite instances are checked exhaustively when ``n`` is at least the
    number of 4-tuples of elements.
    """
    rng = random.Random(seed)
    rep = PropertyReport(f"gyrogroup-axioms:{G.name}", seed=seed)
    g1, g2, g3 = rep.law("G1"), rep.law("G2"), rep.law("G3")
    g4, aut = rep.law("G4"), rep.law("gyr-automorphism")
    e = G.identity
    count = 0
    for x, y, z, w in _tuples(G, 4, n, rng, sampler):
        count += 1
        _check_eq(G, g1, G.oplus(e, x), x, x=x)
        _check_eq(G, g2, G.oplus(G.neg(x), x), e, x=x)
        lhs = G.oplus(x, G.oplus(y, z))
        rhs = G.oplus(G.oplus(x, y), G.gyr(x, y, z))
        _check_eq(G, g3, lhs, rhs, x=x, y=y, z=z)
        _check_eq(G, g4, G.gyr(G.oplus(x, y), y, z), G.gyr(x, y, z), x=x, y=y, z=z)
        lhs = G.gyr(x, y, G.oplus(z, w))
        rhs = G.oplus(G.gyr(x, y, z), G.gyr(x, y, w))
        _check_eq(G, aut, lhs, rhs, x=x, y=y, z=z, w=w)
    elems = G.elements()
    if elems is not None:
        bij = rep.law("gyr-bijective")
        for a, b in itertools.product(elems, repeat=2):
            image = {G.gyr(a, b, c) for c in elems}
            bij.record(len(image) == len(elems), 0.0 if len(image) == len(elems) else 1.0,
                       fmt_witness(a=G.format(a), b=G.format(b)))
    rep.samples = count
    return rep


IDENTITY_LAWS = (
    "(1) involution", "(2) left-cancellation", "(3) gyrator-identity",
    "(4) inverse-of-sum", "(5) gyro-chain", "(6) even-property", "(7) inversive-symmetry",
)


def verify_identities(G: Gyrogroup, n: int = 1000, seed: int = 0,
                      sampler: Sampler | None = None) -> PropertyReport:
    """Check the seven standard gyrogroup identities on sampled triples."""
    rng = random.Random(seed)
    rep = PropertyReport(f"gyrogroup-identities:{G.name}", seed=seed)
    c1, c2, c3, c4, c5, c6, c7 = (rep.law(name) for name in IDENTITY_LAWS)
    count = 0
    for a, b, c in _tuples(G, 3, n, rng, sampler):
        count += 1
        na, nb = G.neg(a), G.neg(b)
        _check_eq(G, c1, G.neg(na), a, a=a)
        _check_eq(G, c2, G.oplus(na, G.oplus(a, b)), b, a=a, b=b)
        _check_eq(G, c3, G.gyr(a, b, c), gyr_via_gyrator_identity(G, a, b, c), a=a, b=b, c=c)
        _check_eq(G, c4, G.neg(G.oplus(a, b)), G.gyr(a, b, G.oplus(nb, na)), a=a, b=b)
        lhs = G.oplus(G.oplus(na, b), G.gyr(na, b, G.oplus(nb, c)))
        _check_eq(G, c5, lhs, G.oplus(na, c), a=a, b=b, c=c)
        _check_eq(G, c6, G.gyr(a, b, c), G.gyr(na, nb, c), a=a, b=b, c=c)
        _check_eq(G, c7, G.gyr(a, b, G.gyr(b, a, c)), c, a=a, b=b, c=c)
    rep.samples = count
    return rep
