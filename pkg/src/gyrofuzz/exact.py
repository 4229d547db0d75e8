"""Exact real numbers built from rationals and square roots of rationals.

Norms on the rational Möbius disk are square roots of rationals, so fuzzy
norm values such as ``t / (t + sqrt(q))`` leave the field of rationals.
:class:`Real` keeps such values as small expression trees and decides
comparisons exactly:

1. structurally identical expressions are equal (``a - a`` folds to ``0``);
2. otherwise an outward-rounded float enclosure is tried;
3. then rational enclosures at increasing precision;
4. a difference that refuses to separate from zero is settled symbolically
   through its minimal polynomial.

Every value that is actually rational stays a :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]
Number = Union[int, Fraction, "Real"]

_INF = math.inf


def to_fraction(x) -> Fraction:
    """Convert ints, Fractions, decimal strings and floats to a Fraction.

    Floats go through ``repr`` so that ``0.19`` becomes ``19/100`` rather than
    its binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def _isqrt_fraction(q: Fraction) -> Fraction | None:
    """Exact rational square root of ``q`` or None."""
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_rational(q) -> Number:
    """Square root of a nonnegative rational, exact."""
    q = to_fraction(q)
    if q < 0:
        raise ValueError(f"sqrt of negative rational {q}")
    r = _isqrt_fraction(q)
    if r is not None:
        return r
    return Real("sqrt", (q,))


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


_RATIONAL_TYPES = (int, Fraction)


def _is_rational(x) -> bool:
    # exact type test: isinstance against Fraction goes through the numbers ABCs
    return type(x) in _RATIONAL_TYPES or (type(x) is not Real and isinstance(x, _RATIONAL_TYPES))


def _is_number(x) -> bool:
    return type(x) in _NUMBER_TYPES or isinstance(x, (int, Fraction, Real))


def _key(x):
    if type(x) is Real:
        return x.key
    return ("q", Fraction(x))


class Real:
    """An exact real number given by an expression over rationals and sqrt."""

    __slots__ = ("op", "args", "key", "_fe")

    def __init__(self, op: str, args: tuple):
        self.op = op
        self.args = args
        if op == "sqrt":
            self.key = ("sqrt", args[0])
        else:
            self.key = (op,) + tuple(_key(a) for a in args)
        self._fe = None

    __hash__ = None  # equality is semantic, not structural

    # -- enclosures ---------------------------------------------------------

    def fenclose(self) -> tuple[float, float]:
        """Rigorous float enclosure (each IEEE op rounded outward by one ulp)."""
        if self._fe is None:
            self._fe = self._fenclose()
        return self._fe

    def _fenclose(self) -> tuple[float, float]:
        op = self.op
        if op == "sqrt":
            f = float(self.args[0])
            lo, hi = _down(f), _up(f)
            return _down(math.sqrt(max(lo, 0.0))), _up(math.sqrt(hi))
        encs = [_fenc(a) for a in self.args]
        if op == "neg":
            lo, hi = encs[0]
            return -hi, -lo
        (alo, ahi), (blo, bhi) = encs
        if op == "add":
            return _down(alo + blo), _up(ahi + bhi)
        if op == "sub":
            return _down(alo - bhi), _up(ahi - blo)
        if op == "mul":
            ps = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
            return _down(min(ps)), _up(max(ps))
        if op == "div":
            if blo <= 0.0 <= bhi:
                return -_INF, _INF
            ps = (alo / blo, alo / bhi, ahi / blo, ahi / bhi)
            return _down(min(ps)), _up(max(ps))
        if op == "max":
            return max(alo, blo), max(ahi, bhi)
        if op == "min":
            return min(alo, blo), min(ahi, bhi)
        raise AssertionError(op)

    def enclose(self, bits: int) -> tuple[Fraction, Fraction] | None:
        """Rational enclosure; sqrt leaves are resolved to ``2**-bits``.

        Returns None when a divisor enclosure still contains zero.
        """
        op = self.op
        if op == "sqrt":
            q = self.args[0]
            scale = 1 << bits
            r = math.isqrt(q.numerator * scale * scale // q.denominator)
            return Fraction(r, scale), Fraction(r + 1, scale)
        encs = []
        for a in self.args:
            e = (Fraction(a), Fraction(a)) if _is_rational(a) else a.enclose(bits)
            if e is None:
                return None
            encs.append(e)
        if op == "neg":
            lo, hi = encs[0]
            return -hi, -lo
        (alo, ahi), (blo, bhi) = encs
        if op == "add":
            return alo + blo, ahi + bhi
        if op == "sub":
            return alo - bhi, ahi - blo
        if op == "mul":
            ps = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
            return min(ps), max(ps)
        if op == "div":
            if blo <= 0 <= bhi:
                return None
            ps = (alo / blo, alo / bhi, ahi / blo, ahi / bhi)
            return min(ps), max(ps)
        if op == "max":
            return max(alo, blo), max(ahi, bhi)
        if op == "min":
            return min(alo, blo), min(ahi, bhi)
        raise AssertionError(op)

    def to_sympy(self):
        import sympy

        def conv(a):
            if _is_rational(a):
                a = Fraction(a)
                return sympy.Rational(a.numerator, a.denominator)
            return a.to_sympy()

        op = self.op
        if op == "sqrt":
            return sympy.sqrt(conv(self.args[0]))
        xs = [conv(a) for a in self.args]
        if op == "neg":
            return -xs[0]
        a, b = xs
        return {
            "add": lambda: a + b,
            "sub": lambda: a - b,
            "mul": lambda: a * b,
            "div": lambda: a / b,
            "max": lambda: sympy.Max(a, b),
            "min": lambda: sympy.Min(a, b),
        }[op]()

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        return _binary("add", self, other)

    def __radd__(self, other):
        return _binary("add", other, self)

    def __sub__(self, other):
        return _binary("sub", self, other)

    def __rsub__(self, other):
        return _binary("sub", other, self)

    def __mul__(self, other):
        return _binary("mul", self, other)

    def __rmul__(self, other):
        return _binary("mul", other, self)

    def __truediv__(self, other):
        return _binary("div", self, other)

    def __rtruediv__(self, other):
        return _binary("div", other, self)

    def __neg__(self):
        return Real("neg", (self,))

    def __pos__(self):
        return self

    def __abs__(self):
        return self if sign(self) >= 0 else -self

    # -- comparisons --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, (int, Fraction, Real)):
            return NotImplemented
        return compare(self, other) == 0

    def __ne__(self, other):
        if not isinstance(other, (int, Fraction, Real)):
            return NotImplemented
        return compare(self, other) != 0

    def __lt__(self, other):
        if not isinstance(other, (int, Fraction, Real)):
            return NotImplemented
        return compare(self, other) < 0

    def __le__(self, other):
        if not isinstance(other, (int, Fraction, Real)):
            return NotImplemented
        return compare(self, other) <= 0

    def __gt__(self, other):
        if not isinstance(other, (int, Fraction, Real)):
            return NotImplemented
        return compare(self, other) > 0

    def __ge__(self, other):
        if not isinstance(other, (int, Fraction, Real)):
            return NotImplemented
        return compare(self, other) >= 0

    def __float__(self):
        lo, hi = self.fenclose()
        if math.isfinite(lo) and math.isfinite(hi):
            return (lo + hi) / 2
        lo, hi = _refine(self, 128)
        return float((lo + hi) / 2)

    def __floor__(self):
        bits = 64
        while True:
            enc = _refine(self, bits)
            lo, hi = math.floor(enc[0]), math.floor(enc[1])
            if lo == hi:
                return lo
            # straddles the integer hi; decide x >= hi exactly
            return hi if compare(self, hi) >= 0 else lo

    def __str__(self):
        return _format(self)

    def __repr__(self):
        return f"Real({_format(self)})"


def _format(x) -> str:
    if _is_rational(x):
        return str(Fraction(x))
    if x.op == "sqrt":
        return f"sqrt({x.args[0]})"
    if x.op == "neg":
        return f"-({_format(x.args[0])})"
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}.get(x.op)
    a, b = (_format(v) for v in x.args)
    if sym is None:
        return f"{x.op}({a}, {b})"
    return f"({a} {sym} {b})"


def _fenc(x) -> tuple[float, float]:
    if _is_rational(x):
        f = float(x)
        if Fraction(f) == x:
            return f, f
        return _down(f), _up(f)
    return x.fenclose()


def _binary(op: str, a, b):
    if not (_is_number(a) and _is_number(b)):
        return NotImplemented
    if _is_rational(a) and _is_rational(b):
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if op == "div":
            return Fraction(a) / b
        return max(a, b) if op == "max" else min(a, b)
    # cheap algebraic folds; everything else stays symbolic
    if op == "sub" and _key(a) == _key(b):
        return Fraction(0)
    if op in ("add", "sub") and _is_rational(b) and b == 0:
        return a
    if op == "add" and _is_rational(a) and a == 0:
        return b
    if op == "mul":
        if (_is_rational(a) and a == 0) or (_is_rational(b) and b == 0):
            return Fraction(0)
        if _is_rational(a) and a == 1:
            return b
        if _is_rational(b) and b == 1:
            return a
    if op == "div":
        if _is_rational(b) and b == 0:
            raise ZeroDivisionError("division of Real by zero")
        if _is_rational(b) and b == 1:
            return a
        if _key(a) == _key(b):
            return Fraction(1)
    if op in ("max", "min") and _key(a) == _key(b):
        return a
    return Real(op, (a, b))


def real_max(a, b):
    """Exact max that stays symbolic when the order is not cheap to decide."""
    return _binary("max", a, b)


def real_min(a, b):
    return _binary("min", a, b)


def _refine(x: Real, bits: int) -> tuple[Fraction, Fraction]:
    while True:
        enc = x.enclose(bits)
        if enc is not None:
            return enc
        bits *= 2


def _is_zero_symbolic(x: Real) -> bool:
    import sympy

    expr = x.to_sympy()
    z = sympy.Symbol("z")
    try:
        poly = sympy.minimal_polynomial(expr, z)
    except (NotImplementedError, ValueError):
        verdict = expr.equals(0)
        if verdict is None:
            raise ArithmeticError(f"cannot decide whether {x} is zero")
        return bool(verdict)
    return sympy.Poly(poly, z).monoms() == [(1,)]


def sign(x) -> int:
    """Exact sign of a rational or :class:`Real`."""
    if _is_rational(x):
        return (x > 0) - (x < 0)
    lo, hi = x.fenclose()
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    for bits in (96, 320):
        enc = x.enclose(bits)
        if enc is None:
            continue
        lo, hi = enc
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    if _is_zero_symbolic(x):
        return 0
    bits = 640
    while True:
        enc = x.enclose(bits)
        if enc is not None:
            lo, hi = enc
            if lo > 0:
                return 1
            if hi < 0:
                return -1
        bits *= 2


def compare(a, b) -> int:
    """Exact three-way comparison of rationals and Reals."""
    if _is_rational(a) and _is_rational(b):
        return (a > b) - (a < b)
    if _key(a) == _key(b):
        return 0
    return sign(_binary("sub", a, b))


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, Real))


def approx(x) -> float:
    """Float value of any supported number."""
    return float(x)


_NUMBER_TYPES = (int, Fraction, Real)
