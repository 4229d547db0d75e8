import random
from fractions import Fraction

import mpmath
import pytest

from gyrofuzz import exact
from gyrofuzz.fuzzy_metric import (KLEE_AUDITS, KLEE_CONDITIONS, Ball, Metric,
                                   abs_difference_metric, automorphism_isometry_check,
                                   ball_membership, check_invariance, check_klee,
                                   continuity_witness, gyronorm_from_invariant_metric,
                                   gyronorm_metric, metric_from_fuzzy_gyronorm, round_trip_check,
                                   standard_fuzzy_metric, verify_fuzzy_metric, verify_metric)
from gyrofuzz.gyro_core import MobiusDisk, conjugation, rationals_additive, real_line
from gyrofuzz.norms import abs_gyronorm, fuzzy_from_gyronorm
from gyrofuzz.tnorm import LUKASIEWICZ, MIN, PRODUCT

F = Fraction
D = MobiusDisk()
R = real_line()
Q = rationals_additive()
N_MIN = fuzzy_from_gyronorm(abs_gyronorm(D), MIN)
M_MIN = metric_from_fuzzy_gyronorm(N_MIN)
M_R = standard_fuzzy_metric(abs_difference_metric(R), MIN)


def mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


def mp_of(v):
    lo, hi = v.enclose(200) if isinstance(v, exact.Real) else (v, v)
    return (mp(lo) + mp(hi)) / 2


def const_metric(value):
    G = rationals_additive()
    return Metric(G, lambda x, y: value(x, y))


def test_standard_metric_values():
    d = const_metric(lambda x, y: abs(x - y))
    M = standard_fuzzy_metric(d, PRODUCT)
    assert M(F(0), F(1), F(1)) == F(1, 2)
    assert M(F(0), F(3), F(1)) == F(1, 4)
    assert M(F(2), F(2), F(5)) == 1
    with pytest.raises(ValueError):
        M(F(0), F(1), 0)


def test_induced_metric_values():
    assert M_MIN(D.identity, D.point(F(1, 2)), 1) == F(2, 3)
    x, y = D.point(F(1, 2)), D.point(0, F(1, 2))
    for t in (F(1, 3), F(1), F(7)):
        assert exact.compare(M_MIN(x, y, t), M_MIN(y, x, t)) == 0


def test_recovered_norm_agrees():
    N_M = gyronorm_from_invariant_metric(M_MIN, check=100)
    rng = random.Random(4)
    for _ in range(100):
        x = D.sample(rng)
        t = F(rng.randint(1, 8), 4)
        assert exact.compare(N_M(x, t), N_MIN(x, t)) == 0
        assert exact.compare(N_M(D.neg(x), t), N_M(x, t)) == 0


def test_recovering_a_norm_needs_left_invariance():
    skew = standard_fuzzy_metric(const_metric(lambda x, y: abs(x ** 3 - y ** 3)), MIN)
    with pytest.raises(ValueError):
        gyronorm_from_invariant_metric(skew, check=100)


def test_metric_suites():
    assert verify_metric(gyronorm_metric(abs_gyronorm(D)), n=300).passed
    assert verify_metric(abs_difference_metric(Q), n=300).passed
    broken = Metric(Q, lambda x, y: (x - y) if x > y else 2 * (y - x), "lopsided")
    assert not verify_metric(broken, n=200)["symmetry"].passed


@pytest.mark.parametrize("t", [MIN, PRODUCT, LUKASIEWICZ], ids=lambda t: t.name)
def test_induced_fuzzy_metric_suite(t):
    M = metric_from_fuzzy_gyronorm(fuzzy_from_gyronorm(abs_gyronorm(D), t))
    rep = verify_fuzzy_metric(M, n=120, seed=2)
    assert rep.passed, rep.failures
    assert "(iii) gyration-step" in rep


def test_fuzzy_metric_suite_catches_bad_triangle():
    # 1 / (1 + d^2): M(0, 2) = 1/5 < min(M(0, 1), M(1, 2)) = 1/2
    from gyrofuzz.fuzzy_metric import FuzzyMetric
    M = FuzzyMetric(Q, MIN, lambda x, y, t: 1 / (1 + (x - y) ** 2), "squared")
    assert not verify_fuzzy_metric(M, n=200)["(iv)"].passed


def test_mobius_left_and_gyration_invariance():
    for side in ("left", "gyration"):
        rep = check_invariance(M_MIN, side, n=150, seed=1)
        assert rep.passed
        assert rep[f"{side}-invariance"].max_deviation == 0


def test_mobius_metric_is_not_right_invariant():
    rep = check_invariance(M_MIN, "right", n=200, seed=0)
    assert not rep.passed
    assert rep["right-invariance"].witness is not None


def test_skewed_metric_right_invariance_witness():
    skew = standard_fuzzy_metric(const_metric(lambda x, y: abs(x ** 3 - y ** 3)), MIN)
    # a=1, x=0, y=1: d(1, 2) = 7 but d(0, 1) = 1
    assert skew(F(1), F(2), F(1)) == F(1, 8)
    assert skew(F(0), F(1), F(1)) == F(1, 2)
    grid = iter([F(1), F(0), F(0), F(1)])  # a, b, x, y
    rep = check_invariance(skew, "right", n=1, sampler=lambda rng: next(grid), t_grid=(F(1),))
    assert not rep.passed
    assert rep["right-invariance"].witness == {"a": "1", "x": "0", "y": "1", "t": "1"}


def test_invariance_side_validated():
    with pytest.raises(ValueError):
        check_invariance(M_MIN, "up")


def test_klee_on_the_line_all_hold():
    rep = check_klee(M_R, n=300, seed=1)
    assert rep.consistent
    for cond in KLEE_CONDITIONS:
        assert rep.holds(cond), cond


def test_klee_on_mobius_is_consistent():
    rep = check_klee(M_MIN, n=300, seed=1)
    assert rep.consistent
    assert set(rep.violations) == set(KLEE_AUDITS)
    assert not rep.holds("(I)") and not rep.holds("(II)'")
    assert "audit_violations" in rep.to_dict()


def test_klee_inequality_counterexample_on_mobius():
    x, y = D.point(F(4, 19), F(1, 9)), D.point(F(11, 17), F(-4, 9))
    a, b = D.point(F(2, 7), F(7, 61)), D.point(F(19, 29), F(-4, 9))
    t, s = F(1, 2), F(1, 4)
    lhs = M_MIN(D.oplus(x, y), D.oplus(a, b), t + s)
    rhs = MIN(M_MIN(x, a, t), M_MIN(y, b, s))
    assert exact.compare(lhs, rhs) < 0
    # same values from complex arithmetic at 50 digits
    mpmath.mp.dps = 50
    z = lambda p: mpmath.mpc(mp(p.re), mp(p.im))
    op = lambda u, v: (u + v) / (1 + mpmath.conj(u) * v)
    Mz = lambda u, v, r: r / (r + abs(op(-u, v)))
    want_l = Mz(op(z(x), z(y)), op(z(a), z(b)), mp(t + s))
    want_r = min(Mz(z(x), z(a), mp(t)), Mz(z(y), z(b), mp(s)))
    assert abs(mp_of(lhs) - want_l) < 1e-30 and abs(mp_of(rhs) - want_r) < 1e-30


def test_klee_inequality_with_identity_summands():
    # with y = b = e the inequality reduces to monotonicity in t
    rng = random.Random(11)
    e = D.identity
    for _ in range(100):
        x, a = D.sample(rng), D.sample(rng)
        t, s = F(rng.randint(1, 8), 4), F(rng.randint(1, 8), 4)
        lhs = M_MIN(D.oplus(x, e), D.oplus(a, e), t + s)
        assert exact.compare(lhs, MIN(M_MIN(x, a, t), M_MIN(e, e, s))) >= 0


def test_ball_membership_examples():
    M = standard_fuzzy_metric(abs_difference_metric(Q), PRODUCT)
    assert not ball_membership(M, Ball(F(0), F(2, 5), F(1)), F(1))
    assert ball_membership(M, Ball(F(0), F(3, 5), F(1)), F(1))


@pytest.mark.parametrize("eps,t", [(0, 1), (1, 1), (F(1, 2), 0)])
def test_bad_balls(eps, t):
    with pytest.raises(ValueError):
        Ball(F(0), eps, t)


def test_continuity_witness_min():
    w = continuity_witness(M_R, F(1, 3), F(-2), F(1, 2), F(1), n=200, seed=3)
    assert w.holds
    assert F(1, 2) - F(1, 10**9) <= w.eps0 < F(1, 2)
    assert w.t_half == F(1, 2)
    assert w.inversion_checked == 200


def test_continuity_witness_unsound_without_klee():
    w = continuity_witness(M_R, F(0), F(0), F(1, 4), F(1), n=10, klee=False)
    assert not w.sound and not w.holds


@pytest.mark.parametrize("name,alpha", [
    ("conjugation", conjugation),
    ("gyr[1/2,i/2]", lambda c: D.gyr(D.point(F(1, 2)), D.point(0, F(1, 2)), c)),
])
def test_automorphisms_are_isometries(name, alpha):
    rep = automorphism_isometry_check(N_MIN, alpha, n=80, seed=0, name=name, gyrations=3)
    assert rep.passed
    assert f"{name}:isometry" in rep


def test_non_isometry_reports_precondition():
    N = fuzzy_from_gyronorm(abs_gyronorm(Q), MIN)
    rep = automorphism_isometry_check(N, lambda x: 2 * x, n=50, name="double", gyrations=0)
    assert rep["double:precondition:homomorphism"].passed
    assert not rep["double:precondition:norm-preservation"].passed
    assert "double:isometry" not in rep


def test_round_trip():
    rep = round_trip_check(N_MIN, n=100, seed=2)
    assert rep.passed
