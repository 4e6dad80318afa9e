import math
import random

import pytest
from mpmath import mp, mpf

from alphapatch.interval import (
    Interval,
    DivisionByZeroInterval,
    DomainViolation,
    EndpointOverflow,
    PI,
    TWO_PI,
    SQRT3_THIRD,
)

mp.dps = 40


def test_add_endpoint_formula():
    r = Interval(1, 2) + Interval(3, 4)
    assert r.lo <= 4.0 <= 6.0 <= r.hi
    assert 4.0 - r.lo <= 4 * math.ulp(4.0)
    assert r.hi - 6.0 <= 4 * math.ulp(6.0)


def test_mul_endpoint_formula():
    r = Interval(-1, 2) * Interval(3, 4)
    assert r.lo <= -4.0 and r.hi >= 8.0
    assert r.width() <= 12.0 + 8 * math.ulp(8.0)


def test_div_by_zero_interval():
    with pytest.raises(DivisionByZeroInterval):
        Interval(1, 1) / Interval(-1, 1)


def test_point_width_control():
    # point inputs: arithmetic results stay within 4 ulp of the midpoint
    rnd = random.Random(7)
    for _ in range(2000):
        x = rnd.uniform(-50, 50)
        y = rnd.uniform(-50, 50)
        for op in ("add", "sub", "mul", "div"):
            if op == "div" and abs(y) < 1e-3:
                continue
            a, b = Interval(x), Interval(y)
            r = {
                "add": a + b,
                "sub": a - b,
                "mul": a * b,
                "div": a / b,
            }[op]
            assert r.width() <= 4 * math.ulp(abs(r.mid()) + 1e-300)


def test_sin_quarter_period():
    r = Interval(0.0, math.pi / 2).sin()
    assert r.lo <= 0.0 <= 1.0 <= r.hi
    assert r.lo >= 0.0  # clamped: sin >= 0 on [0, pi]
    assert r.hi - 1.0 <= 4 * math.ulp(1.0)


def test_cos_extremum_detection():
    r = Interval(-0.5, 0.5).cos()
    assert r.hi == 1.0
    assert r.lo <= math.cos(0.5)
    r2 = Interval(3.0, 3.5).cos()
    assert r2.lo == -1.0


def test_log_tight():
    r = Interval(1.0, math.e).log()
    assert r.lo <= 0.0 and r.hi >= 1.0
    assert r.width() <= 1.0 + 1e-14


def test_log_domain():
    with pytest.raises(DomainViolation):
        Interval(0.0, 1.0).log()
    with pytest.raises(DomainViolation):
        Interval(-1.0, 1.0).sqrt()


def test_abs():
    r = abs(Interval(-3.0, 2.0))
    assert (r.lo, r.hi) == (0.0, 3.0)


def test_pow_interval_exponent():
    r = Interval(4.0, 9.0).pow(Interval(0.5, 0.5))
    assert r.lo <= 2.0 and r.hi >= 3.0
    assert r.width() <= 1.0 + 1e-12
    r2 = Interval(2.0, 2.0).pow(Interval(1.0, 2.0))
    assert r2.lo <= 2.0 and r2.hi >= 4.0
    with pytest.raises(DomainViolation):
        Interval(0.0, 1.0).pow(Interval(1.0, 1.0))


def test_tan_pole():
    with pytest.raises(DomainViolation):
        Interval(1.0, 2.0).tan()
    r = Interval(-0.5, 0.5).tan()
    assert r.lo <= math.tan(-0.5) <= math.tan(0.5) <= r.hi


def test_overflow_reported():
    with pytest.raises(EndpointOverflow):
        Interval(1e308) * Interval(10.0)
    with pytest.raises(EndpointOverflow):
        Interval(900.0).exp()


def test_powi():
    r = Interval(-2.0, 3.0).powi(2)
    assert r.lo == 0.0 and r.hi >= 9.0
    r3 = Interval(-2.0, 3.0).powi(3)
    assert r3.lo <= -8.0 and r3.hi >= 27.0
    assert Interval(5.0).powi(0) == Interval(1.0)


def test_constants_enclose():
    assert mpf(PI.lo) <= mp.pi <= mpf(PI.hi)
    assert PI.hi - PI.lo <= 2 * math.ulp(math.pi)
    assert mpf(TWO_PI.lo) <= 2 * mp.pi <= mpf(TWO_PI.hi)
    s = mp.sqrt(3) / 3
    assert mpf(SQRT3_THIRD.lo) <= s <= mpf(SQRT3_THIRD.hi)


_OPS = ("add", "sub", "mul", "div")


def _rand_interval(rnd):
    c = rnd.uniform(-100, 100)
    w = abs(rnd.gauss(0, 1)) * 10 ** rnd.randint(-12, 1)
    return Interval(c - w, c + w)


def test_containment_random_sample():
    """Fast version of the randomized containment sweep (the full million-
    operation run lives in the acceptance suite)."""
    rnd = random.Random(42)
    for _ in range(20000):
        X = _rand_interval(rnd)
        Y = _rand_interval(rnd)
        x = rnd.uniform(X.lo, X.hi)
        y = rnd.uniform(Y.lo, Y.hi)
        op = _OPS[rnd.randrange(4)]
        if op == "div" and Y.straddles_zero():
            continue
        Z = {
            "add": lambda: X + Y,
            "sub": lambda: X - Y,
            "mul": lambda: X * Y,
            "div": lambda: X / Y,
        }[op]()
        exact = {
            "add": mpf(x) + mpf(y),
            "sub": mpf(x) - mpf(y),
            "mul": mpf(x) * mpf(y),
            "div": mpf(x) / mpf(y),
        }[op]
        assert mpf(Z.lo) <= exact <= mpf(Z.hi), (op, X, Y, x, y)


def test_inclusion_monotonicity():
    rnd = random.Random(99)
    for _ in range(3000):
        X = _rand_interval(rnd)
        Y = _rand_interval(rnd)
        Xp = Interval(X.lo - abs(rnd.gauss(0, 0.1)), X.hi + abs(rnd.gauss(0, 0.1)))
        Yp = Interval(Y.lo - abs(rnd.gauss(0, 0.1)), Y.hi + abs(rnd.gauss(0, 0.1)))
        for op in ("add", "sub", "mul"):
            f = {
                "add": lambda a, b: a + b,
                "sub": lambda a, b: a - b,
                "mul": lambda a, b: a * b,
            }[op]
            assert f(X, Y).is_subset(f(Xp, Yp))


def test_elem_containment_random():
    rnd = random.Random(3)
    for _ in range(5000):
        c = rnd.uniform(-8, 8)
        w = abs(rnd.gauss(0, 0.5))
        X = Interval(c - w, c + w)
        x = rnd.uniform(X.lo, X.hi)
        assert X.sin().contains(math.sin(x)) or mpf(X.sin().lo) <= mp.sin(mpf(x)) <= mpf(X.sin().hi)
        assert mpf(X.cos().lo) <= mp.cos(mpf(x)) <= mpf(X.cos().hi)
        if X.lo > 0:
            assert mpf(X.log().lo) <= mp.log(mpf(x)) <= mpf(X.log().hi)
            assert mpf(X.sqrt().lo) <= mp.sqrt(mpf(x)) <= mpf(X.sqrt().hi)
        if X.hi < 700:
            assert mpf(X.exp().lo) <= mp.exp(mpf(x)) <= mpf(X.exp().hi)
