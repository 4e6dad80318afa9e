"""Boundary curve families and their validated derivative evaluation.

Two families appear in the proofs:

* the bump-sine curve  z(x) = (2 e^{1 - 1/(1-(x/pi)^2)} - 1, sin(x - C)),
  defined on [-pi, pi] and extended 2pi-periodically (the first component is
  even, approaches -1 at +-pi, and all its derivatives vanish there);
* ellipses  z(x) = (R1 cos x, R2 sin x).

The k-th derivative of the bump component factors as

    d_k(x) * e^{1 - 1/(1-(x/pi)^2)} / (x^2 - pi^2)^{2k}

where d_k is a polynomial with integer coefficients in x and pi.  The tables
below hold d_1..d_6 expanded into monomials ``coef * pi^p * x^q``.  They
satisfy the recurrence

    d_{k+1} = d_k' (x^2-pi^2)^2 - 2 pi^2 x d_k - 4 k x (x^2-pi^2) d_k,

which the test suite cross-checks against extended-precision numerical
differentiation of the closed form.  Note the x^10 monomial of d_6: the
recurrence forces coefficient +14880 pi^8 (inner factor -930), and only with
that sign is d_6 positive near +-pi; the sign tasks would fail otherwise.

Evaluation is generic over :class:`Interval` and :class:`Jet4` scalars, so
the same code path serves plain enclosures and differentiation arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .interval import Interval, DomainViolation, PI, TWO_PI, ZERO, ONE
from .jets import Jet4

__all__ = [
    "Bump",
    "Ellipse",
    "CurveFamily",
    "AxisRatio",
    "ZoneViolation",
    "DegenerateTangent",
    "EPS_ZONE",
    "ZONE_LEFT",
    "ZONE_RIGHT",
    "periodic_reduce",
    "curve_deriv",
    "lemma_poly",
    "hull_enclosure",
    "curvature",
    "bump_envelope",
    "z1_derivs",
    "z2_derivs",
]


class ZoneViolation(DomainViolation):
    """Argument not inside one of the +-pi endpoint zones."""


class DegenerateTangent(DomainViolation):
    """Tangent-speed enclosure touches zero; curvature undefined."""


EPS_ZONE = 1.0 / 128.0  # representable exactly

_PI2 = PI.sqr()

# zone enclosures, widened one ulp outward so they cover the true zones
ZONE_LEFT = Interval(-PI.hi, math.nextafter(-PI.lo + EPS_ZONE, math.inf))
ZONE_RIGHT = Interval(math.nextafter(PI.lo - EPS_ZONE, -math.inf), PI.hi)


@dataclass(frozen=True)
class Bump:
    """Bump-sine proof curve; ``c_phase`` encloses the phase constant C."""

    c_phase: Interval

    @classmethod
    def from_float(cls, c):
        return cls(Interval.around(c))


@dataclass(frozen=True)
class Ellipse:
    r1: float
    r2: float

    def __post_init__(self):
        if not (self.r1 > 0 and self.r2 > 0):
            raise ValueError("semiaxes must be positive")


CurveFamily = Union[Bump, Ellipse]


@dataclass(frozen=True)
class AxisRatio:
    """R = (R1^2 - R2^2)/(R1^2 + R2^2) for R1 > R2, constrained to (0, 1)."""

    value: float

    def __post_init__(self):
        if not (0.0 < self.value < 1.0):
            raise ValueError("axis ratio must lie in (0, 1)")

    @classmethod
    def from_semiaxes(cls, r1, r2):
        num = r1 * r1 - r2 * r2
        den = r1 * r1 + r2 * r2
        return cls(abs(num) / den)


# --------------------------------------------------------------------------
# d_k monomial tables: (integer coefficient, power of pi, power of x)
# --------------------------------------------------------------------------

_D_MONOMIALS = {
    1: [(-4, 2, 1)],
    2: [(-4, 6, 0), (12, 2, 4)],
    3: [(-24, 8, 1), (80, 6, 3), (-24, 4, 5), (-48, 2, 7)],
    4: [(-24, 12, 0), (48, 10, 2), (464, 8, 4), (-1056, 6, 6), (360, 4, 8), (240, 2, 10)],
    5: [
        (-240, 14, 1),
        (2720, 12, 3),
        (-4224, 10, 5),
        (-4800, 8, 7),
        (12240, 6, 9),
        (-4320, 4, 11),
        (-1440, 2, 13),
    ],
    6: [
        (-240, 18, 0),
        (4320, 16, 2),
        (16080, 14, 4),
        (-113632, 12, 6),
        (154320, 10, 8),
        (14880, 8, 10),
        (-136080, 6, 12),
        (50400, 4, 14),
        (10080, 2, 16),
    ],
}


def _horner_coeffs(monomials):
    """Interval coefficients of the polynomial in u^2, descending, plus a
    flag for an overall factor u (the d_k are purely even or purely odd)."""
    odd = monomials[0][2] % 2
    assert all(q % 2 == odd for _, _, q in monomials)
    deg = max((q - odd) // 2 for _, _, q in monomials)
    coeffs = [ZERO] * (deg + 1)
    for coef, p, q in monomials:
        coeffs[(q - odd) // 2] = PI.powi(p) * coef
    coeffs.reverse()
    return tuple(coeffs), bool(odd)


_D_HORNER = {k: _horner_coeffs(m) for k, m in _D_MONOMIALS.items()}


def _eval_poly_u2(coeffs_desc, u, u2, odd):
    acc = coeffs_desc[0]
    for c in coeffs_desc[1:]:
        acc = acc * u2 + c
    if odd:
        acc = acc * u
    return acc


def d_poly(k, u, u2=None):
    """d_k evaluated at u (Interval or Jet4)."""
    coeffs, odd = _D_HORNER[k]
    if u2 is None:
        u2 = u.sqr()
    return _eval_poly_u2(coeffs, u, u2, odd)


# --------------------------------------------------------------------------
# generic bump evaluation
# --------------------------------------------------------------------------


def _check_inside(u):
    """Bump closed form needs the value enclosure strictly inside (-pi, pi)."""
    d0 = u.d0 if isinstance(u, Jet4) else u
    if not (-math.pi < d0.lo and d0.hi < math.pi):
        raise DomainViolation(
            f"bump closed form evaluated at {d0!r} touching +-pi; use hull_enclosure"
        )


def bump_envelope(u):
    """E(u) = exp(1 - 1/(1 - (u/pi)^2)), the smooth bump factor."""
    _check_inside(u)
    t2 = (u / PI).sqr()
    return (1.0 - 1.0 / (1.0 - t2)).exp()


def z1_derivs(u, kmax, u2=None, envelope=None):
    """[z1(u), z1'(u), ..., z1^(kmax)(u)] sharing subexpressions.

    Works for Interval and Jet4 arguments alike; the argument must be
    strictly inside (-pi, pi).
    """
    _check_inside(u)
    if u2 is None:
        u2 = u.sqr()
    e = bump_envelope(u) if envelope is None else envelope
    out = [2.0 * e - 1.0]
    if kmax == 0:
        return out
    den = u2 - _PI2  # negative inside the domain
    powers = {1: den.sqr()}
    if kmax >= 2:
        powers[2] = powers[1].sqr()
    if kmax >= 3:
        powers[3] = powers[2] * powers[1]
    if kmax >= 4:
        powers[4] = powers[2].sqr()
    if kmax >= 5:
        powers[5] = powers[4] * powers[1]
    if kmax >= 6:
        powers[6] = powers[3].sqr()
    for k in range(1, kmax + 1):
        out.append(d_poly(k, u, u2) * e / powers[k])
    return out


def z2_derivs(u, kmax, c_phase):
    """[z2(u), ..., z2^(kmax)(u)] for z2 = sin(. - C); cycles sin/cos."""
    w = u - c_phase
    if isinstance(w, Jet4):
        s, c = w.sin_cos()
    else:
        s, c = w.sin(), w.cos()
    cycle = (s, c, -s, -c)
    return [cycle[k % 4] for k in range(kmax + 1)]


def periodic_reduce(x):
    """Shift an interval by a multiple of 2*pi towards [-pi, pi]."""
    k = round(x.mid() / math.tau)
    if k == 0:
        return x
    return x - TWO_PI * float(k)


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------


def curve_deriv(curve, k, x, periodic=False):
    """Enclosure of both components of the k-th parameter derivative.

    Returns a pair of intervals.  For the bump curve the closed form is used
    and the argument must stay strictly inside (-pi, pi) after optional
    periodic reduction; arguments touching +-pi must go through
    :func:`hull_enclosure` instead.
    """
    if not 0 <= k <= 6:
        raise ValueError("derivative order must be 0..6")
    if periodic:
        x = periodic_reduce(x)
    if isinstance(curve, Bump):
        c1 = z1_derivs(x, k)[k]
        c2 = z2_derivs(x, k, curve.c_phase)[k]
        return c1, c2
    s, c = x.sin(), x.cos()
    first = (c, -s, -c, s)[k % 4] * curve.r1
    second = (s, c, -s, -c)[k % 4] * curve.r2
    return first, second


def lemma_poly(name, x, c_phase=None):
    """Interval evaluation of k_C or one of d_1..d_6.

    ``name`` is "kc" (requires ``c_phase``) or "d1".."d6".
    """
    if name == "kc":
        if c_phase is None:
            raise ValueError("kc requires the phase constant")
        x2 = x.sqr()
        w = c_phase - x
        term1 = (PI.powi(4) - 3.0 * x2.sqr()) * w.cos()
        term2 = x * (_PI2 - x2).sqr() * w.sin()
        return 4.0 * _PI2 * (term1 - term2)
    if name.startswith("d") and name[1:].isdigit():
        k = int(name[1:])
        if 1 <= k <= 6:
            return d_poly(k, x)
    raise ValueError(f"unknown lemma polynomial {name!r}")


def _limit_value(k):
    """z1^(k) at exactly +-pi (the smooth periodic extension's limit)."""
    return Interval(-1.0) if k == 0 else ZERO


def hull_enclosure(curve, k, x):
    """Enclosure of z1^(k) over an interval inside an endpoint zone.

    Valid once the matching d_{k+1} sign fact holds on the zone: then
    z1^(k) is monotone there and its range is the hull of the endpoint
    values.  Endpoints within one ulp of +-pi take the limit values (-1 for
    k = 0, else 0); the interval is read as representing its intersection
    with [-pi, pi].
    """
    if not isinstance(curve, Bump):
        raise ZoneViolation("hull enclosures apply to the bump curve only")
    if not 0 <= k <= 5:
        raise ZoneViolation("hull enclosures cover orders 0..5")
    if x.is_subset(ZONE_LEFT):
        side = -1
    elif x.is_subset(ZONE_RIGHT):
        side = 1
    else:
        raise ZoneViolation(f"{x!r} not inside an endpoint zone")
    vals = []
    for endpoint in (x.lo, x.hi):
        if (side < 0 and endpoint <= -math.pi) or (side > 0 and endpoint >= math.pi):
            vals.append(_limit_value(k))
        else:
            vals.append(z1_derivs(Interval(endpoint), k)[k])
    return vals[0].hull(vals[1])


def _bump_z1_parts_for_curvature(curve, x):
    if -math.pi < x.lo and x.hi < math.pi:
        ds = z1_derivs(x, 2)
        return ds[1], ds[2]
    return hull_enclosure(curve, 1, x), hull_enclosure(curve, 2, x)


def curvature(curve, x):
    """Enclosure of the signed curvature over ``x``."""
    if isinstance(curve, Bump):
        z1x, z1xx = _bump_z1_parts_for_curvature(curve, x)
        z2 = z2_derivs(x, 2, curve.c_phase)
        z2x, z2xx = z2[1], z2[2]
        speed2 = z1x.sqr() + z2x.sqr()
    else:
        s, c = x.sin(), x.cos()
        r1, r2 = curve.r1, curve.r2
        z1x, z1xx = -r1 * s, -r1 * c
        z2x, z2xx = r2 * c, -r2 * s
        # rewrite avoids the sin/cos dependency so the speed stays positive
        if r1 >= r2:
            speed2 = r2 * r2 + (r1 * r1 - r2 * r2) * s.sqr()
        else:
            speed2 = r1 * r1 + (r2 * r2 - r1 * r1) * c.sqr()
    if speed2.lo <= 0.0:
        raise DegenerateTangent(f"speed enclosure {speed2!r} touches zero")
    numerator = -z1xx * z2x + z2xx * z1x
    return numerator / speed2.pow(1.5)
