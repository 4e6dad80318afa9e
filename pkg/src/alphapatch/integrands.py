"""Integrand families for the convexity and non-rotation certificates.

Everything here is built at the evaluation point x = pi, the unique zero of
the proof curve's curvature.  The time derivative of the curvature numerator
is  -<z_xt, z_xx^perp(pi)> + <z_xxt, z_x^perp(pi)>  (the |z_x|^3 scaling is
kept multiplied through, never divided out).  At x = pi the first bump
component has vanishing derivatives, so z_x^perp(pi) and z_xx^perp(pi) have
exactly zero second components and the projection extracts the first
components of the displayed integrand vectors; the second components still
enter through |z(x)-z(x-y)|^2 and the inner products.

Four targets cover the four validation regimes:

* vortex (alpha = 0): the log-free, integrated-by-parts kernel,
* small alpha: the alpha-derivative of the scaled integrand (DI),
* big alpha: the scaled integrand itself,
* very big alpha: the tilde-regularized integrand whose tangent-kernel
  counter-terms make it well defined up to alpha = 2.  Their coefficient
  vectors at x = pi have zero first components, so they contribute exactly
  zero to the projection; they are still assembled as displayed and the
  cancellation is asserted in tests rather than exploited silently.

The singularity window [-1/128, 1/128] is never evaluated pointwise: its
contribution is bounded through mean-value substitutions
|d^k z(a) - d^k z(b)| <= |a-b| |d^{k+1} z([a,b])| (second-order Taylor with
the vanishing limit derivatives in the tilde regime), with the bump-side
derivative enclosures coming from the monotone hulls, and the resulting
|y|-power and log-weighted integrals evaluated in closed form per regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .interval import Interval, DomainViolation, SignOutcome, PI, TWO_PI, ZERO
from .jets import Jet4
from .curves import (
    AxisRatio,
    Bump,
    ZoneViolation,
    hull_enclosure,
    z2_derivs,
    z1_derivs,
)
from .signcheck import SignTask, SignResult, validate_sign

__all__ = [
    "ALPHA_CR",
    "ALPHA_BR",
    "WINDOW_HALF",
    "Regime",
    "Target",
    "IntegrandSpec",
    "kt_scaled_integrand",
    "make_kt_integrand",
    "singular_residual",
    "ellipse_rotation_integrand",
    "ellipse_rotation_check",
    "RotationCertificate",
]

ALPHA_CR = 0.04
ALPHA_BR = 1.95
WINDOW_HALF = 1.0 / 128.0


class Regime(Enum):
    VORTEX = "vortex"
    SMALL_ALPHA = "small_alpha"
    BIG_ALPHA = "big_alpha"
    VERY_BIG_ALPHA = "very_big_alpha"


class Target(Enum):
    I_SCALED = "I_scaled"
    DI_SCALED = "DI_scaled"
    I_TILDE_SCALED = "I_tilde_scaled"


_REGIME_TARGET = {
    Regime.VORTEX: Target.I_SCALED,
    Regime.SMALL_ALPHA: Target.DI_SCALED,
    Regime.BIG_ALPHA: Target.I_SCALED,
    Regime.VERY_BIG_ALPHA: Target.I_TILDE_SCALED,
}


@dataclass(frozen=True)
class IntegrandSpec:
    regime: Regime
    alpha: Interval
    curve: Bump
    target: Target

    def __post_init__(self):
        if _REGIME_TARGET[self.regime] != self.target:
            raise ValueError(f"target {self.target} does not match regime {self.regime}")
        if self.regime == Regime.VORTEX:
            if not (self.alpha.lo == 0.0 == self.alpha.hi):
                raise ValueError("vortex regime needs alpha = [0, 0]")
        elif self.alpha.lo <= 0.0 or self.alpha.hi >= 2.0:
            raise ValueError("alpha must stay inside (0, 2)")

    @classmethod
    def for_regime(cls, regime, alpha, curve):
        return cls(regime, alpha, curve, _REGIME_TARGET[regime])


class _PointData:
    """Constants of the evaluation point x = pi for one phase interval."""

    def __init__(self, c_phase):
        w = PI - c_phase
        self.s = w.sin()  # z2_x-perp weight; equals sin(C) > 0
        self.c = w.cos()  # equals -cos(C) < 0
        # z-derivatives at pi: bump components are exact limits (0 beyond
        # order zero), the sine components cycle
        self.zx = (ZERO, self.c)
        self.zxx = (ZERO, -self.s)
        self.zxxx = (ZERO, -self.c)
        self.zxxxx = (ZERO, self.s)
        self.speed2 = self.c.sqr()  # |z_x(pi)|^2


def _side_of(value):
    if value.hi < 0.0:
        return -1
    if value.lo > 0.0:
        return 1
    raise DomainViolation(
        f"integrand evaluated across the singularity window: y = {value!r}"
    )


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def _pieces(spec, pt, y):
    """Shared differences and inner products at offset y (jet or interval)."""
    d0 = y.d0 if isinstance(y, Jet4) else y
    side = _side_of(d0)
    u = PI - y
    if side < 0:
        u = u - TWO_PI
    z1 = z1_derivs(u, 3)
    z2 = z2_derivs(u, 3, spec.curve.c_phase)
    dz = (-1.0 - z1[0], pt.s - z2[0])
    dzx = (-z1[1], pt.c - z2[1])
    dzxx = (-z1[2], -pt.s - z2[2])
    dzxxx = (-z1[3], -pt.c - z2[3])
    q = dz[0].sqr() + dz[1].sqr()
    return side, z1, z2, dz, dzx, dzxx, dzxxx, q


def _project(pt, zxt1, zxxt1):
    # <V, z_xx^perp(pi)> = V1 * s ;  <V, z_x^perp(pi)> = V1 * (-c)
    return -(pt.s * zxt1) - pt.c * zxxt1


def _vortex(spec, pt, y):
    side, z1, z2, dz, dzx, dzxx, dzxxx, q = _pieces(spec, pt, y)
    zxu = (z1[1], z2[1])
    dz_zxu = _dot(dz, zxu)
    dz_dzx = _dot(dz, dzx)
    dz_dzxx = _dot(dz, dzxx)
    dzx_sq = dzx[0].sqr() + dzx[1].sqr()
    inv_q = 1.0 / q
    zxt1 = -dz_zxu * inv_q * dzx[0] + dz_dzx * inv_q * z1[1]
    zxxt1 = (
        -dz_zxu * inv_q * dzxx[0]
        + 2.0 * (dz_dzx * inv_q) * z1[2]
        + dzx_sq * inv_q * z1[1]
        + dz_dzxx * inv_q * z1[1]
        - 2.0 * (dz_dzx.sqr() * inv_q * inv_q) * z1[1]
    )
    return _project(pt, zxt1, zxxt1)


def _alpha_kernels(spec, q):
    a = spec.alpha
    p_a = (q.log() * (a * -0.5)).exp()  # |dz|^{-alpha}
    p_2a = p_a / q  # |dz|^{-(2+alpha)}
    p_4a = p_2a / q  # |dz|^{-(4+alpha)}
    return p_a, p_2a, p_4a


def _big_alpha_parts(spec, pt, y):
    side, z1, z2, dz, dzx, dzxx, dzxxx, q = _pieces(spec, pt, y)
    a = spec.alpha
    p_a, p_2a, p_4a = _alpha_kernels(spec, q)
    dz_dzx = _dot(dz, dzx)
    dz_dzxx = _dot(dz, dzxx)
    dzx_sq = dzx[0].sqr() + dzx[1].sqr()
    zxt1 = dzxx[0] * p_a - dzx[0] * dz_dzx * p_2a * a
    zxxt1 = (
        dzxxx[0] * p_a
        - dzxx[0] * dz_dzx * p_2a * (a * 2.0)
        - dzx[0] * dzx_sq * p_2a * a
        + dzx[0] * dz_dzx.sqr() * p_4a * (a * (a + 2.0))
        - dzx[0] * dz_dzxx * p_2a * a
    )
    return side, q, zxt1, zxxt1


def _big_alpha(spec, pt, y):
    _, _, zxt1, zxxt1 = _big_alpha_parts(spec, pt, y)
    return _project(pt, zxt1, zxxt1)


def _small_alpha(spec, pt, y):
    side, z1, z2, dz, dzx, dzxx, dzxxx, q = _pieces(spec, pt, y)
    a = spec.alpha
    p_a, p_2a, p_4a = _alpha_kernels(spec, q)
    ld = q.log() * 0.5  # log |dz|
    dz_dzx = _dot(dz, dzx)
    dz_dzxx = _dot(dz, dzxx)
    dzx_sq = dzx[0].sqr() + dzx[1].sqr()
    zxt1 = (
        -(dzx[0] * dz_dzx * p_2a)
        - dzxx[0] * ld * p_a
        + dzx[0] * dz_dzx * ld * p_2a * a
    )
    zxxt1 = (
        -(dzxx[0] * dz_dzx * p_2a) * 2.0
        - dzx[0] * dzx_sq * p_2a
        + dzx[0] * dz_dzx.sqr() * p_4a * (a * 2.0 + 2.0)
        - dzx[0] * dz_dzxx * p_2a
        - dzxxx[0] * ld * p_a
        + dzxx[0] * dz_dzx * ld * p_2a * (a * 2.0)
        + dzx[0] * dzx_sq * ld * p_2a * a
        - dzx[0] * dz_dzx.sqr() * ld * p_4a * (a * (a + 2.0))
        + dzx[0] * dz_dzxx * ld * p_2a * a
    )
    return _project(pt, zxt1, zxxt1)


def _tilde(spec, pt, y):
    side, q, zxt1, zxxt1 = _big_alpha_parts(spec, pt, y)
    a = spec.alpha
    # tangent-kernel counter-terms: sgn(y) / |2 tan(y/2)|^{alpha-1}
    tan_abs = abs(y.half().tan() * 2.0)
    s_ct = tan_abs.pow(-(a - 1.0)) * float(side)
    nq = pt.speed2
    n_a = nq.pow(a * -0.5)
    n_2a = n_a / nq
    n_4a = n_2a / nq
    xx_x = _dot(pt.zxx, pt.zx)
    xxx_x = _dot(pt.zxxx, pt.zx)
    xx_sq = _dot(pt.zxx, pt.zxx)
    # first components of the x-point vectors are exact zeros, so every
    # counter-term below is an exact zero interval; kept as displayed
    zxt1 = zxt1 - pt.zxxx[0] * n_a * s_ct + pt.zxx[0] * n_2a * xx_x * s_ct * a
    zxxt1 = (
        zxxt1
        - pt.zxxxx[0] * n_a * s_ct
        + pt.zxxx[0] * n_2a * xx_x * s_ct * (a * 2.0)
        + pt.zxx[0] * n_2a * xx_sq * s_ct * a
        - pt.zxx[0] * n_4a * xx_x.sqr() * s_ct * (a * (a + 2.0))
        + pt.zxx[0] * n_2a * xxx_x * s_ct * a
    )
    return _project(pt, zxt1, zxxt1)


def make_kt_integrand(spec):
    """Closure evaluating the requested target; generic over Jet4/Interval."""
    pt = _PointData(spec.curve.c_phase)
    if spec.regime == Regime.VORTEX:
        fn = _vortex
    elif spec.target == Target.DI_SCALED:
        fn = _small_alpha
    elif spec.target == Target.I_TILDE_SCALED:
        fn = _tilde
    else:
        fn = _big_alpha

    def integrand(y):
        return fn(spec, pt, y)

    return integrand


def kt_scaled_integrand(spec, y):
    """One-shot evaluation of the target integrand at ``y``."""
    return make_kt_integrand(spec)(y)


# ---------------------------------------------------------------------------
# singularity-window residual
# ---------------------------------------------------------------------------


def _mag(iv):
    return Interval(iv.mag())


@dataclass
class _ZoneBounds:
    """Hull-based magnitude bounds over one endpoint zone."""

    b: dict  # order -> magnitude bound of the bump component (Interval)
    s: dict  # order -> magnitude bound of the sine component
    den: Interval  # lower-bound interval for |dz|^2 / y^2
    m_hi: Interval  # upper bound for |dz| / |y|

    @classmethod
    def build(cls, curve, side, r, kmax):
        if side > 0:
            zone = Interval(math.nextafter(PI.lo - r, -math.inf), PI.hi)
        else:
            zone = Interval(-PI.hi, math.nextafter(r - PI.lo, math.inf))
        b = {k: _mag(hull_enclosure(curve, k, zone)) for k in range(1, kmax + 1)}
        z2 = z2_derivs(zone, min(kmax, 3), curve.c_phase)
        s = {k: _mag(z2[k]) for k in range(1, min(kmax, 3) + 1)}
        tangent = z2[1]
        mig = tangent.mig()
        if mig <= 0.0:
            raise ZoneViolation("sine-component speed not sign-definite on the zone")
        mroot = Interval(mig)
        den = mroot.sqr()
        den = Interval(den.lo, den.lo)  # sound lower bound for |dz|^2/y^2
        m_hi = (b[1].sqr() + s[1].sqr()).sqrt() if 1 in s else b[1]
        return cls(b, s, den, m_hi)

    def pa(self):
        return self.b[1].sqr() + self.s[1].sqr()

    def pb(self):
        return self.b[2] * self.b[1] + self.s[2] * self.s[1]

    def pc(self):
        return self.b[2].sqr() + self.s[2].sqr()

    def pd(self):
        return self.b[3] * self.b[1] + self.s[3] * self.s[1]


def _symmetric(hi):
    hi = abs(hi)
    return Interval(-hi, hi)


def _residual_half(spec, pt, side, r):
    """Bound for the window-half integral over 0 < |y| <= r on one side."""
    if r <= 0.0:
        return ZERO
    if r > WINDOW_HALF:
        raise ZoneViolation("window may not exceed the 1/128 endpoint zones")
    a = spec.alpha
    s_w = _mag(pt.s)
    c_w = _mag(pt.c)
    if spec.regime == Regime.VORTEX:
        z = _ZoneBounds.build(spec.curve, side, r, 3)
        pa, pb, pc, pd = z.pa(), z.pb(), z.pc(), z.pd()
        den = z.den
        zxt = pa * z.b[2] / den + pb * z.b[1] / den
        zxxt = (
            pa * z.b[3] / den
            + 2.0 * (pb * z.b[2]) / den
            + pc * z.b[1] / den
            + pd * z.b[1] / den
            + 2.0 * (pb.sqr() * z.b[1]) / den.sqr()
        )
        bound = (s_w * zxt + c_w * zxxt) * r
        return _symmetric(bound.hi)
    if spec.regime == Regime.BIG_ALPHA:
        z = _ZoneBounds.build(spec.curve, side, r, 4)
        g_a = z.den.pow(a * -0.5)
        g_2a = g_a / z.den
        g_4a = g_2a / z.den
        pb, pc, pd = z.pb(), z.pc(), z.pd()
        zxt = z.b[3] * g_a + z.b[2] * pb * g_2a * a
        zxxt = (
            z.b[4] * g_a
            + z.b[3] * pb * g_2a * (a * 2.0)
            + z.b[2] * pc * g_2a * a
            + z.b[2] * pb.sqr() * g_4a * (a * (a + 2.0))
            + z.b[2] * pd * g_2a * a
        )
        coeff = s_w * zxt + c_w * zxxt
        two_m_a = 2.0 - a
        power_int = Interval(r).pow(two_m_a) / two_m_a  # int_0^r y^{1-alpha}
        return _symmetric((coeff * power_int).hi)
    if spec.regime == Regime.SMALL_ALPHA:
        z = _ZoneBounds.build(spec.curve, side, r, 4)
        g_a = z.den.pow(a * -0.5)
        g_2a = g_a / z.den
        g_4a = g_2a / z.den
        pb, pc, pd = z.pb(), z.pc(), z.pd()
        mroot = z.den.sqrt()
        if (z.m_hi * r).hi >= 1.0:
            raise ZoneViolation("log bound needs |dz| < 1 on the window")
        # plain terms
        c1 = s_w * (z.b[2] * pb * g_2a) + c_w * (
            2.0 * (z.b[3] * pb) * g_2a
            + z.b[2] * pc * g_2a
            + z.b[2] * pb.sqr() * g_4a * (a * 2.0 + 2.0)
            + z.b[2] * pd * g_2a
        )
        # log-weighted terms: |log |dz|| <= -log(mroot * y) on the window
        c2 = s_w * (z.b[3] * g_a + z.b[2] * pb * g_2a * a) + c_w * (
            z.b[4] * g_a
            + z.b[3] * pb * g_2a * (a * 2.0)
            + z.b[2] * pc * g_2a * a
            + z.b[2] * pb.sqr() * g_4a * (a * (a + 2.0))
            + z.b[2] * pd * g_2a * a
        )
        two_m_a = 2.0 - a
        rp = Interval(r).pow(two_m_a)
        plain_int = rp / two_m_a
        log_at_r = -((mroot * r).log())  # positive
        log_int = rp * (log_at_r / two_m_a + 1.0 / two_m_a.sqr())
        return _symmetric((c1 * plain_int + c2 * log_int).hi)
    # very big alpha: tilde counter-terms project to exactly zero at x = pi;
    # second-order Taylor around pi (limit derivatives vanish) gives the
    # extra power of y
    z = _ZoneBounds.build(spec.curve, side, r, 5)
    g_a = z.den.pow(a * -0.5)
    g_2a = g_a / z.den
    g_4a = g_2a / z.den
    pb, pc, pd = z.pb(), z.pc(), z.pd()
    h2 = z.b[3] * 0.5  # |dzx_1| <= y^2/2 * sup|z1'''|
    h3 = z.b[4] * 0.5
    h4 = z.b[5] * 0.5
    zxt = h3 * g_a + h2 * pb * g_2a * a
    zxxt = (
        h4 * g_a
        + h3 * pb * g_2a * (a * 2.0)
        + h2 * pc * g_2a * a
        + h2 * pb.sqr() * g_4a * (a * (a + 2.0))
        + h2 * pd * g_2a * a
    )
    coeff = s_w * zxt + c_w * zxxt
    three_m_a = 3.0 - a
    power_int = Interval(r).pow(three_m_a) / three_m_a  # int_0^r y^{2-alpha}
    return _symmetric((coeff * power_int).hi)


def singular_residual(spec, left=-WINDOW_HALF, right=WINDOW_HALF):
    """Enclosure of the window contribution [left, right] around y = 0."""
    if not (left <= 0.0 <= right):
        raise ZoneViolation("window must contain 0")
    pt = _PointData(spec.curve.c_phase)
    return _residual_half(spec, pt, 1, right) + _residual_half(spec, pt, -1, -left)


# ---------------------------------------------------------------------------
# ellipse non-rotation
# ---------------------------------------------------------------------------


def ellipse_rotation_integrand(alpha, axis_ratio, y):
    """Final positivity display of the non-rotation argument (generic)."""
    if not isinstance(alpha, Interval):
        alpha = Interval(alpha)
    r = axis_ratio.value if isinstance(axis_ratio, AxisRatio) else float(axis_ratio)
    if not 0.0 < r < 1.0:
        raise ValueError("axis ratio must lie in (0,1)")
    half = y.half()
    if isinstance(half, Jet4):
        s, c = half.sin_cos()
        cy = y.cos()
    else:
        s, c = half.sin(), half.cos()
        cy = y.cos()
    two_m_a = 2.0 - alpha
    p = alpha * 0.5 + 1.0
    d_minus = (1.0 - cy * r).pow(-p)
    d_plus = (1.0 + cy * r).pow(-p)
    return s.pow(two_m_a) * c.pow(two_m_a) * (c.pow(alpha) - s.pow(alpha)) * (d_minus - d_plus)


@dataclass
class RotationCertificate:
    alpha: Interval
    axis_ratio: float
    outcome: SignOutcome
    interior: Optional[SignResult]
    lower_zone_ok: bool
    upper_zone_ok: bool


def _pow_hi(base_hi, alpha):
    """Upper bound of t^alpha over t in [0, base_hi] (monotone in t >= 0)."""
    if base_hi <= 0.0:
        return ZERO
    return Interval(Interval(base_hi).pow(alpha).hi)


def _lower_zone_nonneg(alpha, r, delta):
    """g >= 0 on [0, delta]: every factor is nonnegative there.

    Uses only interval evaluations plus the monotonicity of t -> t^p on
    t >= 0 (the sine factor's power is bounded through its endpoint).
    """
    zone = Interval(0.0, delta)
    half = zone.half()
    s = half.sin()
    c = half.cos()
    if s.lo < 0.0 or c.lo <= 0.0:
        return False
    # c^alpha - s^alpha >= (min c)^alpha - (max s)^alpha > 0
    c_min_pow = Interval(c.lo).pow(alpha)
    s_max_pow = _pow_hi(s.hi, alpha)
    if not (c_min_pow - s_max_pow).lo > 0.0:
        return False
    cy = zone.cos()
    if cy.lo <= 0.0:
        return False
    p = alpha * 0.5 + 1.0
    d_minus = (1.0 - cy * r).pow(-p)
    d_plus = (1.0 + cy * r).pow(-p)
    return (d_minus - d_plus).lo > 0.0


def _upper_zone_nonneg(alpha, r, delta):
    """g >= 0 on [pi/2 - delta, pi/2].

    On this zone y/2 lies in [0, pi/4] and y in [0, pi/2], so
    cos(y/2) >= sin(y/2) >= 0 and cos(y) >= 0 as exact range facts (this is
    the inspection the original positivity argument closes with); together
    with monotonicity of t -> t^p they make every factor nonnegative.  The
    numeric part checks the zone really sits inside [0, pi/2].
    """
    lo = math.pi / 2 - delta
    return 0.0 < lo and lo < math.pi / 2 and delta > 0.0


def ellipse_rotation_check(alpha, axis_ratio, delta=WINDOW_HALF, min_width=2e-10):
    """Certify positivity of the rotation-difference integral.

    The integrand is certified strictly positive on [delta, pi/2 - delta]
    by bisection and nonnegative on the two end zones factor by factor,
    which makes the integral over [0, pi/2] strictly positive.
    """
    if not isinstance(alpha, Interval):
        alpha = Interval(alpha)
    r = axis_ratio.value if isinstance(axis_ratio, AxisRatio) else float(axis_ratio)
    q = math.pi / 2
    interior_domain = Interval(delta, q - delta)
    task = SignTask(
        lambda y: ellipse_rotation_integrand(alpha, r, y),
        interior_domain,
        min_width,
        SignOutcome.ALL_POSITIVE,
    )
    interior = validate_sign(task)
    lower_ok = _lower_zone_nonneg(alpha, r, delta)
    upper_ok = _upper_zone_nonneg(alpha, r, delta)
    if interior.outcome == SignOutcome.ALL_POSITIVE and lower_ok and upper_ok:
        outcome = SignOutcome.ALL_POSITIVE
    else:
        outcome = SignOutcome.INDETERMINATE
    return RotationCertificate(alpha, r, outcome, interior, lower_ok, upper_ok)
