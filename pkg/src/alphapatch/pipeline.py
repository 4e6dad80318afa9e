"""Work-queue driver for the convexity sign certificates.

Each :class:`ParameterSet` is one unit of proof: an alpha interval, a phase
constant, the singularity window, and quadrature tolerances.  Processing one
set selects the validation regime, certifies the zone-monotonicity facts the
window bounds rely on, integrates the regime's target over the bounded
region with validated quadrature, adds the window residual, and turns the
total enclosure into a verdict.  Indeterminate verdicts are split in alpha
and re-queued until the split threshold is reached; every verdict lands in
one of three region files, so the output tiles the requested alpha range.

Verdicts depend only on their ParameterSet, so sharding the initial sets
across worker processes changes nothing but wall-clock time; the merge step
sorts rows deterministically.
"""

from __future__ import annotations

import csv
import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .interval import Interval, SignOutcome, PI
from .jets import Jet4
from .curves import Bump
from .quadrature import Tolerance, adaptive_integrate
from .signcheck import SignTask, validate_sign
from .integrands import (
    ALPHA_CR,
    ALPHA_BR,
    WINDOW_HALF,
    IntegrandSpec,
    Regime,
    Target,
    make_kt_integrand,
    singular_residual,
)
from .curves import ZONE_LEFT, ZONE_RIGHT, lemma_poly

__all__ = [
    "ParameterSet",
    "RegionVerdict",
    "StraddlesBoundary",
    "ZoneFactsFailed",
    "regime_select",
    "process",
    "run_queue",
    "write_region_files",
    "REGION_HEADER",
]

REGION_HEADER = ["C", "alpha_lo", "alpha_hi", "regime", "enc_lo", "enc_hi", "verdict"]


class StraddlesBoundary(ValueError):
    """Alpha interval crosses a regime boundary; the caller must split."""


class ZoneFactsFailed(RuntimeError):
    """A zone-monotonicity sign task failed; hull enclosures would be unsound."""


@dataclass(frozen=True)
class ParameterSet:
    alpha: Interval
    c_phase: Interval
    left: Interval = field(default_factory=lambda: Interval(-WINDOW_HALF))
    right: Interval = field(default_factory=lambda: Interval(WINDOW_HALF))
    abs_tol: float = 1e-6
    rel_tol: float = 1e-6
    max_depth: int = 13

    @classmethod
    def for_phase(cls, alpha_lo, alpha_hi, c_phase, **kw):
        return cls(Interval(alpha_lo, alpha_hi), Interval.around(c_phase), **kw)


@dataclass
class RegionVerdict:
    ps: ParameterSet
    outcome: SignOutcome
    enclosure: Interval | None
    regime: Regime | None

    def row(self):
        enc_lo = "" if self.enclosure is None else _g17(self.enclosure.lo)
        enc_hi = "" if self.enclosure is None else _g17(self.enclosure.hi)
        return [
            _g17(self.ps.c_phase.mid()),
            _g17(self.ps.alpha.lo),
            _g17(self.ps.alpha.hi),
            self.regime.value if self.regime else "unresolved",
            enc_lo,
            enc_hi,
            self.outcome.value,
        ]


def _g17(x):
    return format(x, ".17g")


def regime_select(alpha):
    """Map an alpha interval to its validation regime.

    Raises :class:`StraddlesBoundary` when the interval crosses 0, the
    small/big split, the big/very-big split, or reaches 2.
    """
    if alpha.lo < 0.0 or alpha.hi >= 2.0:
        raise StraddlesBoundary(f"alpha {alpha!r} outside [0, 2)")
    if alpha.lo == 0.0 == alpha.hi:
        return Regime.VORTEX
    if alpha.lo > 0.0 and alpha.hi <= ALPHA_CR:
        return Regime.SMALL_ALPHA
    if alpha.lo >= ALPHA_CR and alpha.hi <= ALPHA_BR:
        return Regime.BIG_ALPHA
    if alpha.lo >= ALPHA_BR:
        return Regime.VERY_BIG_ALPHA
    raise StraddlesBoundary(f"alpha {alpha!r} crosses a regime boundary")


_ZONE_FACT_SIGNS = {
    1: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_NEGATIVE),
    2: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_POSITIVE),
    3: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_NEGATIVE),
    4: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_POSITIVE),
    5: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_NEGATIVE),
    6: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_POSITIVE),
}

_zone_facts_ok = False


def ensure_zone_facts(min_width=2e-10):
    """Certify the d_1..d_6 zone signs that legitimize hull enclosures.

    The polynomials do not involve the phase constant, so one certification
    per process covers every ParameterSet.  Results are cached.
    """
    global _zone_facts_ok
    if _zone_facts_ok:
        return
    for k, (left_expected, right_expected) in _ZONE_FACT_SIGNS.items():
        f = lambda x, k=k: lemma_poly(f"d{k}", x)
        for zone, expected in ((ZONE_LEFT, left_expected), (ZONE_RIGHT, right_expected)):
            res = validate_sign(SignTask(f, zone, min_width, expected))
            if res.outcome != expected:
                raise ZoneFactsFailed(f"d{k} on {zone!r}: got {res.outcome}")
    _zone_facts_ok = True


def _sliver_bound(f, lo, hi, width):
    """Enclosure of the integral over a sliver of at most one-ulp width."""
    value = f(Interval(lo, hi))
    if isinstance(value, Jet4):
        value = value.d0
    return width * value.hull(Interval(0.0))


def process(ps):
    """Certify the sign of the regime target for one ParameterSet."""
    regime = regime_select(ps.alpha)
    ensure_zone_facts()
    curve = Bump(ps.c_phase)
    spec = IntegrandSpec.for_regime(regime, ps.alpha, curve)
    f = make_kt_integrand(spec)
    tol = Tolerance(ps.abs_tol, ps.rel_tol, ps.max_depth)
    left_f = ps.left.lo
    right_f = ps.right.hi
    p = math.pi
    total = adaptive_integrate(f, right_f, p, tol).enclosure
    total = total + adaptive_integrate(f, -p, left_f, tol).enclosure
    # the one-ulp slivers [math.pi, pi] and [-pi, -math.pi]: the integrand is
    # regular there (x - y is near 0).  The tilde counter-kernel alone is
    # singular at y = pi, but its projection is exactly zero (tested
    # invariant), so the sliver bound may use the plain target
    if regime == Regime.VERY_BIG_ALPHA:
        sliver_spec = IntegrandSpec(Regime.BIG_ALPHA, ps.alpha, curve, Target.I_SCALED)
        sliver_f = make_kt_integrand(sliver_spec)
    else:
        sliver_f = f
    sliver_width = Interval(0.0, PI.hi - p)
    total = total + _sliver_bound(sliver_f, p, PI.hi, sliver_width)
    total = total + _sliver_bound(sliver_f, -PI.hi, -p, sliver_width)
    total = total + singular_residual(spec, left_f, right_f)
    if total.lo > 0.0:
        outcome = SignOutcome.ALL_POSITIVE
    elif total.hi < 0.0:
        outcome = SignOutcome.ALL_NEGATIVE
    else:
        outcome = SignOutcome.INDETERMINATE
    return RegionVerdict(ps, outcome, total, regime)


def _split_alpha(ps, at=None):
    cut = ps.alpha.mid() if at is None else at
    if not ps.alpha.lo < cut < ps.alpha.hi:
        return None
    return (
        replace(ps, alpha=Interval(ps.alpha.lo, cut)),
        replace(ps, alpha=Interval(cut, ps.alpha.hi)),
    )


def _boundary_split(ps):
    """Split a regime-straddling interval exactly at the crossed boundary."""
    for b in (ALPHA_CR, ALPHA_BR):
        if ps.alpha.lo < b < ps.alpha.hi:
            return _split_alpha(ps, at=b)
    return _split_alpha(ps)


def _drain_queue(initial, split_threshold):
    queue = deque(initial)
    rows = []
    while queue:
        ps = queue.popleft()
        try:
            verdict = process(ps)
        except StraddlesBoundary:
            halves = _boundary_split(ps)
            if halves is not None:
                queue.extend(halves)
            else:
                rows.append(RegionVerdict(ps, SignOutcome.INDETERMINATE, None, None))
            continue
        if (
            verdict.outcome == SignOutcome.INDETERMINATE
            and ps.alpha.width() > split_threshold
        ):
            halves = _split_alpha(ps)
            if halves is not None:
                queue.extend(halves)
                continue
        rows.append(verdict)
    return rows


def run_queue(initial, split_threshold=5e-6, workers=1, out_dir=None):
    """Process ParameterSets until classified; optionally write region files.

    Returns the verdict rows sorted by (phase, alpha.lo).  With several
    workers the initial sets are sharded across processes; each worker owns
    a private queue, and the merged rows are identical to a sequential run
    because verdicts depend only on their ParameterSet.
    """
    initial = list(initial)
    if workers <= 1 or len(initial) <= 1:
        rows = _drain_queue(initial, split_threshold)
    else:
        shards = [initial[i::workers] for i in range(workers)]
        shards = [s for s in shards if s]
        rows = []
        with ProcessPoolExecutor(max_workers=len(shards)) as pool:
            futures = [pool.submit(_drain_queue, shard, split_threshold) for shard in shards]
            for fut in futures:
                rows.extend(fut.result())
    rows.sort(key=lambda v: (v.ps.c_phase.mid(), v.ps.alpha.lo, v.ps.alpha.hi))
    if out_dir is not None:
        write_region_files(rows, out_dir)
    return rows


def write_region_files(rows, out_dir):
    """Write positive/negative/indeterminate CSVs; returns the three paths."""
    os.makedirs(out_dir, exist_ok=True)
    buckets = {
        SignOutcome.ALL_POSITIVE: [],
        SignOutcome.ALL_NEGATIVE: [],
        SignOutcome.INDETERMINATE: [],
    }
    for v in rows:
        buckets[v.outcome].append(v.row())
    paths = {}
    names = {
        SignOutcome.ALL_POSITIVE: "positive.csv",
        SignOutcome.ALL_NEGATIVE: "negative.csv",
        SignOutcome.INDETERMINATE: "indeterminate.csv",
    }
    for outcome, name in names.items():
        path = os.path.join(out_dir, name)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(REGION_HEADER)
            writer.writerows(buckets[outcome])
        paths[outcome] = path
    return paths
