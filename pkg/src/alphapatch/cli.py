"""Command-line front end.

Four subcommands tie the certificates and the simulator together:

* ``prove-lemma``      -- the 14 polynomial sign tasks behind the hull bounds
* ``prove-rotation``   -- ellipse non-rotation positivity certificates
* ``prove-convexity``  -- the work-queue sign certification of the curvature
                          derivative over alpha ranges
* ``simulate``         -- the floating-point contour-dynamics runs

Every run writes a manifest (command, config hash, timestamps, outputs) so
results are reproducible and attributable; configs are flat ``key=value``
text both in files and on the command line, hashed canonically.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from datetime import datetime, timezone

from .interval import Interval, SignOutcome, PI
from .curves import ZONE_LEFT, ZONE_RIGHT, lemma_poly
from .signcheck import SignTask, validate_sign, write_certificate_csv
from .integrands import ellipse_rotation_check
from .pipeline import ParameterSet, run_queue, write_region_files
from . import simulator as sim

LEMMA_MIN_WIDTH = 2e-10


def _utc_now():
    return datetime.now(timezone.utc).isoformat()


def config_hash(pairs):
    text = "\n".join(f"{k}={v}" for k, v in sorted(pairs.items()))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def write_manifest(out_dir, command, pairs, outputs, started):
    manifest = {
        "command": command,
        "config_hash": config_hash(pairs),
        "config": dict(sorted(pairs.items())),
        "started": started,
        "finished": _utc_now(),
        "outputs": sorted(outputs),
    }
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
    return path


# ---------------------------------------------------------------------------
# prove-lemma
# ---------------------------------------------------------------------------


def lemma_tasks(min_width=LEMMA_MIN_WIDTH):
    """The fourteen sign tasks: k_C > 0 on [-pi, pi] for both phases, and
    the alternating d_1..d_6 signs on the two endpoint zones."""
    full = Interval(-PI.hi, PI.hi)
    tasks = []
    for c in (0.15, 0.45):
        phase = Interval.around(c)
        tasks.append(
            (
                f"kC:{c}",
                SignTask(
                    lambda x, p=phase: lemma_poly("kc", x, p),
                    full,
                    min_width,
                    SignOutcome.ALL_POSITIVE,
                ),
            )
        )
    zone_signs = {
        1: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_NEGATIVE),
        2: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_POSITIVE),
        3: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_NEGATIVE),
        4: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_POSITIVE),
        5: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_NEGATIVE),
        6: (SignOutcome.ALL_POSITIVE, SignOutcome.ALL_POSITIVE),
    }
    for k, (left_sign, right_sign) in zone_signs.items():
        f = lambda x, k=k: lemma_poly(f"d{k}", x)
        tasks.append((f"d{k}:left", SignTask(f, ZONE_LEFT, min_width, left_sign)))
        tasks.append((f"d{k}:right", SignTask(f, ZONE_RIGHT, min_width, right_sign)))
    return tasks


def cmd_prove_lemma(args):
    started = _utc_now()
    tasks = lemma_tasks(args.min_width)
    if args.only:
        tasks = [(name, t) for name, t in tasks if name == args.only]
        if not tasks:
            print(f"no task named {args.only!r}", file=sys.stderr)
            return 2
    results = []
    failures = 0
    for name, task in tasks:
        res = validate_sign(task)
        ok = res.outcome == task.expected
        failures += not ok
        results.append((name, res))
        print(
            f"[{'PASS' if ok else 'FAIL'}] {name}: {res.outcome.value}"
            f" ({len(res.certificate)} subintervals)"
        )
    os.makedirs(args.out_dir, exist_ok=True)
    cert_path = os.path.join(args.out_dir, "lemma_certificates.csv")
    write_certificate_csv(cert_path, results)
    pairs = {"min_width": args.min_width, "only": args.only or ""}
    manifest = write_manifest(args.out_dir, "prove-lemma", pairs, [cert_path], started)
    print(f"certificates: {cert_path}\nmanifest: {manifest}")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# prove-rotation
# ---------------------------------------------------------------------------


def cmd_prove_rotation(args):
    started = _utc_now()
    alphas = args.alpha or [0.5, 1.0, 1.5]
    ratios = args.axis_ratio or [0.1, 0.5, 0.9]
    failures = 0
    rows = []
    for a in alphas:
        if not 0.0 < a < 2.0:
            print(f"alpha {a} outside (0, 2)", file=sys.stderr)
            return 2
        for r in ratios:
            cert = ellipse_rotation_check(
                Interval.around(a), r, delta=args.delta, min_width=args.min_width
            )
            ok = cert.outcome == SignOutcome.ALL_POSITIVE
            failures += not ok
            n_sub = len(cert.interior.certificate) if cert.interior else 0
            rows.append([a, r, cert.outcome.value, n_sub])
            print(f"[{'PASS' if ok else 'FAIL'}] alpha={a} R={r}: {cert.outcome.value} ({n_sub} subintervals)")
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, "rotation_certificates.csv")
    with open(path, "w") as fh:
        fh.write("alpha,axis_ratio,outcome,interior_subintervals\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")
    pairs = {
        "alphas": ",".join(map(str, alphas)),
        "ratios": ",".join(map(str, ratios)),
        "delta": args.delta,
        "min_width": args.min_width,
    }
    manifest = write_manifest(args.out_dir, "prove-rotation", pairs, [path], started)
    print(f"certificates: {path}\nmanifest: {manifest}")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# prove-convexity
# ---------------------------------------------------------------------------


def _parse_alpha_interval(text):
    sep = ":" if ":" in text else ","
    parts = text.split(sep)
    if len(parts) == 1:
        lo = hi = float(parts[0])
    elif len(parts) == 2:
        lo, hi = float(parts[0]), float(parts[1])
    else:
        raise ValueError(f"bad alpha interval {text!r}")
    if lo > hi:
        raise ValueError(f"bad alpha interval {text!r}")
    return lo, hi


def full_sweep_intervals(step=0.01):
    """Tile [0, 2) into initial alpha intervals: the vortex point plus
    contiguous slices of (0, 2)."""
    intervals = [(0.0, 0.0)]
    lo = 1e-9
    while lo < 2.0 - 1e-9:
        hi = min(lo + step, 2.0 - 1e-9)
        intervals.append((lo, hi))
        lo = hi
    return intervals


def cmd_prove_convexity(args):
    started = _utc_now()
    if args.full_sweep:
        intervals = full_sweep_intervals(args.sweep_step)
    else:
        intervals = [_parse_alpha_interval(t) for t in (args.alpha or [])]
    if not intervals:
        print("no alpha intervals requested", file=sys.stderr)
        return 2
    initial = [
        ParameterSet.for_phase(
            lo,
            hi,
            args.c_phase,
            abs_tol=args.abs_tol,
            rel_tol=args.rel_tol,
            max_depth=args.max_depth,
        )
        for lo, hi in intervals
    ]
    rows = run_queue(
        initial,
        split_threshold=args.split_threshold,
        workers=args.workers,
        out_dir=args.out_dir,
    )
    paths = write_region_files(rows, args.out_dir)
    unresolved = [
        v
        for v in rows
        if v.outcome == SignOutcome.INDETERMINATE
        and v.ps.alpha.width() > args.split_threshold
    ]
    for v in rows:
        a = v.ps.alpha
        if v.outcome == SignOutcome.ALL_POSITIVE:
            note = "curvature minimum rises: jump +2pi loses convexity backward, -2pi forward"
        elif v.outcome == SignOutcome.ALL_NEGATIVE:
            note = "curvature minimum falls: jump +2pi loses convexity forward, -2pi backward"
        else:
            note = "unclassified"
        print(f"C={args.c_phase} alpha=[{a.lo:.9g},{a.hi:.9g}]: {v.outcome.value} ({note})")
    pairs = {
        "c_phase": args.c_phase,
        "alphas": ";".join(f"{lo}:{hi}" for lo, hi in intervals),
        "abs_tol": args.abs_tol,
        "rel_tol": args.rel_tol,
        "max_depth": args.max_depth,
        "split_threshold": args.split_threshold,
        "workers": args.workers,
        "full_sweep": args.full_sweep,
    }
    manifest = write_manifest(
        args.out_dir, "prove-convexity", pairs, list(p for p in paths.values()), started
    )
    print(f"manifest: {manifest}")
    return 1 if unresolved else 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

_SIM_DEFAULTS = {
    "shape": "ellipse",
    "r1": 1.0,
    "r2": 3.0,
    "radius": 1.0,
    "c_phase": 0.15,
    "n": 512,
    "alpha": 1.0,
    "jump": -2.0 * math.pi,
    "filter_strength": 36.0,
    "filter_order": 36,
    "rk_abs_tol": 1e-8,
    "rk_rel_tol": 1e-8,
    "t_final": 10.0,
    "snapshot_interval": 1.0,
    "arc_chord_factor": 1e-3,
}


def load_sim_config(path=None, overrides=()):
    pairs = dict(_SIM_DEFAULTS)
    if path:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, value = line.partition("=")
                pairs[key.strip()] = value.strip()
    for text in overrides:
        key, _, value = text.partition("=")
        pairs[key.strip()] = value.strip()
    typed = {}
    for key, default in _SIM_DEFAULTS.items():
        raw = pairs[key]
        if isinstance(default, str):
            typed[key] = str(raw)
        elif isinstance(default, int) and not isinstance(default, bool):
            typed[key] = int(float(raw))
        else:
            typed[key] = float(raw)
    unknown = set(pairs) - set(_SIM_DEFAULTS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return typed


def _initial_state(cfgmap):
    shape = cfgmap["shape"]
    if shape == "ellipse":
        return sim.ellipse_state(cfgmap["r1"], cfgmap["r2"], cfgmap["n"])
    if shape == "circle":
        return sim.circle_state(cfgmap["radius"], cfgmap["n"])
    if shape == "bump":
        return sim.bump_state(cfgmap["c_phase"], cfgmap["n"])
    raise ValueError(f"unknown shape {shape!r}")


def write_snapshots_csv(path, snapshots):
    with open(path, "w") as fh:
        fh.write("t,x_index,z1,z2\n")
        for snap in snapshots:
            for i, (z1, z2) in enumerate(snap.points):
                fh.write(f"{snap.time:.10g},{i},{z1!r},{z2!r}\n")


def write_diagnostics_csv(path, diags):
    with open(path, "w") as fh:
        fh.write("t,min_curvature,area,arc_chord_min,speed_variation\n")
        for d in diags:
            fh.write(
                f"{d.time:.10g},{d.min_curvature!r},{d.area!r},"
                f"{d.arc_chord_min!r},{d.speed_variation!r}\n"
            )
    return path


def cmd_simulate(args):
    started = _utc_now()
    cfgmap = load_sim_config(args.config, args.set or [])
    state = _initial_state(cfgmap)
    cfg = sim.SimConfig(
        alpha=cfgmap["alpha"],
        jump=cfgmap["jump"],
        filter_strength=cfgmap["filter_strength"],
        filter_order=cfgmap["filter_order"],
        rk_abs_tol=cfgmap["rk_abs_tol"],
        rk_rel_tol=cfgmap["rk_rel_tol"],
        t_final=cfgmap["t_final"],
        snapshot_interval=cfgmap["snapshot_interval"],
        arc_chord_factor=cfgmap["arc_chord_factor"],
    )
    os.makedirs(args.out_dir, exist_ok=True)
    halted = None
    try:
        snapshots = sim.evolve(state, cfg)
    except (sim.ArcChordCollapse, sim.StepSizeUnderflow) as exc:
        halted = exc
        snapshots = [state]
    diags = [sim.diagnostics(s) for s in snapshots]
    snap_path = os.path.join(args.out_dir, "snapshots.csv")
    diag_path = os.path.join(args.out_dir, "diagnostics.csv")
    write_snapshots_csv(snap_path, snapshots)
    write_diagnostics_csv(diag_path, diags)
    loss = next((d.time for d in diags if d.min_curvature < 0.0), None)
    if loss is not None:
        print(f"convexity lost by t = {loss:.6g}")
    else:
        print("no convexity loss observed")
    manifest = write_manifest(
        args.out_dir, "simulate", cfgmap, [snap_path, diag_path], started
    )
    print(f"snapshots: {snap_path}\ndiagnostics: {diag_path}\nmanifest: {manifest}")
    if halted is not None:
        print(f"halted early: {halted}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="alphapatch",
        description="Validated certificates and simulations for alpha-patch contours",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove-lemma", help="certify the 14 polynomial sign claims")
    p.add_argument("--min-width", type=float, default=LEMMA_MIN_WIDTH)
    p.add_argument("--only", help="run a single task, e.g. kC:0.45")
    p.add_argument("--out-dir", default="out/lemma")
    p.set_defaults(fn=cmd_prove_lemma)

    p = sub.add_parser("prove-rotation", help="certify ellipse non-rotation positivity")
    p.add_argument("--alpha", type=float, action="append")
    p.add_argument("--axis-ratio", type=float, action="append")
    p.add_argument("--delta", type=float, default=1.0 / 128.0)
    p.add_argument("--min-width", type=float, default=LEMMA_MIN_WIDTH)
    p.add_argument("--out-dir", default="out/rotation")
    p.set_defaults(fn=cmd_prove_rotation)

    p = sub.add_parser("prove-convexity", help="certify curvature-derivative signs")
    p.add_argument("--c-phase", type=float, default=0.15, choices=[0.15, 0.45])
    p.add_argument("--alpha", action="append", help="alpha interval lo:hi (repeatable)")
    p.add_argument("--abs-tol", type=float, default=1e-6)
    p.add_argument("--rel-tol", type=float, default=1e-6)
    p.add_argument("--max-depth", type=int, default=13)
    p.add_argument("--split-threshold", type=float, default=5e-6)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--full-sweep", action="store_true", help="tile all of [0,2) (long)")
    p.add_argument("--sweep-step", type=float, default=0.01)
    p.add_argument("--out-dir", default="out/convexity")
    p.set_defaults(fn=cmd_prove_convexity)

    p = sub.add_parser("simulate", help="run the contour-dynamics simulator")
    p.add_argument("config", nargs="?", help="flat key=value config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--out-dir", default="out/simulate")
    p.set_defaults(fn=cmd_simulate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    t0 = time.time()
    code = args.fn(args)
    print(f"done in {time.time() - t0:.1f}s (exit {code})")
    return code


if __name__ == "__main__":
    sys.exit(main())
