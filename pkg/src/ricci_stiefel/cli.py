"""Command-line interface: ``simulate``, ``analyze``, ``verify`` and ``portrait``.

Exit codes: 0 success, 1 invalid input or a failed verification, 2 a
simulation stopped by the blow-up guard or by step-size underflow. A JSON
document is always written (to ``--out`` or stdout), including on failure.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import platform
import statistics
import sys
import time
from collections import Counter
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from ._core import IMPLEMENTATION
from .exactpoly import Verdict, verify_positivity
from .flow import equilibrium_spectrum, planar_equilibrium_data
from .geometry import DomainError, SpaceParams, einstein_point, volume
from .integrate import (EventKind, IntegratorConfig, StepSizeUnderflowError, integrate,
                        rescale_to_level, run_batch, worker_count)
from .portrait import (PLANAR_COLUMNS, SIGMA_COLUMNS, TRIANGLE_COLUMNS, planar_rows,
                       sigma_rows, triangle_rows)
from .regions import SurfaceId, gamma_curve, gamma_point, inward_flux, structural_constants
from .rng import STREAM_VERSION, SplitMix64

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BLOWUP = 2
PLANE_FLUX_TOL = 1e-12
# starts this close to Vol = c are used verbatim rather than rescaled
LEVEL_TOL = 1e-12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; 2 is reserved for blow-ups here
    def error(self, message):
        raise UsageError(message)


# -- output helpers ------------------------------------------------------------

def _num(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def format_csv(columns: Sequence[str], rows) -> str:
    """Header plus rows, comma separated, LF endings, shortest round-trip floats."""
    lines = [",".join(columns)]
    lines.extend(",".join(_num(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def format_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _write(path: Optional[str], text: str, stream=None) -> None:
    if path is None or path == "-":
        (stream or sys.stdout).write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit_json(args, payload) -> None:
    _write(getattr(args, "out", None), format_json(payload))


# -- parsing helpers -----------------------------------------------------------

def _space(n: int) -> SpaceParams:
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    return SpaceParams(n)


def _positive(name: str, v: float) -> float:
    if not (v > 0 and math.isfinite(v)):
        raise DomainError(f"{name} must be positive and finite, got {v!r}")
    return v


def _triple(text: str) -> tuple:
    try:
        parts = tuple(float(s) for s in text.split(","))
    except ValueError:
        raise DomainError(f"--x0 must be three comma-separated numbers, got {text!r}")
    if len(parts) != 3:
        raise DomainError(f"--x0 must have three components, got {len(parts)}")
    for v in parts:
        _positive("--x0 components", v)
    return parts


def _config(args) -> IntegratorConfig:
    kw = {"t_max": _positive("--t-max", args.t_max)}
    if getattr(args, "rtol", None) is not None:
        kw["rtol"] = _positive("--rtol", args.rtol)
    if getattr(args, "atol", None) is not None:
        kw["atol"] = _positive("--atol", args.atol)
    return IntegratorConfig(**kw)


# -- simulate -----------------------------------------------------------------

TRAJECTORY_COLUMNS = ["t", "x1", "x2", "x3", "r1", "r2", "r3", "S", "vol"]


def cmd_simulate(args) -> int:
    sp = _space(args.n)
    c = _positive("--c", args.c)
    x0 = _triple(args.x0)
    if abs(volume(sp, x0) / c - 1.0) > LEVEL_TOL:
        x0 = rescale_to_level(sp, x0, c)
    cfg = _config(args)
    code = EXIT_OK
    try:
        traj, events = integrate(sp, x0, cfg)
    except StepSizeUnderflowError as exc:
        traj, events = exc.trajectory, exc.events
        code = EXIT_BLOWUP
    if any(e.kind is EventKind.BLOWUP for e in events):
        code = EXIT_BLOWUP
    r1, r2, r3, s, vol = traj.curvature()
    rows = zip(traj.t, traj.x[:, 0], traj.x[:, 1], traj.x[:, 2], r1, r2, r3, s, vol)
    csv_text = format_csv(TRAJECTORY_COLUMNS, rows)
    ev = [e.as_dict() for e in events]
    if args.events_out:
        _write(args.events_out, format_json(ev))
    summary = {
        "ok": code == EXIT_OK,
        "n": sp.n,
        "c": c,
        "x0": list(x0),
        "status": traj.status,
        "samples": len(traj),
        "t_end": float(traj.t[-1]),
        "max_vol_drift": float(np.max(np.abs(vol / c - 1.0))),
        "events": ev,
    }
    if args.out and args.out != "-":
        _write(args.out, csv_text)
        sys.stdout.write(format_json(summary))
    else:
        sys.stdout.write(csv_text)
        sys.stderr.write(format_json(summary))
    return code


# -- analyze ------------------------------------------------------------------

def analysis_report(n: int, c: float = 1.0) -> dict:
    sp = _space(n)
    c = _positive("--c", c)
    kappa, q0, x0 = einstein_point(sp, c)
    eq = equilibrium_spectrum(sp, q0)
    sc = structural_constants(sp, c)
    planar = planar_equilibrium_data(sp, q0)
    p12 = gamma_curve(sp, c, 1, sc.t_tilde)
    return {
        "n": n,
        "c": c,
        "kappa": float(kappa),
        "q0": q0,
        "x0": list(x0),
        "eigenvalues": [float(v) for v in eq.eigenvalues],
        "eigenvectors": {
            "Es": [[float(a) for a in v] for v in eq.Es],
            "Eu": None if eq.Eu is None else [float(a) for a in eq.Eu],
            "Ec": [float(a) for a in eq.Ec],
        },
        "classification": eq.classification.value,
        "nu_tilde": float(sc.nu_tilde),
        "l": sc.l,
        "tau1": sc.tau1,
        "tau1_crossing": sc.tau1_crossing,
        "tau2": sc.tau2,
        "p_bar": sc.p_bar,
        "P12": list(p12),
        "planar": {
            "delta": planar.delta,
            "rho": planar.rho,
            "sigma": planar.sigma,
            "classification": planar.classification.value,
        },
    }


def cmd_analyze(args) -> int:
    _emit_json(args, analysis_report(args.n, args.c))
    return EXIT_OK


# -- verify -------------------------------------------------------------------

def verify_sturm(n_min: int, n_max: int) -> dict:
    if n_min < 3 or n_max < n_min:
        raise DomainError(f"need 3 <= n-min <= n-max, got {n_min}, {n_max}")
    reports = [verify_positivity(n) for n in range(n_min, n_max + 1)]
    good = (Verdict.POSITIVE_ON_INTERVAL, Verdict.DEGENERATE)
    failed = [r.n for r in reports if r.verdict not in good]
    return {"ok": not failed, "n_min": n_min, "n_max": n_max, "failed": failed,
            "reports": [r.as_dict() for r in reports]}


def _short_mantissa(v: float, bits: int = 26) -> float:
    # with 26-bit mantissas u + v is exact over [1e-2, 1e2], so plane samples
    # lie exactly on the plane instead of one rounding away from it
    m, e = math.frexp(v)
    return math.ldexp(round(m * 2 ** bits) / 2 ** bits, e)


def _inward_sample(sp, surface: SurfaceId, rng: SplitMix64) -> tuple:
    if surface in (SurfaceId.GAMMA1, SurfaceId.GAMMA2):
        nu_tilde = 1.0 / (2 * sp.n - 4)
        nu = rng.uniform(0.0, nu_tilde)
        while not nu > 0.0:
            nu = rng.uniform(0.0, nu_tilde)
        branch = 1 if surface is SurfaceId.GAMMA1 else 2
        return tuple(gamma_point(sp, branch, nu, rng.log_uniform(1e-2, 1e2)))
    u = _short_mantissa(rng.log_uniform(1e-2, 1e2))
    v = _short_mantissa(rng.log_uniform(1e-2, 1e2))
    if surface is SurfaceId.PI1:
        return (u + v, u, v)
    if surface is SurfaceId.PI2:
        return (u, u + v, v)
    return (u, v, u + v)


def verify_inward(n: int, samples: int, seed: int, surface: str) -> dict:
    sp = _space(n)
    try:
        sid = SurfaceId(surface)
    except ValueError:
        raise DomainError(f"unknown surface {surface!r}")
    allowed = ({SurfaceId.PI1, SurfaceId.PI2, SurfaceId.PI3} if n == 3 else
               {SurfaceId.PI1, SurfaceId.PI2, SurfaceId.GAMMA1, SurfaceId.GAMMA2})
    if sid not in allowed:
        raise DomainError(f"surface {sid.value} does not bound the positive Ricci cone for n={n}")
    if samples < 1:
        raise DomainError("--samples must be >= 1")
    rng = SplitMix64(seed)
    fluxes = np.array([float(inward_flux(sp, sid, _inward_sample(sp, sid, rng), check=False))
                       for _ in range(samples)])
    nonpositive = int(np.count_nonzero(fluxes <= 0.0))
    out = {"n": n, "surface": sid.value, "samples": samples, "seed": seed,
           "min_flux": float(fluxes.min()), "max_flux": float(fluxes.max()),
           "nonpositive": nonpositive}
    ok = nonpositive == 0
    if sid in (SurfaceId.PI1, SurfaceId.PI2, SurfaceId.PI3):
        expected = 2.0 / (n - 2)
        dev = float(np.max(np.abs(fluxes - expected))) / expected
        out["expected_plane_flux"] = expected
        out["max_relative_deviation"] = dev
        ok = ok and dev <= PLANE_FLUX_TOL
    out["ok"] = ok
    return out


def verify_flow(n: int, trials: int, seed: int, t_max: float,
                max_drift: Optional[float] = None, workers: Optional[int] = None) -> dict:
    _space(n)
    if trials < 1:
        raise DomainError("--trials must be >= 1")
    cfg = IntegratorConfig(t_max=_positive("--t-max", t_max))
    results = run_batch(n, trials, seed, cfg, workers=workers)
    times = [r.entry_time for r in results if r.entered]
    exits = sum(r.exits_after_entry for r in results)
    drift = max(r.drift for r in results)
    entered = len(times)
    ok = entered == trials and exits == 0
    if max_drift is not None:
        ok = ok and drift < max_drift
    return {
        "ok": ok,
        "n": n,
        "trials": trials,
        "seed": seed,
        "t_max": t_max,
        "entered": entered,
        "not_entered": [r.index for r in results if not r.entered],
        "entry_time": {
            "min": min(times) if times else None,
            "median": statistics.median(times) if times else None,
            "max": max(times) if times else None,
        },
        "exit_violations": exits,
        "max_vol_drift": drift,
        "max_drift_bound": max_drift,
        "stop_status": dict(sorted(Counter(r.status for r in results).items())),
    }


def cmd_verify(args) -> int:
    if args.check == "sturm":
        rep = verify_sturm(args.n_min, args.n_max)
    elif args.check == "inward":
        rep = verify_inward(args.n, args.samples, args.seed, args.surface)
    else:
        rep = verify_flow(args.n, args.trials, args.seed, args.t_max, args.max_drift)
    _emit_json(args, rep)
    return EXIT_OK if rep["ok"] else EXIT_FAIL


# -- portrait -----------------------------------------------------------------

def cmd_portrait(args) -> int:
    sp = _space(args.n)
    if args.grid < 3:
        raise DomainError(f"--grid must be >= 3, got {args.grid}")
    if args.projection == "triangle":
        text = format_csv(TRIANGLE_COLUMNS, triangle_rows(sp, args.grid))
    elif args.projection == "planar":
        text = format_csv(PLANAR_COLUMNS, planar_rows(sp, args.grid))
    else:
        text = format_csv(SIGMA_COLUMNS, sigma_rows(sp, args.grid, _positive("--c", args.c)))
    _write(args.out, text)
    return EXIT_OK


# -- wiring -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ricci-stiefel",
                description="Normalized Ricci flow on the Stiefel manifolds SO(n)/SO(n-2).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(q):
        q.add_argument("--manifest", help="write a run manifest (JSON) to this path")

    s = sub.add_parser("simulate", help="integrate one trajectory")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--x0", required=True, help="a,b,c (rescaled onto Vol = c unless already there)")
    s.add_argument("--t-max", type=float, required=True)
    s.add_argument("--c", type=float, default=1.0)
    s.add_argument("--rtol", type=float)
    s.add_argument("--atol", type=float)
    s.add_argument("--out", help="trajectory CSV (default stdout)")
    s.add_argument("--events-out", help="events JSON array")
    common(s)
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("analyze", help="equilibrium and structural constants")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--c", type=float, default=1.0)
    a.add_argument("--out")
    common(a)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="verification harness")
    vs = v.add_subparsers(dest="check", required=True, parser_class=_Parser)
    v1 = vs.add_parser("sturm")
    v1.add_argument("--n-min", type=int, default=4)
    v1.add_argument("--n-max", type=int, default=500)
    v2 = vs.add_parser("inward")
    v2.add_argument("--n", type=int, required=True)
    v2.add_argument("--samples", type=int, default=10_000)
    v2.add_argument("--seed", type=int, default=0)
    v2.add_argument("--surface", required=True, choices=[s.value for s in SurfaceId])
    v3 = vs.add_parser("flow")
    v3.add_argument("--n", type=int, required=True)
    v3.add_argument("--trials", type=int, default=100)
    v3.add_argument("--seed", type=int, default=0)
    v3.add_argument("--t-max", type=float, default=200.0)
    v3.add_argument("--max-drift", type=float, help="also require max Vol drift below this")
    for q in (v1, v2, v3):
        q.add_argument("--out")
        common(q)
        q.set_defaults(func=cmd_verify)

    r = sub.add_parser("portrait", help="phase-portrait CSV")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--projection", required=True, choices=["triangle", "planar", "sigma"])
    r.add_argument("--grid", type=int, required=True)
    r.add_argument("--c", type=float, default=1.0)
    r.add_argument("--out")
    common(r)
    r.set_defaults(func=cmd_portrait)
    return p


def _manifest(args, argv, start: float, end: float, code: int) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "manifest")}
    seed = params.get("seed")
    return {
        "command": args.command if args.command != "verify" else f"verify {args.check}",
        "argv": list(argv),
        "params": params,
        "seed": None if seed is None else seed & ((1 << 64) - 1),
        "tool_version": __version__,
        "rng_stream_version": STREAM_VERSION,
        "implementation": IMPLEMENTATION,
        "workers": worker_count(),
        "python": platform.python_version(),
        "exit_code": code,
        "start": _dt.datetime.fromtimestamp(start, _dt.timezone.utc).isoformat(),
        "end": _dt.datetime.fromtimestamp(end, _dt.timezone.utc).isoformat(),
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stdout.write(format_json({"ok": False, "error": str(exc)}))
        return EXIT_FAIL
    start = time.time()
    try:
        code = args.func(args)
    except (DomainError, ValueError) as exc:
        _emit_json(args, {"ok": False, "error": str(exc)})
        code = EXIT_FAIL
    if args.manifest:
        _write(args.manifest, format_json(_manifest(args, argv, start, time.time(), code)))
    return code


if __name__ == "__main__":
    sys.exit(main())
