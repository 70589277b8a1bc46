"""Adaptive integration of the flow with detection of entry into and exit
from the positive Ricci cone.

The stepper is the Dormand-Prince 5(4) pair with PI step-size control,
running in ``_core.kernels`` (compiled when available). The state carries
both ``x`` and the plane coordinates ``p`` (see ``_fallback``), which keeps
every coordinate at full relative precision in the collapse regimes where one
coordinate becomes negligible against the others.

Events are located by bisection on the sub-step length of the Runge-Kutta
step that changed the sign of ``g = min(x1 r1, x2 r2, x3 r3)``.
"""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._core import kernels
from .flow import equilibrium_spectrum
from .geometry import (CurvatureData, DomainError, MetricPoint, as_space, coords,
                       einstein_point, principal_ricci)
from .regions import gamma_curve, pi_curve, structural_constants
from .rng import SplitMix64

EVENT_G_TOL = 1e-10


@dataclass(frozen=True)
class IntegratorConfig:
    """Integrator settings.

    ``max_aspect`` bounds ``max(x)/min(x)``; beyond it the orbit is treated as
    having left the positive octant at desk scale (a ``BlowupGuard`` event).
    """

    t_max: float = 100.0
    rtol: float = 1e-9
    atol: float = 1e-12
    max_steps: int = 1_000_000
    event_time_tol: float = 1e-10
    max_aspect: float = 1e15

    def __post_init__(self) -> None:
        for name in ("t_max", "rtol", "atol", "event_time_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")
        if not self.max_steps > 0:
            raise DomainError(f"max_steps must be positive, got {self.max_steps}")
        if not self.max_aspect > 1:
            raise DomainError(f"max_aspect must exceed 1, got {self.max_aspect}")


class EventKind(str, enum.Enum):
    ENTER = "EnterRPlus"
    EXIT = "ExitRPlus"
    BLOWUP = "BlowupGuard"


@dataclass(frozen=True)
class EventRecord:
    kind: EventKind
    t: float
    x: MetricPoint
    g: float = 0.0

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "t": self.t, "x": [self.x.x1, self.x.x2, self.x.x3]}


@dataclass
class Trajectory:
    """Samples of one integration.

    ``t`` is strictly increasing; for backward integration
    (``direction == -1``) the state at sample ``i`` is the solution at time
    ``-t[i]``. ``p`` holds the plane coordinates integrated alongside ``x``.
    """

    n: int
    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    direction: int = 1
    status: str = "t_max"

    def __len__(self) -> int:
        return len(self.t)

    def curvature(self) -> tuple:
        """Arrays ``(r1, r2, r3, S, Vol)`` over the samples."""
        r1, r2, r3 = principal_ricci(self.n, self.x.T)
        s = (self.n - 2) * (r1 + r2) + r3
        return r1, r2, r3, s, volume_array(self.n, self.x)

    @property
    def samples(self) -> list:
        """``(t, MetricPoint, CurvatureData)`` per sample."""
        r1, r2, r3, s, vol = self.curvature()
        return [(float(self.t[i]), MetricPoint(*map(float, self.x[i])),
                 CurvatureData(float(r1[i]), float(r2[i]), float(r3[i]), float(s[i]),
                               float(vol[i])))
                for i in range(len(self.t))]

    @property
    def final(self) -> MetricPoint:
        return MetricPoint(*map(float, self.x[-1]))


class StepSizeUnderflowError(RuntimeError):
    """The step size fell below the resolution of the time variable.

    Attributes ``trajectory`` and ``events`` hold everything computed up to
    that point.
    """

    def __init__(self, message: str, trajectory: Trajectory, events: list):
        super().__init__(message)
        self.trajectory = trajectory
        self.events = events


class NotEnteredError(RuntimeError):
    """No entry into the positive Ricci cone before the integration stopped."""

    def __init__(self, message: str, trajectory: Optional[Trajectory] = None):
        super().__init__(message)
        self.trajectory = trajectory


def volume_array(n: int, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[:, 0] ** (n - 2) * x[:, 1] ** (n - 2) * x[:, 2]


def _locate(n, sign, t, y, h_last, inside, tol):
    """Bisect the sub-step length in ``(0, h_last]`` for the sign change of
    the observable. Returns ``(dt, y_event)`` with ``y_event`` on the new side."""
    k = [sign * v for v in kernels.field6(n, y)]
    lo, hi = 0.0, h_last
    y_hi, _, _ = kernels.rk_step(n, sign, y, k, hi)
    while True:
        g_hi = kernels.observable6(n, y_hi)
        if hi - lo <= tol and abs(g_hi) <= EVENT_G_TOL:
            break
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        y_mid, _, _ = kernels.rk_step(n, sign, y, k, mid)
        if (kernels.observable6(n, y_mid) > 0.0) != inside:
            hi, y_hi = mid, y_mid
        else:
            lo = mid
    return hi, y_hi


def integrate(sp, x0, cfg: IntegratorConfig = IntegratorConfig(), *, direction: int = 1,
              stop_on_entry: bool = False) -> tuple[Trajectory, list]:
    """Integrate the flow from ``x0``.

    Parameters
    ----------
    sp : SpaceParams or int
    x0 : MetricPoint or 3-sequence
    cfg : IntegratorConfig
    direction : {1, -1}
        ``-1`` integrates the negated field (backward in time).
    stop_on_entry : bool
        Stop at the first ``EnterRPlus`` event.

    Returns
    -------
    trajectory : Trajectory
    events : list of EventRecord
        Entry and exit events in time order, then a ``BlowupGuard`` event if
        the guard stopped the run.

    Raises
    ------
    StepSizeUnderflowError
        If the step size underflows (typically a finite-time collapse of one
        coordinate); carries the partial trajectory and events.
    """
    sp = as_space(sp)
    n = sp.n
    if direction not in (1, -1):
        raise DomainError(f"direction must be 1 or -1, got {direction}")
    x1, x2, x3 = (float(v) for v in coords(x0))
    sign = float(direction)
    y = kernels.lift(x1, x2, x3)
    t = 0.0
    h = kernels.initial_step(n, sign, y, cfg.rtol, cfg.atol, cfg.t_max)
    ts: list = []
    ys: list = []
    events: list = []
    steps_left = cfg.max_steps
    status = "t_max"
    while True:
        st, seg_t, seg_y, h, h_last, used = kernels.run_segment(
            n, sign, t, y, h, cfg.t_max, cfg.rtol, cfg.atol, steps_left, cfg.max_aspect)
        steps_left -= used
        ts.extend(seg_t if not ts else seg_t[1:])
        ys.extend(seg_y if not ys else seg_y[1:])
        t, y = ts[-1], ys[-1]
        if st == kernels.CROSSED:
            inside = kernels.observable6(n, y) > 0.0
            dt, yc = _locate(n, sign, t, y, h_last, inside, cfg.event_time_tol)
            t = t + dt
            y = yc
            ts.append(t)
            ys.append(y)
            kind = EventKind.EXIT if inside else EventKind.ENTER
            events.append(EventRecord(kind, t, MetricPoint(*y[:3]), kernels.observable6(n, y)))
            if kind is EventKind.ENTER and stop_on_entry:
                status = "entered"
                break
            if steps_left <= 0:
                status = "max_steps"
                break
            continue
        if st == kernels.DONE:
            status = "t_max"
        elif st == kernels.MAX_STEPS:
            status = "max_steps"
        elif st == kernels.GUARD:
            status = "guard"
            events.append(EventRecord(EventKind.BLOWUP, t, MetricPoint(*y[:3]),
                                      kernels.observable6(n, y)))
        else:
            status = "underflow"
        break
    arr = np.asarray(ys, dtype=float)
    traj = Trajectory(n, np.asarray(ts, dtype=float), arr[:, :3].copy(), arr[:, 3:].copy(),
                      direction, status)
    if status == "underflow":
        raise StepSizeUnderflowError(
            f"step size underflow at t={t!r}, x={tuple(y[:3])}", traj, events)
    return traj, events


def entry_time(sp, x0, cfg: IntegratorConfig = IntegratorConfig()) -> float:
    """Time of the first entry into the positive Ricci cone.

    Raises
    ------
    DomainError
        If ``x0`` is already inside.
    NotEnteredError
        If the integration stops (``t_max``, ``max_steps``, guard or step
        underflow) without an entry.
    """
    sp = as_space(sp)
    x1, x2, x3 = (float(v) for v in coords(x0))
    if kernels.observable(sp.n, x1, x2, x3) > 0.0:
        raise DomainError(f"start {(x1, x2, x3)} is already inside the positive Ricci cone")
    try:
        traj, events = integrate(sp, (x1, x2, x3), cfg, stop_on_entry=True)
    except StepSizeUnderflowError as exc:
        raise NotEnteredError(str(exc), exc.trajectory) from exc
    for ev in events:
        if ev.kind is EventKind.ENTER:
            return ev.t
    raise NotEnteredError(f"no entry before the run stopped ({traj.status})", traj)


def trace_separatrix(sp, direction: str, side: int, epsilon: Optional[float] = None,
                     cfg: IntegratorConfig = IntegratorConfig(), c: float = 1.0) -> Trajectory:
    """Trace a separatrix of the Einstein point on the level ``Vol = c``.

    ``direction='stable'`` integrates backward in time from
    ``x0 + side*epsilon*Es``; ``'unstable'`` forward from ``x0 + side*epsilon*Eu``
    (n >= 4). Eigenvectors are normalized so ``epsilon`` is a Euclidean
    offset; it defaults to ``1e-6 * q0``. A guard stop or step underflow ends
    the trace and returns what was computed.
    """
    sp = as_space(sp)
    if side not in (1, -1):
        raise DomainError(f"side must be 1 or -1, got {side}")
    kappa, q0, x0 = einstein_point(sp, c)
    rep = equilibrium_spectrum(sp, q0)
    if direction == "stable":
        n = sp.n
        v = np.array([1.0, 1.0, -4.0 * (n - 2) ** 2 / (n - 1)])
        sgn = -1
    elif direction == "unstable":
        if rep.Eu is None:
            raise DomainError("no unstable direction for n = 3")
        v = np.array([float(a) for a in rep.Eu])
        sgn = 1
    else:
        raise DomainError(f"direction must be 'stable' or 'unstable', got {direction!r}")
    eps = 1e-6 * q0 if epsilon is None else epsilon
    start = x0.as_array() + side * eps * v / np.linalg.norm(v)
    try:
        traj, _ = integrate(sp, start, cfg, direction=sgn)
    except StepSizeUnderflowError as exc:
        traj = exc.trajectory
    return traj


def conservation_report(traj: Trajectory, sp, c) -> float:
    """Largest relative volume drift ``|Vol(x)/c - 1|`` over the samples."""
    n = as_space(sp).n
    if len(traj) == 0:
        raise DomainError("empty trajectory")
    x = np.asarray(traj.x, dtype=float)
    logv = (n - 2) * (np.log(x[:, 0]) + np.log(x[:, 1])) + np.log(x[:, 2])
    return float(np.max(np.abs(np.expm1(logv - math.log(c)))))


# -- random starts ---------------------------------------------------------------

def rescale_to_level(sp, x, c=1.0) -> MetricPoint:
    """Scale ``x`` onto ``Vol = c`` (the flow is scale invariant)."""
    sp = as_space(sp)
    x1, x2, x3 = (float(v) for v in coords(x))
    logv = (sp.n - 2) * (math.log(x1) + math.log(x2)) + math.log(x3)
    s = math.exp((math.log(c) - logv) / sp.d)
    return MetricPoint(x1 * s, x2 * s, x3 * s)


def _perturb(rng: SplitMix64, x: MetricPoint, width: float) -> tuple:
    return tuple(v * math.exp(rng.uniform(-width, width)) for v in x)


def sample_outside_start(sp, rng: SplitMix64, c: float = 1.0, box: float = 100.0,
                         width: float = 0.05, max_tries: int = 100_000) -> MetricPoint:
    """A random point on ``Vol = c`` strictly outside the positive Ricci cone.

    Each draw picks one of three proposals with equal probability, then
    rejects points with ``g >= 0``:

    * a log-uniform point of the box ``[1/box, box]^3`` scaled onto the level;
    * a point of the curves pi_1/pi_2 (log-uniform ``t`` in ``[1/box, box]``)
      with every coordinate multiplied by ``exp(U(-width, width))``, scaled
      onto the level;
    * likewise for a point of gamma_1/gamma_2 with ``t`` uniform in the
      admissible interval.
    """
    sp = as_space(sp)
    n = sp.n
    t_tilde = float(structural_constants(sp, c).t_tilde)
    for _ in range(max_tries):
        kind = rng.below(3)
        if kind == 0:
            y = tuple(rng.log_uniform(1.0 / box, box) for _ in range(3))
        elif kind == 1:
            t = rng.log_uniform(1.0 / box, box)
            if t == 1.0:
                continue
            y = _perturb(rng, pi_curve(sp, c, t), width)
        else:
            t = rng.uniform(0.0, t_tilde)
            if not t > 0.0:
                continue
            y = _perturb(rng, gamma_curve(sp, c, 1 + rng.below(2), t), width)
        x = rescale_to_level(sp, y, c)
        if kernels.observable(n, x.x1, x.x2, x.x3) < 0.0:
            return x
    raise RuntimeError("rejection sampling did not produce an outside point")


def sample_level_point(sp, x1_range=(1e-2, 1e2), rng: Optional[SplitMix64] = None,
                       c: float = 1.0) -> MetricPoint:
    """Point ``(x1, x2, c*(x1*x2)**(2-n))`` with ``x1, x2`` log-uniform in the range."""
    sp = as_space(sp)
    rng = rng or SplitMix64(0)
    a = rng.log_uniform(*x1_range)
    b = rng.log_uniform(*x1_range)
    return MetricPoint(a, b, c * (a * b) ** (2 - sp.n))


# -- batches ---------------------------------------------------------------------

@dataclass(frozen=True)
class TrialResult:
    index: int
    x0: tuple
    entered: bool
    entry_time: Optional[float]
    exits_after_entry: int
    drift: float
    status: str
    t_end: float
    events: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "x0": list(self.x0),
            "entered": self.entered,
            "entry_time": self.entry_time,
            "exits_after_entry": self.exits_after_entry,
            "drift": self.drift,
            "status": self.status,
            "t_end": self.t_end,
        }


def run_trial(n: int, seed: int, index: int, cfg: IntegratorConfig, c: float = 1.0) -> TrialResult:
    """One seeded start outside the cone, integrated to ``cfg.t_max`` or a stop."""
    rng = SplitMix64.stream(seed, index)
    x0 = sample_outside_start(n, rng, c)
    try:
        traj, events = integrate(n, x0, cfg)
    except StepSizeUnderflowError as exc:
        traj, events = exc.trajectory, exc.events
    t_entry = next((e.t for e in events if e.kind is EventKind.ENTER), None)
    exits = 0
    if t_entry is not None:
        exits = sum(1 for e in events if e.kind is EventKind.EXIT and e.t > t_entry)
    return TrialResult(index, x0.as_tuple(), t_entry is not None, t_entry, exits,
                       conservation_report(traj, n, c), traj.status, float(traj.t[-1]), events)


def _trial_args(args):
    return run_trial(*args)


def worker_count() -> int:
    """Workers for batch runs: ``RICCI_STIEFEL_THREADS`` (``0`` = all CPUs), default 1."""
    raw = os.environ.get("RICCI_STIEFEL_THREADS", "1").strip() or "1"
    try:
        k = int(raw)
    except ValueError:
        raise DomainError(f"RICCI_STIEFEL_THREADS must be an integer, got {raw!r}")
    if k < 0:
        raise DomainError("RICCI_STIEFEL_THREADS must be >= 0")
    return (os.cpu_count() or 1) if k == 0 else k


def run_batch(n: int, trials: int, seed: int, cfg: IntegratorConfig, c: float = 1.0,
              workers: Optional[int] = None) -> list:
    """Run ``trials`` seeded trials; results are ordered by trial index and do
    not depend on the worker count."""
    workers = worker_count() if workers is None else workers
    args = [(n, seed, i, cfg, c) for i in range(trials)]
    if workers <= 1 or trials < 2:
        return [run_trial(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_trial_args, args, chunksize=max(1, trials // (4 * workers))))
