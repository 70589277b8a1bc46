"""Phase-portrait data: grids and sampled curves as rows for CSV export.

Three views:

``triangle``
    Barycentric grid on the plane ``x1 + x2 + x3 = 1`` with the field
    projected orthogonally onto that plane, in a fixed equilateral chart
    with vertices ``e1 -> (0, 0)``, ``e2 -> (1, 0)``, ``e3 -> (1/2, sqrt(3)/2)``.
``planar``
    Log-spaced grid over ``(x1, x2)`` with the field on ``Vol = 1``.
``sigma``
    Sampled boundary and distinguished curves on ``Vol = c``.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .flow import planar_field, vector_field
from .geometry import as_space, einstein_point, scal_conic_residual
from .regions import (gamma_curve, i_curve, pi_curve, scaled_ricci, structural_constants)

SQRT3_2 = math.sqrt(3.0) / 2.0
SIGN_EPS = 1e-12

TRIANGLE_COLUMNS = ["x1", "x2", "x3", "cx", "cy", "v1", "v2", "v3", "vx", "vy",
                    "inside", "sgn_p1", "sgn_p2", "sgn_p3", "sgn_r1", "sgn_r2", "sgn_S"]
PLANAR_COLUMNS = ["x1", "x2", "x3", "f1", "f2", "inside"]
SIGMA_COLUMNS = ["curve", "param", "x1", "x2", "x3"]


def _sgn(v: float, eps: float = SIGN_EPS) -> int:
    return 0 if abs(v) <= eps else (1 if v > 0 else -1)


def chart(x) -> tuple:
    """Equilateral chart of a point (or vector) with ``x1 + x2 + x3`` fixed."""
    x1, x2, x3 = x
    return x2 + 0.5 * x3, SQRT3_2 * x3


def projected_field(sp, x) -> np.ndarray:
    """Orthogonal projection of the field at ``x`` onto ``x1 + x2 + x3 = 0``."""
    v = vector_field(sp, x).as_array()
    return v - v.mean()


def triangle_rows(sp, grid: int) -> list:
    """Interior barycentric grid points ``(i, j, k)/grid`` with ``i, j, k >= 1``."""
    sp = as_space(sp)
    if grid < 3:
        raise ValueError("grid must be >= 3")
    rows = []
    for i in range(1, grid - 1):
        for j in range(1, grid - i):
            k = grid - i - j
            x = (i / grid, j / grid, k / grid)
            v = projected_field(sp, x)
            cx, cy = chart(x)
            vx, vy = chart(v)
            g = scaled_ricci(sp, x)
            p = (-x[0] + x[1] + x[2], x[0] - x[1] + x[2], x[0] + x[1] - x[2])
            s_sign = -_sgn(scal_conic_residual(sp, x))
            rows.append([x[0], x[1], x[2], cx, cy, float(v[0]), float(v[1]), float(v[2]),
                         float(vx), float(vy), int(min(g) > 0), _sgn(p[0]), _sgn(p[1]),
                         _sgn(p[2]), _sgn(g[0]), _sgn(g[1]), s_sign])
    return rows


def planar_rows(sp, grid: int, lo: float = 0.1, hi: float = 10.0) -> list:
    """``grid x grid`` log-spaced samples of the field on ``Vol = 1``."""
    sp = as_space(sp)
    if grid < 2:
        raise ValueError("grid must be >= 2")
    axis = np.geomspace(lo, hi, grid)
    rows = []
    for a in axis:
        for b in axis:
            a, b = float(a), float(b)
            x3 = (a * b) ** (2 - sp.n)
            f1, f2 = planar_field(sp, a, b)
            rows.append([a, b, x3, f1, f2, int(min(scaled_ricci(sp, (a, b, x3))) > 0)])
    return rows


def sigma_rows(sp, grid: int, c: float = 1.0, tau_range=(0.1, 10.0)) -> list:
    """Curves pi1, pi2, gamma1, gamma2, I1, I2, I3 on ``Vol = c``.

    The gamma curves are sampled on ``(0, t~]`` with ``t~`` the last sample,
    so their common point appears in both.
    """
    sp = as_space(sp)
    if grid < 2:
        raise ValueError("grid must be >= 2")
    rows = []
    for k in range(1, grid + 1):
        t = k / (grid + 1)
        x = pi_curve(sp, c, t)
        rows.append(["pi1", t, x.x1, x.x2, x.x3])
    for t in np.geomspace(1.01, 100.0, grid):
        x = pi_curve(sp, c, float(t))
        rows.append(["pi2", float(t), x.x1, x.x2, x.x3])
    t_tilde = structural_constants(sp, c).t_tilde
    for branch in (1, 2):
        for k in range(1, grid + 1):
            t = Fraction(k, grid) * t_tilde
            x = gamma_curve(sp, c, branch, t)
            rows.append([f"gamma{branch}", float(t), x.x1, x.x2, x.x3])
    for which in (1, 2, 3):
        for tau in np.geomspace(tau_range[0], tau_range[1], grid):
            x = i_curve(sp, c, which, float(tau))
            rows.append([f"I{which}", float(tau), x.x1, x.x2, x.x3])
    return rows


def equilibrium_chart_point(sp) -> tuple:
    """Where the Einstein ray meets ``x1 + x2 + x3 = 1``."""
    _, _, x0 = einstein_point(sp)
    s = x0.x1 + x0.x2 + x0.x3
    return (x0.x1 / s, x0.x2 / s, x0.x3 / s)
