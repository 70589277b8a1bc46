"""The positive Ricci cone, its boundary pieces and distinguished curves on
the volume levels.

Membership is decided on the scale-free quantities ``xi*ri``, computed from
numerators in the plane coordinates ``p = (-x1+x2+x3, x1-x2+x3, x1+x2-x3)``:

    4(n-2) x2 x3 * x1 r1 = (n-3)/2 (p1^2 + p1 p2 + p1 p3) + (n-1)/2 p2 p3
    4(n-2) x1 x3 * x2 r2 = (n-3)/2 (p1 p2 + p2^2 + p2 p3) + (n-1)/2 p1 p3
    4 x1 x2 * x3 r3      = p1 p2
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .flow import _scaled, plane_coordinates, plane_rates, vector_field
from .geometry import DomainError, MetricPoint, as_space, coords, volume

DEFAULT_EPS = 1e-9


class SurfaceId(str, enum.Enum):
    PI1 = "pi1"
    PI2 = "pi2"
    PI3 = "pi3"
    GAMMA1 = "gamma1"
    GAMMA2 = "gamma2"
    GAMMA_MINUS1 = "gamma_minus1"
    GAMMA_MINUS2 = "gamma_minus2"


class RegionKind(str, enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class RegionClass:
    kind: RegionKind
    surfaces: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class StructuralConstants:
    """Constants attached to ``n`` and the volume level ``c``.

    ``nu_tilde`` and ``t_tilde`` equal ``1/(2n-4)``; ``l`` is the smaller root
    of ``nu^2 - 2(n-2) nu + 1``; ``tau1``, ``tau2`` are the entry thresholds
    of the curves I1 and I3; ``p_bar`` fixes the common point of the two
    gamma curves.

    ``tau1`` is the closed form ``2**(2-n) * c``. The parameter where I1 on
    ``Vol = c`` actually meets Pi_1 (and so enters the cone) is
    ``tau1_crossing = (2**(2-n) * c)**(1/(2n-3))``; the two agree only when
    ``2**(2-n) * c == 1``.
    """

    nu_tilde: Fraction
    l: float
    kappa: Fraction
    t_tilde: Fraction
    tau1: float
    tau2: float
    p_bar: float
    tau1_crossing: float


def scaled_ricci(sp, x) -> tuple:
    """``(x1 r1, x2 r2, x3 r3)``, degree-0 homogeneous."""
    n = as_space(sp).n
    return _scaled(n, *coords(x))


def observable(sp, x):
    """``min(x1 r1, x2 r2, x3 r3)``: positive exactly on the positive Ricci cone."""
    return min(scaled_ricci(sp, x))


def _nearest_plane(p, i, j, a, b):
    return a if abs(p[i]) <= abs(p[j]) else b


def r_plus_membership(sp, x, eps: float = DEFAULT_EPS) -> RegionClass:
    """Classify ``x`` against the positive Ricci cone.

    Inside iff ``min(xi ri) > eps``. Boundary when some ``xi ri`` is within
    ``eps`` of zero while the others are ``>= -eps``; the vanishing pieces are
    reported (planes Pi_i, or the cone pieces Gamma_i for n >= 4).
    """
    sp = as_space(sp)
    g = scaled_ricci(sp, x)
    if min(g) > eps:
        return RegionClass(RegionKind.INSIDE)
    if min(g) < -eps:
        return RegionClass(RegionKind.OUTSIDE)
    x1, x2, x3 = coords(x)
    s = x1 + x2 + x3
    p = [v / s for v in plane_coordinates((x1, x2, x3))]
    found = set()
    if abs(g[2]) <= eps:
        found.add(_nearest_plane(p, 0, 1, SurfaceId.PI1, SurfaceId.PI2))
    if abs(g[0]) <= eps:
        if sp.n == 3:
            found.add(_nearest_plane(p, 1, 2, SurfaceId.PI2, SurfaceId.PI3))
        else:
            found.add(SurfaceId.GAMMA1)
    if abs(g[1]) <= eps:
        if sp.n == 3:
            found.add(_nearest_plane(p, 0, 2, SurfaceId.PI1, SurfaceId.PI3))
        else:
            found.add(SurfaceId.GAMMA2)
    return RegionClass(RegionKind.BOUNDARY, frozenset(found))


def structural_constants(sp, c=1.0) -> StructuralConstants:
    sp = as_space(sp)
    n = sp.n
    if not c > 0:
        raise DomainError(f"c must be positive, got {c}")
    c = float(c)
    # n-2-sqrt((n-1)(n-3)) without cancellation: the two roots multiply to 1
    l = 1.0 / (n - 2 + math.sqrt((n - 1) * (n - 3)))
    return StructuralConstants(
        nu_tilde=Fraction(1, 2 * n - 4),
        l=l,
        kappa=Fraction(2 * (n - 2), n - 1),
        t_tilde=Fraction(1, 2 * n - 4),
        tau1=2.0 ** (2 - n) * c,
        tau2=((2 * n - 4) / c) ** (1.0 / (3 - 2 * n)),
        p_bar=(c / (2 * n - 4)) ** (1.0 / (2 * n - 3)),
        tau1_crossing=(2.0 ** (2 - n) * c) ** (1.0 / (2 * n - 3)),
    )


def gamma_point(sp, branch: int, nu, t) -> MetricPoint:
    """Point ``(mu t, nu t, t)`` (branch 1) or ``(nu t, mu t, t)`` (branch 2)
    of the trimmed cone piece, ``mu = sqrt(nu^2 - 2(n-2) nu + 1)``.

    Raises
    ------
    DomainError
        Unless ``0 < nu <= 1/(2n-4)`` and ``t > 0``.
    """
    n = as_space(sp).n
    if branch not in (1, 2):
        raise DomainError(f"branch must be 1 or 2, got {branch}")
    if not (0 < nu <= Fraction(1, 2 * n - 4)) or not t > 0:
        raise DomainError(f"need 0 < nu <= 1/(2n-4) and t > 0, got nu={nu}, t={t}")
    mu = math.sqrt(nu * nu - 2 * (n - 2) * nu + 1)
    a, b, t = mu * t, float(nu * t), float(t)
    return MetricPoint(a, b, t) if branch == 1 else MetricPoint(b, a, t)


def _cone(n, a, b, c):
    # 4(n-2) x_b x_c * r_a numerator for the module of ``a``
    return 2 * (n - 2) * b * c - c * c - b * b + a * a


def on_surface(sp, surface: SurfaceId, x, tol: float = DEFAULT_EPS) -> bool:
    """Whether ``x`` lies on ``surface`` within the scale-free tolerance."""
    sp = as_space(sp)
    surface = SurfaceId(surface)
    x1, x2, x3 = coords(x)
    s = x1 + x2 + x3
    p = plane_coordinates((x1, x2, x3))
    if surface is SurfaceId.PI3 and sp.n != 3:
        return False
    if surface in (SurfaceId.PI1, SurfaceId.PI2, SurfaceId.PI3):
        k = {SurfaceId.PI1: 0, SurfaceId.PI2: 1, SurfaceId.PI3: 2}[surface]
        return abs(p[k]) <= tol * s
    first = surface in (SurfaceId.GAMMA1, SurfaceId.GAMMA_MINUS1)
    a, b = (x1, x2) if first else (x2, x1)
    if abs(_cone(sp.n, a, b, x3)) > tol * s * s:
        return False
    ratio = b / x3
    lower = surface in (SurfaceId.GAMMA_MINUS1, SurfaceId.GAMMA_MINUS2)
    l = structural_constants(sp).l
    tol_l = 1e-6
    return ratio >= (1 / l) * (1 - tol_l) if lower else ratio <= l * (1 + tol_l)


def boundary_normal(sp, surface: SurfaceId, x, check: bool = True) -> tuple:
    """Normal of a boundary piece at ``x``.

    Planes use their constant normals; the cone pieces use the gradient of
    ``x1^2 - x2^2 - x3^2 + 2(n-2) x2 x3`` (and its swap), which points into
    the region where the curvature is positive.

    Raises
    ------
    DomainError
        If ``check`` and ``x`` is not on ``surface``.
    """
    sp = as_space(sp)
    surface = SurfaceId(surface)
    x1, x2, x3 = coords(x)
    if check and not on_surface(sp, surface, (x1, x2, x3)):
        raise DomainError(f"point {(x1, x2, x3)} is not on {surface.value}")
    n = sp.n
    if surface is SurfaceId.PI1:
        return (-1, 1, 1)
    if surface is SurfaceId.PI2:
        return (1, -1, 1)
    if surface is SurfaceId.PI3:
        return (1, 1, -1)
    if surface in (SurfaceId.GAMMA1, SurfaceId.GAMMA_MINUS1):
        return (2 * x1, 2 * (n - 2) * x3 - 2 * x2, 2 * (n - 2) * x2 - 2 * x3)
    return (2 * (n - 2) * x3 - 2 * x1, 2 * x2, 2 * (n - 2) * x1 - 2 * x3)


def inward_flux(sp, surface: SurfaceId, x, check: bool = True):
    """Inner product of the flow field with the boundary normal.

    On the planes this is the rate of the plane coordinate, evaluated in a
    form that stays exact to rounding on the plane itself.
    """
    sp = as_space(sp)
    surface = SurfaceId(surface)
    nrm = boundary_normal(sp, surface, x, check=check)
    if surface in (SurfaceId.PI1, SurfaceId.PI2, SurfaceId.PI3):
        k = {SurfaceId.PI1: 0, SurfaceId.PI2: 1, SurfaceId.PI3: 2}[surface]
        return plane_rates(sp, x)[k]
    f = vector_field(sp, x)
    return f.f1 * nrm[0] + f.f2 * nrm[1] + f.f3 * nrm[2]


def pi_curve(sp, c, t) -> MetricPoint:
    """Intersection of the level ``Vol = c`` with Pi_1 (``0 < t < 1``) or
    Pi_2 (``t > 1``); ``t = x2/x1``."""
    sp = as_space(sp)
    if not (t > 0) or t == 1:
        raise DomainError(f"t must be positive and != 1, got {t}")
    d = sp.d
    u = abs(t - 1)
    x1 = c ** (1 / d) * t ** ((2 - sp.n) / d) * u ** (-1 / d)
    return MetricPoint(x1, t * x1, u * x1)


def gamma_curve(sp, c, branch: int, t) -> MetricPoint:
    """Intersection of the level ``Vol = c`` with the trimmed cone piece
    Gamma_branch; ``t = x2/x3`` (branch 1) in ``(0, 1/(2n-4)]``."""
    sp = as_space(sp)
    n, d = sp.n, sp.d
    if branch not in (1, 2):
        raise DomainError(f"branch must be 1 or 2, got {branch}")
    if not (0 < t <= Fraction(1, 2 * n - 4)):
        raise DomainError(f"t must lie in (0, 1/(2n-4)], got {t}")
    psi = math.sqrt(t * t - 2 * (n - 2) * t + 1)
    x3 = c ** (1 / d) * (t * psi) ** (-(n - 2) / d)
    a, b = psi * x3, t * x3
    return MetricPoint(a, b, x3) if branch == 1 else MetricPoint(b, a, x3)


def i_curve(sp, c, which: int, tau) -> MetricPoint:
    """The curves I1, I2 (two equal coordinates among x2, x3 or x1, x3) and
    I3 (``x1 = x2``) on the level ``Vol = c``."""
    sp = as_space(sp)
    n = sp.n
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    if which == 3:
        return MetricPoint(tau, tau, c * tau ** (4 - 2 * n))
    if which not in (1, 2):
        raise DomainError(f"which must be 1, 2 or 3, got {which}")
    a = c ** (1 / (n - 2)) * tau ** ((1 - n) / (n - 2))
    return MetricPoint(a, tau, tau) if which == 1 else MetricPoint(tau, a, tau)


def i_curve_tangent(sp, c, which: int, tau) -> tuple:
    """Derivative of :func:`i_curve` with respect to ``tau``."""
    n = as_space(sp).n
    if which == 3:
        return (1.0, 1.0, (4 - 2 * n) * c * tau ** (3 - 2 * n))
    da = (1 - n) / (n - 2) * c ** (1 / (n - 2)) * tau ** ((1 - n) / (n - 2) - 1)
    return (da, 1.0, 1.0) if which == 1 else (1.0, da, 1.0)


def tangency_residual(sp, c, which: int, tau) -> float:
    """``|V x T| / (|V| |T|)`` for the field ``V`` and the curve tangent ``T``;
    zero where the field vanishes."""
    x = i_curve(sp, c, which, tau)
    v = vector_field(sp, x).as_array()
    t = np.asarray(i_curve_tangent(sp, c, which, tau), dtype=float)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return 0.0
    return float(np.linalg.norm(np.cross(v, t)) / (nv * np.linalg.norm(t)))


def sigma_residual(sp, c, x):
    """``Vol(x) - c``."""
    return volume(sp, x) - c
