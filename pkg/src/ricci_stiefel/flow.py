"""The reduced normalized Ricci flow and its linearization.

The field is ``f_i = -2 x_i (r_i - S/d)``. :func:`vector_field` evaluates it
through the scale-free products ``g_i = x_i r_i``, written in the plane
coordinates ``p = (-x1+x2+x3, x1-x2+x3, x1+x2-x3)``, as

    f_i = -2 g_i + (2/d) sum_j d_j g_j x_i / x_j

which keeps full relative accuracy at large aspect ratios. The Jacobian uses
the factored numerators

    f1 = N(x1, x2, x3) / (2(n-2)(2n-3) x2 x3)
    f2 = N(x2, x1, x3) / (2(n-2)(2n-3) x1 x3)
    f3 = ((n-2)(x1-x2)^2 + (n-2)(x1+x2)x3 - (n-1)x3^2) / ((2n-3) x1 x2)

with ``N(a, b, c) = (n-1)(c^2+b^2) - (3n-5)a^2 + 2(n-2)(ab + (n-2)ca - (n-1)cb)``.
All forms are the same rational function; the test suite checks them
exactly against :func:`reduced_flow_general`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .geometry import DomainError, as_space, coords, principal_ricci


class Classification(str, enum.Enum):
    STABLE_NODE = "stable node"
    SADDLE = "saddle"


@dataclass(frozen=True)
class FlowVector:
    """Time derivatives ``(f1, f2, f3)`` of ``(x1, x2, x3)``."""

    f1: object
    f2: object
    f3: object

    def __iter__(self) -> Iterator:
        return iter((self.f1, self.f2, self.f3))

    def as_array(self) -> np.ndarray:
        return np.array([float(self.f1), float(self.f2), float(self.f3)])


@dataclass(frozen=True)
class EquilibriumReport:
    """Linearization of the flow at the Einstein point ``(q, q, kappa*q)``.

    ``Es`` is a tuple of vectors spanning the stable eigenspace (one vector
    for n >= 4, two for n = 3); ``Eu`` is ``None`` when there is no unstable
    direction.
    """

    q: float
    eigenvalues: tuple
    Es: tuple
    Eu: Optional[tuple]
    Ec: tuple
    classification: Classification


@dataclass(frozen=True)
class PlanarReport:
    """Trace ``rho``, determinant ``delta`` and discriminant ``sigma`` of the
    planar linearization."""

    delta: float
    rho: float
    sigma: float
    classification: Classification


def reduced_flow_general(dims: Sequence[int], ricci: Sequence, x: Sequence) -> list:
    """Normalized Ricci flow for a diagonal metric with ``k`` modules.

    Parameters
    ----------
    dims : sequence of int
        Module dimensions ``d_i``.
    ricci : sequence
        Principal Ricci curvatures ``r_i``.
    x : sequence
        Positive metric parameters ``x_i``.

    Returns
    -------
    list
        ``-2 x_i (r_i - S/d)`` with ``S = sum d_i r_i`` and ``d = sum d_i``.
    """
    if not (len(dims) == len(ricci) == len(x)) or len(dims) == 0:
        raise DomainError("dims, ricci and x must have the same nonzero length")
    if any(not d > 0 for d in dims):
        raise DomainError("module dimensions must be positive")
    if any(not v > 0 for v in x):
        raise DomainError("metric parameters must be positive")
    s = sum(d * r for d, r in zip(dims, ricci))
    d = sum(dims)
    return [-2 * xi * (ri - s / d) for xi, ri in zip(x, ricci)]


def _num(n, a, b, c):
    return ((n - 1) * (c * c + b * b) - (3 * n - 5) * a * a
            + 2 * (n - 2) * (a * b + (n - 2) * c * a - (n - 1) * c * b))


def _num_grad(n, a, b, c):
    da = -2 * (3 * n - 5) * a + 2 * (n - 2) * (b + (n - 2) * c)
    db = 2 * (n - 1) * b + 2 * (n - 2) * (a - (n - 1) * c)
    dc = 2 * (n - 1) * c + 2 * (n - 2) * ((n - 2) * a - (n - 1) * b)
    return da, db, dc


def _num3(n, x1, x2, x3):
    d = x1 - x2
    return (n - 2) * d * d + (n - 2) * (x1 + x2) * x3 - (n - 1) * x3 * x3


def _scaled(n, x1, x2, x3):
    # x_i r_i from numerators in the plane coordinates; the products stay
    # positive wherever the p_k are, so no cancellation at large aspect
    p1, p2, p3 = -x1 + x2 + x3, x1 - x2 + x3, x1 + x2 - x3
    g1 = ((n - 3) * (p1 * p1 + p1 * p2 + p1 * p3) + (n - 1) * p2 * p3) / (8 * (n - 2) * x2 * x3)
    g2 = ((n - 3) * (p1 * p2 + p2 * p2 + p2 * p3) + (n - 1) * p1 * p3) / (8 * (n - 2) * x1 * x3)
    g3 = p1 * p2 / (4 * x1 * x2)
    return g1, g2, g3


def _field(n, x1, x2, x3):
    # f_i = -2 x_i r_i + (2/d) x_i S with x_i S = sum_j d_j (x_j r_j) x_i / x_j
    g1, g2, g3 = _scaled(n, x1, x2, x3)
    m, d = n - 2, 2 * n - 3
    f1 = -2 * g1 + 2 * (m * g1 + m * g2 * x1 / x2 + g3 * x1 / x3) / d
    f2 = -2 * g2 + 2 * (m * g1 * x2 / x1 + m * g2 + g3 * x2 / x3) / d
    f3 = -2 * g3 + 2 * (m * g1 * x3 / x1 + m * g2 * x3 / x2 + g3) / d
    return f1, f2, f3


def vector_field(sp, x) -> FlowVector:
    """The flow field at ``x``.

    Degree-0 homogeneous in ``x``, vanishes exactly on the Einstein ray and
    is tangent to the volume levels.
    """
    n = as_space(sp).n
    return FlowVector(*_field(n, *coords(x)))


def vector_field_composed(sp, x) -> FlowVector:
    """The flow field by direct composition of the curvature formulas."""
    sp = as_space(sp)
    r = principal_ricci(sp, x)
    return FlowVector(*reduced_flow_general(sp.dims, r, list(coords(x))))


def jacobian(sp, x) -> np.ndarray:
    """Analytic Jacobian ``J[i, j] = d f_i / d x_j``.

    Returns a float array, or an object array of exact values when the
    coordinates are :class:`~fractions.Fraction`.
    """
    n = as_space(sp).n
    x1, x2, x3 = coords(x)
    k = 2 * (n - 2) * (2 * n - 3)
    m = 2 * n - 3

    n1 = _num(n, x1, x2, x3)
    a1, b1, c1 = _num_grad(n, x1, x2, x3)
    w1 = k * x2 * x3
    row1 = [a1 / w1, (b1 - n1 / x2) / w1, (c1 - n1 / x3) / w1]

    n2 = _num(n, x2, x1, x3)
    a2, b2, c2 = _num_grad(n, x2, x1, x3)
    w2 = k * x1 * x3
    row2 = [(b2 - n2 / x1) / w2, a2 / w2, (c2 - n2 / x3) / w2]

    n3 = _num3(n, x1, x2, x3)
    d = x1 - x2
    g1 = 2 * (n - 2) * d + (n - 2) * x3
    g2 = -2 * (n - 2) * d + (n - 2) * x3
    g3 = (n - 2) * (x1 + x2) - 2 * (n - 1) * x3
    w3 = m * x1 * x2
    row3 = [(g1 - n3 / x1) / w3, (g2 - n3 / x2) / w3, g3 / w3]

    exact = all(isinstance(v, (Fraction, int)) for v in (x1, x2, x3)) and not all(
        isinstance(v, int) for v in (x1, x2, x3))
    return np.array([row1, row2, row3], dtype=object if exact else float)


def equilibrium_spectrum(sp, q) -> EquilibriumReport:
    """Eigen-data of the Jacobian at ``(q, q, kappa*q)``.

    Eigenvalues ``(n^2-5n+5)/((n-2)^2 q)``, ``-1/q`` and ``0``; the zero mode is
    the scaling direction ``(1, 1, kappa)``.
    """
    n = as_space(sp).n
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    m2 = (n - 2) ** 2
    lam1 = (n * n - 5 * n + 5) / (m2 * q)
    lam2 = -1 / q
    kappa = Fraction(2 * (n - 2), n - 1)
    ec = (1, 1, kappa)
    if n == 3:
        es = ((-1, 1, 0), (-1, 0, 1))
        return EquilibriumReport(q, (lam1, lam2, 0), es, None, ec, Classification.STABLE_NODE)
    es = ((1, 1, Fraction(-4 * m2, n - 1)),)
    return EquilibriumReport(q, (lam1, lam2, 0), es, (-1, 1, 0), ec, Classification.SADDLE)


def char_poly_at_equilibrium(sp, q) -> tuple:
    """Characteristic polynomial ``lambda^3 + b lambda^2 + c lambda`` of the
    Jacobian at the Einstein point.

    Returns
    -------
    tuple
        ``(b, c, 0)``: the coefficients of ``lambda^2``, ``lambda`` and ``1``.
    """
    n = as_space(sp).n
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    m2 = (n - 2) ** 2
    return (n - 1) / (q * m2), -(n * n - 5 * n + 5) / (q * q * m2), 0


def planar_field(sp, x1, x2) -> tuple:
    """The flow on the level ``Vol = 1`` written over ``(x1, x2)``.

    Returns ``(f1, f2)`` at ``(x1, x2, (x1*x2)**(2-n))``.
    """
    n = as_space(sp).n
    if not (x1 > 0 and x2 > 0):
        raise DomainError(f"x1, x2 must be positive, got {(x1, x2)}")
    x3 = (x1 * x2) ** (2 - n)
    f1, f2, _ = _field(n, x1, x2, x3)
    return f1, f2


def planar_equilibrium_data(sp, q) -> PlanarReport:
    """Closed-form trace, determinant and discriminant of the planar
    linearization at ``(q, q)``."""
    n = as_space(sp).n
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    m2 = (n - 2) ** 2
    delta = -(n * n - 5 * n + 5) / (m2 * q * q)
    rho = -(n - 1) / (m2 * q)
    sigma = rho * rho - 4 * delta
    cls = Classification.STABLE_NODE if n == 3 else Classification.SADDLE
    return PlanarReport(delta, rho, sigma, cls)


def planar_sigma_closed(sp, q):
    """``(2n-3)^2 (n-3)^2 / ((n-2)^4 q^2)``, equal to ``rho^2 - 4 delta``."""
    n = as_space(sp).n
    return (2 * n - 3) ** 2 * (n - 3) ** 2 / ((n - 2) ** 4 * q * q)


def plane_coordinates(x) -> tuple:
    """``(p1, p2, p3) = (-x1+x2+x3, x1-x2+x3, x1+x2-x3)``; ``pi = 0`` is the plane Pi_i."""
    x1, x2, x3 = coords(x, check=False)
    return -x1 + x2 + x3, x1 - x2 + x3, x1 + x2 - x3


def plane_rates(sp, x) -> tuple:
    """Time derivatives of the plane coordinates.

    Algebraically ``(-f1+f2+f3, f1-f2+f3, f1+f2-f3)``, evaluated from
    numerators expanded in ``p`` so that the value stays accurate when some
    ``pi`` is small (on or near the planes).
    """
    n = as_space(sp).n
    x1, x2, x3 = coords(x)
    p1, p2, p3 = plane_coordinates((x1, x2, x3))
    a = (n - 3) * (n - 2)
    b = n - 2
    c = 2 * n * n - 10 * n + 11
    e = n * (n - 2)
    s = 2 * (n - 2) ** 2
    w = 2 * n - 3
    v = 2 * (n * n - 5 * n + 5)
    q1 = (a * p1 * p1 * p1 - b * p1 * p1 * p2 + c * p1 * p1 * p3 - e * p1 * p2 * p2
          + s * p1 * p2 * p3 - w * p1 * p3 * p3 + w * p2 * p2 * p3 + w * p2 * p3 * p3)
    q2 = (a * p2 * p2 * p2 - b * p2 * p2 * p1 + c * p2 * p2 * p3 - e * p2 * p1 * p1
          + s * p1 * p2 * p3 - w * p2 * p3 * p3 + w * p1 * p1 * p3 + w * p1 * p3 * p3)
    q3 = (w * p1 * p1 * p2 - e * p1 * p1 * p3 + w * p1 * p2 * p2 - v * p1 * p2 * p3
          - b * p1 * p3 * p3 - e * p2 * p2 * p3 - b * p2 * p3 * p3)
    den = 4 * (n - 2) * (2 * n - 3) * x1 * x2 * x3
    return q1 / den, q2 / den, q3 / den
