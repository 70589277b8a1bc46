"""Curvature of invariant metrics on SO(n)/SO(n-2).

An invariant metric is diagonal with respect to the isotropy decomposition
into modules of dimensions ``n-2``, ``n-2`` and ``1`` and is described by three
positive numbers ``(x1, x2, x3)``. Every function here works with plain
floats, with :class:`fractions.Fraction` (results are then exact) and
elementwise with numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

Number = Union[int, float, Fraction]


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


@dataclass(frozen=True)
class SpaceParams:
    """The space SO(n)/SO(n-2) and its module dimensions.

    Parameters
    ----------
    n : int
        Dimension parameter, ``n >= 3``.
    """

    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise DomainError(f"n must be an integer, got {self.n!r}")
        if self.n < 3:
            raise DomainError(f"n must be >= 3, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def d1(self) -> int:
        return self.n - 2

    @property
    def d2(self) -> int:
        return self.n - 2

    @property
    def d3(self) -> int:
        return 1

    @property
    def d(self) -> int:
        return 2 * self.n - 3

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.d1, self.d2, self.d3)


@dataclass(frozen=True)
class MetricPoint:
    """A point ``(x1, x2, x3)`` of the open positive octant."""

    x1: Number
    x2: Number
    x3: Number

    def __post_init__(self) -> None:
        for v in (self.x1, self.x2, self.x3):
            if not v > 0:
                raise DomainError(f"metric parameters must be positive, got {tuple(self)}")

    def __iter__(self) -> Iterator[Number]:
        return iter((self.x1, self.x2, self.x3))

    def as_tuple(self) -> tuple:
        return (self.x1, self.x2, self.x3)

    def as_array(self) -> np.ndarray:
        return np.array([float(self.x1), float(self.x2), float(self.x3)])


@dataclass(frozen=True)
class CurvatureData:
    """Principal Ricci curvatures, scalar curvature and volume at a point."""

    r1: Number
    r2: Number
    r3: Number
    S: Number
    Vol: Number


def as_space(sp) -> SpaceParams:
    """Accept a :class:`SpaceParams` or a bare integer ``n``."""
    return sp if isinstance(sp, SpaceParams) else SpaceParams(sp)


def coords(x, check: bool = True):
    """Unpack a point given as :class:`MetricPoint`, a 3-sequence or a
    ``(3, ...)`` array, validating positivity."""
    if isinstance(x, MetricPoint):
        return x.x1, x.x2, x.x3
    if isinstance(x, np.ndarray):
        if x.shape[0] != 3:
            raise DomainError(f"expected leading dimension 3, got shape {x.shape}")
        x1, x2, x3 = x[0], x[1], x[2]
        if check and not (np.all(x1 > 0) and np.all(x2 > 0) and np.all(x3 > 0)):
            raise DomainError("metric parameters must be positive")
        return x1, x2, x3
    try:
        x1, x2, x3 = x
    except (TypeError, ValueError):
        raise DomainError(f"expected three metric parameters, got {x!r}") from None
    if check and not (x1 > 0 and x2 > 0 and x3 > 0):
        raise DomainError(f"metric parameters must be positive, got {(x1, x2, x3)}")
    return x1, x2, x3


def principal_ricci(sp, x):
    """Principal Ricci curvatures ``(r1, r2, r3)``.

    Parameters
    ----------
    sp : SpaceParams or int
    x : MetricPoint, 3-sequence or array of shape (3, ...)

    Returns
    -------
    tuple
        ``(r1, r2, r3)``, of the same numeric kind as ``x``.

    Raises
    ------
    DomainError
        If some coordinate is not positive.
    """
    n = as_space(sp).n
    x1, x2, x3 = coords(x)
    m = 4 * (n - 2)
    r1 = 1 / (2 * x1) - (x3 / (x1 * x2) + x2 / (x1 * x3) - x1 / (x2 * x3)) / m
    r2 = 1 / (2 * x2) - (x3 / (x1 * x2) + x1 / (x2 * x3) - x2 / (x1 * x3)) / m
    r3 = 1 / (2 * x3) - (x1 / (x2 * x3) + x2 / (x1 * x3) - x3 / (x1 * x2)) / 4
    return r1, r2, r3


def scalar_curvature(sp, x):
    """Scalar curvature, the dimension-weighted sum of the principal Ricci
    curvatures, from its own closed form."""
    n = as_space(sp).n
    x1, x2, x3 = coords(x)
    return ((n - 2) * (1 / x1 + 1 / x2) / 2 + 1 / (2 * x3)
            - (x1 / (x2 * x3) + x2 / (x1 * x3) + x3 / (x1 * x2)) / 4)


def volume(sp, x):
    """Volume functional ``x1**(n-2) * x2**(n-2) * x3``."""
    n = as_space(sp).n
    x1, x2, x3 = coords(x)
    return x1 ** (n - 2) * x2 ** (n - 2) * x3


def curvature(sp, x) -> CurvatureData:
    """All curvature data at ``x``; ``S`` is the weighted sum of the ``ri``."""
    sp = as_space(sp)
    r1, r2, r3 = principal_ricci(sp, x)
    s = sp.d1 * r1 + sp.d2 * r2 + r3
    return CurvatureData(r1, r2, r3, s, volume(sp, x))


def einstein_point(sp, c=1.0):
    """The invariant Einstein metric on the volume level ``c``.

    Returns
    -------
    kappa : Fraction
        ``2(n-2)/(n-1)``, the ratio ``x3/x1`` on the Einstein ray.
    q0 : float
        ``(c/kappa)**(1/(2n-3))``.
    x0 : MetricPoint
        ``(q0, q0, kappa*q0)``, with volume ``c``.
    """
    sp = as_space(sp)
    if not c > 0:
        raise DomainError(f"c must be positive, got {c}")
    kappa = Fraction(2 * (sp.n - 2), sp.n - 1)
    q0 = (float(c) / float(kappa)) ** (1.0 / sp.d)
    return kappa, q0, MetricPoint(q0, q0, float(kappa) * q0)


def scal_conic_residual(sp, x):
    """The conic ``x3**2 - (2n-4)(x1+x2)x3 + (x1-x2)**2``.

    It equals ``-4*x1*x2*x3*S``, so its zero set is the cone ``S = 0``.
    """
    n = as_space(sp).n
    x1, x2, x3 = coords(x)
    return x3 * x3 - (2 * n - 4) * (x1 + x2) * x3 + (x1 - x2) ** 2


def ricci_grid(sp, x: np.ndarray) -> np.ndarray:
    """Vectorized principal Ricci curvatures for ``x`` of shape ``(3, ...)``.

    Returns an array of the same shape holding ``(r1, r2, r3)``.
    """
    x = np.asarray(x, dtype=float)
    return np.stack(principal_ricci(sp, x))
