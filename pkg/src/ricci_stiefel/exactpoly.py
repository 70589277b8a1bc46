"""Exact rational polynomials, Sturm chains and the positivity certificate
for the inward flux across the cone pieces.

Across Gamma_1 the inward flux has the sign of ``F - G`` with ``F, G >= 0``,
hence the sign of ``p(nu) = F^2 - G^2``. Positivity of ``p`` on ``[0, 1]`` is
certified by Sturm's theorem in exact rational arithmetic.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


class RationalPoly:
    """Univariate polynomial with :class:`~fractions.Fraction` coefficients.

    Parameters
    ----------
    coeffs : iterable of int or Fraction
        Coefficients in ascending degree. Trailing zeros are stripped.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rational]):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_roots(cls, roots: Sequence[Rational], lead: Rational = 1) -> "RationalPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: Rational) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPoly({[str(c) for c in self.coeffs]})"

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(-c for c in self.coeffs)

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        a, b = self.coeffs, other.coeffs
        m = max(len(a), len(b))
        return RationalPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                            for i in range(m))

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __mul__(self, other) -> "RationalPoly":
        if not isinstance(other, RationalPoly):
            return RationalPoly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return RationalPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "RationalPoly":
        return RationalPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def divmod(self, other: "RationalPoly") -> tuple["RationalPoly", "RationalPoly"]:
        """Exact quotient and remainder."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RationalPoly([]), RationalPoly(rem)
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lc
        for k in range(dq, -1, -1):
            q = rem[k + other.degree] / lead
            quot[k] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[k + j] -= q * c
        return RationalPoly(quot), RationalPoly(rem[: other.degree])

    def __mod__(self, other: "RationalPoly") -> "RationalPoly":
        return self.divmod(other)[1]

    def reversed(self) -> "RationalPoly":
        """``x**deg * p(1/x)``."""
        return RationalPoly(reversed(self.coeffs))


@dataclass(frozen=True)
class SturmChain:
    polys: tuple

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def signs(self, x: Rational) -> tuple:
        """Signs (-1, 0, 1) of every chain entry at ``x``."""
        out = []
        for p in self.polys:
            v = p(x)
            out.append((v > 0) - (v < 0))
        return tuple(out)

    def sign_changes(self, x: Rational) -> int:
        """Number of sign changes at ``x``, zeros skipped."""
        s = [v for v in self.signs(x) if v != 0]
        return sum(1 for a, b in zip(s, s[1:]) if a != b)

    @property
    def squarefree(self) -> bool:
        return self.polys[-1].degree == 0


def sturm_chain(p: RationalPoly) -> SturmChain:
    """``p0 = p``, ``p1 = p'``, ``p_{i+1} = -rem(p_{i-1}, p_i)`` until the
    remainder vanishes.

    For squarefree ``p`` the chain ends at a nonzero constant; otherwise it
    ends at ``gcd(p, p')`` of positive degree.
    """
    if p.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    chain = [p]
    q = p.derivative()
    while not q.is_zero():
        chain.append(q)
        q = -(chain[-2] % chain[-1])
    return SturmChain(tuple(chain))


class EndpointRootError(ValueError):
    """An interval endpoint is a root of the chain's first polynomial."""


def count_roots(chain: SturmChain, a: Rational, b: Rational) -> int:
    """Distinct real roots of ``chain.polys[0]`` in ``(a, b]``, as ``V(a) - V(b)``.

    Raises
    ------
    EndpointRootError
        If ``p(a) = 0`` or ``p(b) = 0``.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    p = chain.polys[0]
    for e in (a, b):
        if p(e) == 0:
            raise EndpointRootError(f"endpoint {e} is a root")
    return chain.sign_changes(a) - chain.sign_changes(b)


def p_nu(n: int) -> RationalPoly:
    """The palindromic quartic ``F^2 - G^2`` in ``nu`` for given ``n``."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    c0 = 4 * (n - 2) ** 3
    c1 = -2 * (n - 2) * (5 * n ** 3 - 31 * n ** 2 + 67 * n - 49)
    c2 = (n ** 6 - 6 * n ** 5 - 5 * n ** 4 + 136 * n ** 3 - 453 * n ** 2 + 630 * n - 327)
    return RationalPoly([c0, c1, c2, c1, c0])


def _check_nu(n: int, nu) -> None:
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if not 0 < nu <= Fraction(1, 2 * n - 4):
        raise ValueError(f"nu must lie in (0, 1/(2n-4)], got {nu}")


def f_value(n: int, nu: Rational) -> Fraction:
    """``F = -(n-1)(n-2-nu)((n-2)nu - 1)``."""
    _check_nu(n, nu)
    nu = Fraction(nu)
    return -(n - 1) * (n - 2 - nu) * ((n - 2) * nu - 1)


def g_squared(n: int, nu: Rational) -> Fraction:
    """``G^2 = (n-2)^2 (n-3)^2 (nu+1)^2 (nu^2 - 2(n-2)nu + 1)``, exact."""
    _check_nu(n, nu)
    nu = Fraction(nu)
    return ((n - 2) * (n - 3) * (nu + 1)) ** 2 * (nu * nu - 2 * (n - 2) * nu + 1)


def fg_values(n: int, nu: Rational) -> tuple[float, float]:
    """``(F, G)`` as floats; ``G`` carries the square root."""
    f = f_value(n, nu)
    nu = Fraction(nu)
    g = (n - 2) * (n - 3) * (nu + 1) * math.sqrt(nu * nu - 2 * (n - 2) * nu + 1)
    return float(f), float(g)


def determinant(rows: Sequence[Sequence[Rational]]) -> Fraction:
    """Exact determinant by Gaussian elimination over the rationals."""
    a = [[Fraction(v) for v in r] for r in rows]
    m = len(a)
    det = Fraction(1)
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, m):
            f = a[r][col] * inv
            if f:
                for k in range(col, m):
                    a[r][k] -= f * a[col][k]
    return det


def resultant(p: RationalPoly, q: RationalPoly) -> Fraction:
    """Resultant via the Sylvester determinant."""
    m, k = p.degree, q.degree
    if m < 0 or k < 0:
        return Fraction(0)
    size = m + k
    pd = list(reversed(p.coeffs))
    qd = list(reversed(q.coeffs))
    rows = []
    for i in range(k):
        rows.append([0] * i + pd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qd + [0] * (size - k - 1 - i))
    return determinant(rows)


def discriminant(p: RationalPoly) -> Fraction:
    """``(-1)^(d(d-1)/2) Res(p, p') / lc(p)``."""
    d = p.degree
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


def discriminant_closed_form(n: int) -> int:
    """``(n-2)^4 (n-3)^9 (n-1)^10 (4n^2-13n+11)^2 [8 + 20(n-3) + 12(n-3)^2 + (n-3)^3]``."""
    m = n - 3
    return ((n - 2) ** 4 * m ** 9 * (n - 1) ** 10 * (4 * n * n - 13 * n + 11) ** 2
            * (8 + 20 * m + 12 * m * m + m ** 3))


@dataclass(frozen=True)
class DiscriminantReport:
    n: int
    closed_form: int
    resultant: Fraction

    @property
    def ratio(self):
        """``resultant / closed_form``, or ``None`` when both vanish."""
        if self.closed_form == 0:
            return None
        return self.resultant / self.closed_form


def discriminant_p(n: int) -> DiscriminantReport:
    """The discriminant of :func:`p_nu` by the closed form and by the
    resultant route."""
    return DiscriminantReport(n, discriminant_closed_form(n), discriminant(p_nu(n)))


def alpha_constants(n: int) -> tuple:
    """``(alpha1, ..., alpha6)`` as exact integers."""
    m = n - 3
    a1 = 5 * m ** 3 + 14 * m ** 2 + 16 * m + 8
    a2 = m ** 3 + 10 * m ** 2 + 20 * m + 12
    a3 = 8 * n ** 4 - 83 * n ** 3 + 285 * n ** 2 - 413 * n + 219
    a4 = (n ** 9 - 5 * n ** 8 - 24 * n ** 7 + 256 * n ** 6 - 802 * n ** 5 + 930 * n ** 4
          + 692 * n ** 3 - 3268 * n ** 2 + 3589 * n - 1401)
    a5 = m ** 3 + 12 * m ** 2 + 20 * m + 8
    a6 = 24 + 60 * m + 63 * m ** 2 + 35 * m ** 3 + 10 * m ** 4 + m ** 5
    return a1, a2, a3, a4, a5, a6


class Verdict(str, enum.Enum):
    POSITIVE_ON_INTERVAL = "PositiveOnInterval"
    DEGENERATE = "Degenerate"
    FAILED = "Failed"


@dataclass(frozen=True)
class PositivityReport:
    n: int
    sign_changes_at_0: int
    sign_changes_at_1: int
    roots_in_unit_interval: int
    discriminant_nonzero: bool
    verdict: Verdict

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "sign_changes_at_0": self.sign_changes_at_0,
            "sign_changes_at_1": self.sign_changes_at_1,
            "roots_in_unit_interval": self.roots_in_unit_interval,
            "discriminant_nonzero": self.discriminant_nonzero,
            "verdict": self.verdict.value,
        }


def verify_positivity(n: int) -> PositivityReport:
    """Certify ``p(nu) > 0`` on ``[0, 1]`` (which contains ``(0, 1/(2n-4)]``).

    For n >= 4 the quartic is squarefree, ``p(0) > 0``, ``p(1) > 0`` and the
    Sturm counts agree at both endpoints, so there is no root in ``[0, 1]``.
    For n = 3 the quartic is ``4(nu-1)^4``: reported as ``Degenerate``, with
    positivity on ``(0, 1/2]`` read off the factorization.
    """
    p = p_nu(n)
    disc_nonzero = discriminant(p) != 0
    chain = sturm_chain(p)
    v0 = chain.sign_changes(0)
    v1 = chain.sign_changes(1)
    if n == 3:
        ok = p == RationalPoly.from_roots([1, 1, 1, 1], lead=4)
        roots = 1  # the quadruple root nu = 1, outside (0, 1/2]
        return PositivityReport(n, v0, v1, roots, disc_nonzero,
                                Verdict.DEGENERATE if ok else Verdict.FAILED)
    roots = count_roots(chain, 0, 1)
    ok = disc_nonzero and chain.squarefree and roots == 0 and p(0) > 0
    return PositivityReport(n, v0, v1, roots, disc_nonzero,
                            Verdict.POSITIVE_ON_INTERVAL if ok else Verdict.FAILED)
