"""Pure-Python float kernels for the reduced flow.

This module and ``_kernels.pyx`` implement the same functions with the same
signatures and the same floating-point operation order; ``_core`` picks one at
import. Keep the two files in lockstep.

The integrator state is redundant: the metric ``x = (x1, x2, x3)`` together
with the plane coordinates ``p = (-x1+x2+x3, x1-x2+x3, x1+x2-x3)``. Both halves
are advanced by the same Runge-Kutta weights and each is evaluated from its
own polynomial form, so a coordinate that is tiny relative to the others (the
collapse regimes of the flow) keeps full relative precision in whichever half
carries it.
"""
import math

IMPLEMENTATION = "python"

# Dormand-Prince 5(4) tableau
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0)
_A71, _A73, _A74, _A75, _A76 = (
    35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0,
    -1.0 / 40.0)

_SAFE = 0.9
_BETA = 0.04
_EXPO1 = 0.2 - _BETA * 0.75
_FACC1 = 5.0   # largest shrink, 1/0.2
_FACC2 = 0.1   # largest growth, 10x
_TINY = 1e-300
_EPS = 2.220446049250313e-16

# run_segment status codes
DONE, CROSSED, MAX_STEPS, GUARD, UNDERFLOW = 0, 1, 2, 3, 4


def ricci(n, x1, x2, x3):
    m = n - 2.0
    r1 = 0.5 / x1 - (x3 / (x1 * x2) + x2 / (x1 * x3) - x1 / (x2 * x3)) / (4.0 * m)
    r2 = 0.5 / x2 - (x3 / (x1 * x2) + x1 / (x2 * x3) - x2 / (x1 * x3)) / (4.0 * m)
    r3 = 0.5 / x3 - 0.25 * (x1 / (x2 * x3) + x2 / (x1 * x3) - x3 / (x1 * x2))
    return r1, r2, r3


def _num1(n, a, b, c):
    # numerator of f1 at (a, b, c); f2 uses (b, a, c)
    return ((n - 1.0) * (c * c + b * b) - (3.0 * n - 5.0) * a * a
            + 2.0 * (n - 2.0) * (a * b + (n - 2.0) * c * a - (n - 1.0) * c * b))


def field(n, x1, x2, x3):
    k = 2.0 * (n - 2.0) * (2.0 * n - 3.0)
    d = x1 - x2
    f3 = ((n - 2.0) * d * d + (n - 2.0) * (x1 + x2) * x3 - (n - 1.0) * x3 * x3) / (
        (2.0 * n - 3.0) * x1 * x2)
    return _num1(n, x1, x2, x3) / (k * x2 * x3), _num1(n, x2, x1, x3) / (k * x1 * x3), f3


def _plane_rates(n, p1, p2, p3, x1, x2, x3):
    # d/dt of the plane coordinates, numerators expanded in p
    a = (n - 3.0) * (n - 2.0) * 0.5
    b = (n - 2.0) * 0.5
    c = (2.0 * n * n - 10.0 * n + 11.0) * 0.5
    e = n * (n - 2.0) * 0.5
    s = (n - 2.0) * (n - 2.0)
    w = (2.0 * n - 3.0) * 0.5
    v = n * n - 5.0 * n + 5.0
    q1 = (a * p1 * p1 * p1 - b * p1 * p1 * p2 + c * p1 * p1 * p3 - e * p1 * p2 * p2
          + s * p1 * p2 * p3 - w * p1 * p3 * p3 + w * p2 * p2 * p3 + w * p2 * p3 * p3)
    q2 = (a * p2 * p2 * p2 - b * p2 * p2 * p1 + c * p2 * p2 * p3 - e * p2 * p1 * p1
          + s * p1 * p2 * p3 - w * p2 * p3 * p3 + w * p1 * p1 * p3 + w * p1 * p3 * p3)
    q3 = (w * p1 * p1 * p2 - e * p1 * p1 * p3 + w * p1 * p2 * p2 - v * p1 * p2 * p3
          - b * p1 * p3 * p3 - e * p2 * p2 * p3 - b * p2 * p3 * p3)
    den = 2.0 * (n - 2.0) * (2.0 * n - 3.0) * x1 * x2 * x3
    return q1 / den, q2 / den, q3 / den


def field6(n, y):
    f1, f2, f3 = field(n, y[0], y[1], y[2])
    g1, g2, g3 = _plane_rates(n, y[3], y[4], y[5], y[0], y[1], y[2])
    return [f1, f2, f3, g1, g2, g3]


def observable6(n, y):
    """min(x1*r1, x2*r2, x3*r3) from plane-coordinate numerators."""
    x1, x2, x3, p1, p2, p3 = y
    m = n - 2.0
    h3 = (n - 3.0) * 0.5
    h1 = (n - 1.0) * 0.5
    g1 = (h3 * (p1 * p1 + p1 * p2 + p1 * p3) + h1 * p2 * p3) / (4.0 * m * x2 * x3)
    g2 = (h3 * (p1 * p2 + p2 * p2 + p2 * p3) + h1 * p1 * p3) / (4.0 * m * x1 * x3)
    g3 = p1 * p2 / (4.0 * x1 * x2)
    return min(g1, g2, g3)


def observable(n, x1, x2, x3):
    return observable6(n, lift(x1, x2, x3))


def lift(x1, x2, x3):
    return [x1, x2, x3, -x1 + x2 + x3, x1 - x2 + x3, x1 + x2 - x3]


def rk_step(n, sign, y, k1, h):
    """One Dormand-Prince step of size ``h`` for the field scaled by ``sign``.

    ``k1`` is the (already scaled) slope at ``y``. Returns the 5th-order
    solution, the embedded error vector and the slope at the new point.
    """
    r = range(6)
    s = [y[i] + h * _A21 * k1[i] for i in r]
    k2 = [sign * v for v in field6(n, s)]
    s = [y[i] + h * (_A31 * k1[i] + _A32 * k2[i]) for i in r]
    k3 = [sign * v for v in field6(n, s)]
    s = [y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i]) for i in r]
    k4 = [sign * v for v in field6(n, s)]
    s = [y[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i]) for i in r]
    k5 = [sign * v for v in field6(n, s)]
    s = [y[i] + h * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i]
                     + _A65 * k5[i]) for i in r]
    k6 = [sign * v for v in field6(n, s)]
    ynew = [y[i] + h * (_A71 * k1[i] + _A73 * k3[i] + _A74 * k4[i] + _A75 * k5[i]
                        + _A76 * k6[i]) for i in r]
    k7 = [sign * v for v in field6(n, ynew)]
    err = [h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i]
                + _E7 * k7[i]) for i in r]
    return ynew, err, k7


def _err_norm(y, ynew, err, rtol, atol):
    s = 0.0
    for i in range(6):
        sk = atol + rtol * max(abs(y[i]), abs(ynew[i]))
        q = abs(err[i]) / sk
        if not q <= s:
            s = q
    return s


def initial_step(n, sign, y, rtol, atol, hmax):
    """Starting step size (Hairer, Norsett & Wanner, II.4)."""
    k = [sign * v for v in field6(n, y)]
    d0 = 0.0
    d1 = 0.0
    for i in range(6):
        sk = atol + rtol * abs(y[i])
        d0 += (y[i] / sk) ** 2
        d1 += (k[i] / sk) ** 2
    d0 = math.sqrt(d0 / 6.0)
    d1 = math.sqrt(d1 / 6.0)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, hmax)
    z = [y[i] + h0 * k[i] for i in range(6)]
    k2 = field6(n, z)
    d2 = 0.0
    for i in range(6):
        sk = atol + rtol * abs(y[i])
        d2 += ((sign * k2[i] - k[i]) / sk) ** 2
    d2 = math.sqrt(d2 / 6.0) / h0
    dm = max(d1, d2)
    if not dm > 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / dm) ** 0.2
    return min(100.0 * h0, h1, hmax)


def _admissible(y, max_aspect):
    x1, x2, x3 = y[0], y[1], y[2]
    if not (x1 > _TINY and x2 > _TINY and x3 > _TINY):
        return False
    if not (math.isfinite(x1) and math.isfinite(x2) and math.isfinite(x3)):
        return False
    return max(x1, x2, x3) <= max_aspect * min(x1, x2, x3)


def run_segment(n, sign, t, y, h, t_end, rtol, atol, max_steps, max_aspect):
    """Advance with adaptive steps until ``t_end``, a sign change of the
    observable, ``max_steps`` attempted steps, a guard trip or step underflow.

    The guard trips when an accepted point has a nonpositive or non-finite
    coordinate, or max(x)/min(x) above ``max_aspect``. Returns
    ``(status, ts, ys, h_next, h_last, steps)``: ``ts``/``ys`` hold the start
    point and every accepted point. On ``CROSSED`` and ``GUARD`` the offending
    step of size ``h_last`` starts at the last entry and is not appended.
    """
    y = list(y)
    ts = [t]
    ys = [y]
    inside = observable6(n, y) > 0.0
    k = [sign * v for v in field6(n, y)]
    errold = 1e-4
    rejected = False
    steps = 0
    status = DONE
    h_last = h
    while True:
        if t >= t_end:
            status = DONE
            break
        if steps >= max_steps:
            status = MAX_STEPS
            break
        if h < 10.0 * _EPS * max(abs(t), _TINY):
            status = UNDERFLOW
            break
        last = False
        if t + h >= t_end:
            h = t_end - t
            last = True
        steps += 1
        ynew, err, knew = rk_step(n, sign, y, k, h)
        e = _err_norm(y, ynew, err, rtol, atol)
        if e <= 1.0:
            fac11 = e ** _EXPO1
            fac = fac11 / errold ** _BETA
            fac = max(_FACC2, min(_FACC1, fac / _SAFE))
            hnew = h / fac
            h_last = h
            if not _admissible(ynew, max_aspect):
                status = GUARD
                break
            if (observable6(n, ynew) > 0.0) != inside:
                status = CROSSED
                break
            errold = max(e, 1e-4)
            if rejected:
                hnew = min(hnew, h)
            rejected = False
            t = t_end if last else t + h
            y = ynew
            k = knew
            ts.append(t)
            ys.append(y)
            h = hnew
        else:
            if e != e:  # NaN: a stage left the domain
                hnew = h / _FACC1
            else:
                hnew = h / min(_FACC1, e ** _EXPO1 / _SAFE)
            rejected = True
            h = hnew
    return status, ts, ys, h, h_last, steps
