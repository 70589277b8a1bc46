# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float kernels for the reduced flow.

Mirror of ``_fallback``: same functions, same signatures, same floating-point
operation order. See that module for the description of the redundant
``(x, p)`` state.
"""
from libc.math cimport sqrt, fabs, pow, isfinite

IMPLEMENTATION = "cython"

cdef double _A21 = 1.0 / 5.0
cdef double _A31 = 3.0 / 40.0
cdef double _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0
cdef double _A42 = -56.0 / 15.0
cdef double _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0
cdef double _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0
cdef double _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0
cdef double _A62 = -355.0 / 33.0
cdef double _A63 = 46732.0 / 5247.0
cdef double _A64 = 49.0 / 176.0
cdef double _A65 = -5103.0 / 18656.0
cdef double _A71 = 35.0 / 384.0
cdef double _A73 = 500.0 / 1113.0
cdef double _A74 = 125.0 / 192.0
cdef double _A75 = -2187.0 / 6784.0
cdef double _A76 = 11.0 / 84.0
cdef double _E1 = 71.0 / 57600.0
cdef double _E3 = -71.0 / 16695.0
cdef double _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0
cdef double _E6 = 22.0 / 525.0
cdef double _E7 = -1.0 / 40.0

cdef double _SAFE = 0.9
cdef double _BETA = 0.04
cdef double _EXPO1 = 0.2 - 0.04 * 0.75
cdef double _FACC1 = 5.0
cdef double _FACC2 = 0.1
cdef double _TINY = 1e-300
cdef double _EPS = 2.220446049250313e-16

DONE, CROSSED, MAX_STEPS, GUARD, UNDERFLOW = 0, 1, 2, 3, 4


cdef inline double _num1(double n, double a, double b, double c) nogil:
    return ((n - 1.0) * (c * c + b * b) - (3.0 * n - 5.0) * a * a
            + 2.0 * (n - 2.0) * (a * b + (n - 2.0) * c * a - (n - 1.0) * c * b))


cdef void _field6(double n, const double *y, double *out) nogil:
    cdef double x1 = y[0], x2 = y[1], x3 = y[2]
    cdef double p1 = y[3], p2 = y[4], p3 = y[5]
    cdef double k = 2.0 * (n - 2.0) * (2.0 * n - 3.0)
    cdef double d = x1 - x2
    out[0] = _num1(n, x1, x2, x3) / (k * x2 * x3)
    out[1] = _num1(n, x2, x1, x3) / (k * x1 * x3)
    out[2] = ((n - 2.0) * d * d + (n - 2.0) * (x1 + x2) * x3 - (n - 1.0) * x3 * x3) / (
        (2.0 * n - 3.0) * x1 * x2)
    cdef double a = (n - 3.0) * (n - 2.0) * 0.5
    cdef double b = (n - 2.0) * 0.5
    cdef double c = (2.0 * n * n - 10.0 * n + 11.0) * 0.5
    cdef double e = n * (n - 2.0) * 0.5
    cdef double s = (n - 2.0) * (n - 2.0)
    cdef double w = (2.0 * n - 3.0) * 0.5
    cdef double v = n * n - 5.0 * n + 5.0
    cdef double q1 = (a * p1 * p1 * p1 - b * p1 * p1 * p2 + c * p1 * p1 * p3 - e * p1 * p2 * p2
                      + s * p1 * p2 * p3 - w * p1 * p3 * p3 + w * p2 * p2 * p3 + w * p2 * p3 * p3)
    cdef double q2 = (a * p2 * p2 * p2 - b * p2 * p2 * p1 + c * p2 * p2 * p3 - e * p2 * p1 * p1
                      + s * p1 * p2 * p3 - w * p2 * p3 * p3 + w * p1 * p1 * p3 + w * p1 * p3 * p3)
    cdef double q3 = (w * p1 * p1 * p2 - e * p1 * p1 * p3 + w * p1 * p2 * p2 - v * p1 * p2 * p3
                      - b * p1 * p3 * p3 - e * p2 * p2 * p3 - b * p2 * p3 * p3)
    cdef double den = 2.0 * (n - 2.0) * (2.0 * n - 3.0) * x1 * x2 * x3
    out[3] = q1 / den
    out[4] = q2 / den
    out[5] = q3 / den


cdef double _observable6(double n, const double *y) nogil:
    cdef double x1 = y[0], x2 = y[1], x3 = y[2]
    cdef double p1 = y[3], p2 = y[4], p3 = y[5]
    cdef double m = n - 2.0
    cdef double h3 = (n - 3.0) * 0.5
    cdef double h1 = (n - 1.0) * 0.5
    cdef double g1 = (h3 * (p1 * p1 + p1 * p2 + p1 * p3) + h1 * p2 * p3) / (4.0 * m * x2 * x3)
    cdef double g2 = (h3 * (p1 * p2 + p2 * p2 + p2 * p3) + h1 * p1 * p3) / (4.0 * m * x1 * x3)
    cdef double g3 = p1 * p2 / (4.0 * x1 * x2)
    cdef double g = g1
    if g2 < g:
        g = g2
    if g3 < g:
        g = g3
    return g


cdef void _rk_step(double n, double sign, const double *y, const double *k1, double h,
                   double *ynew, double *err, double *k7) nogil:
    cdef double s[6]
    cdef double k2[6]
    cdef double k3[6]
    cdef double k4[6]
    cdef double k5[6]
    cdef double k6[6]
    cdef int i
    for i in range(6):
        s[i] = y[i] + h * _A21 * k1[i]
    _field6(n, s, k2)
    for i in range(6):
        k2[i] = sign * k2[i]
        s[i] = y[i] + h * (_A31 * k1[i] + _A32 * k2[i])
    _field6(n, s, k3)
    for i in range(6):
        k3[i] = sign * k3[i]
        s[i] = y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
    _field6(n, s, k4)
    for i in range(6):
        k4[i] = sign * k4[i]
        s[i] = y[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i])
    _field6(n, s, k5)
    for i in range(6):
        k5[i] = sign * k5[i]
        s[i] = y[i] + h * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i]
                           + _A65 * k5[i])
    _field6(n, s, k6)
    for i in range(6):
        k6[i] = sign * k6[i]
        ynew[i] = y[i] + h * (_A71 * k1[i] + _A73 * k3[i] + _A74 * k4[i] + _A75 * k5[i]
                              + _A76 * k6[i])
    _field6(n, ynew, k7)
    for i in range(6):
        k7[i] = sign * k7[i]
        err[i] = h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i]
                      + _E7 * k7[i])


cdef double _err_norm(const double *y, const double *ynew, const double *err,
                      double rtol, double atol) nogil:
    cdef double s = 0.0, sk, q, a, b
    cdef int i
    for i in range(6):
        a = fabs(y[i])
        b = fabs(ynew[i])
        sk = atol + rtol * (a if a > b else b)
        q = fabs(err[i]) / sk
        if not q <= s:
            s = q
    return s


cdef bint _admissible(const double *y, double max_aspect) nogil:
    cdef double x1 = y[0], x2 = y[1], x3 = y[2]
    if not (x1 > _TINY and x2 > _TINY and x3 > _TINY):
        return False
    if not (isfinite(x1) and isfinite(x2) and isfinite(x3)):
        return False
    cdef double hi = x1, lo = x1
    if x2 > hi:
        hi = x2
    if x3 > hi:
        hi = x3
    if x2 < lo:
        lo = x2
    if x3 < lo:
        lo = x3
    return hi <= max_aspect * lo


cdef inline void _load(object seq, double *out):
    cdef int i
    for i in range(6):
        out[i] = seq[i]


cdef inline list _dump(const double *a):
    return [a[0], a[1], a[2], a[3], a[4], a[5]]


def ricci(double n, double x1, double x2, double x3):
    cdef double m = n - 2.0
    cdef double r1 = 0.5 / x1 - (x3 / (x1 * x2) + x2 / (x1 * x3) - x1 / (x2 * x3)) / (4.0 * m)
    cdef double r2 = 0.5 / x2 - (x3 / (x1 * x2) + x1 / (x2 * x3) - x2 / (x1 * x3)) / (4.0 * m)
    cdef double r3 = 0.5 / x3 - 0.25 * (x1 / (x2 * x3) + x2 / (x1 * x3) - x3 / (x1 * x2))
    return r1, r2, r3


def field(double n, double x1, double x2, double x3):
    cdef double y[6]
    cdef double out[6]
    y[0] = x1
    y[1] = x2
    y[2] = x3
    y[3] = -x1 + x2 + x3
    y[4] = x1 - x2 + x3
    y[5] = x1 + x2 - x3
    _field6(n, y, out)
    return out[0], out[1], out[2]


def lift(double x1, double x2, double x3):
    return [x1, x2, x3, -x1 + x2 + x3, x1 - x2 + x3, x1 + x2 - x3]


def field6(double n, y):
    cdef double a[6]
    cdef double out[6]
    _load(y, a)
    _field6(n, a, out)
    return _dump(out)


def observable6(double n, y):
    """min(x1*r1, x2*r2, x3*r3) from plane-coordinate numerators."""
    cdef double a[6]
    _load(y, a)
    return _observable6(n, a)


def observable(double n, double x1, double x2, double x3):
    cdef double a[6]
    a[0] = x1
    a[1] = x2
    a[2] = x3
    a[3] = -x1 + x2 + x3
    a[4] = x1 - x2 + x3
    a[5] = x1 + x2 - x3
    return _observable6(n, a)


def rk_step(double n, double sign, y, k1, double h):
    """One Dormand-Prince step; see the pure-Python version."""
    cdef double a[6]
    cdef double k[6]
    cdef double ynew[6]
    cdef double err[6]
    cdef double k7[6]
    _load(y, a)
    _load(k1, k)
    _rk_step(n, sign, a, k, h, ynew, err, k7)
    return _dump(ynew), _dump(err), _dump(k7)


def initial_step(double n, double sign, y, double rtol, double atol, double hmax):
    """Starting step size (Hairer, Norsett & Wanner, II.4)."""
    cdef double a[6]
    cdef double k[6]
    cdef double z[6]
    cdef double k2[6]
    cdef double d0 = 0.0, d1 = 0.0, d2 = 0.0, sk, h0, h1, dm
    cdef int i
    _load(y, a)
    _field6(n, a, k)
    for i in range(6):
        k[i] = sign * k[i]
        sk = atol + rtol * fabs(a[i])
        d0 += (a[i] / sk) ** 2
        d1 += (k[i] / sk) ** 2
    d0 = sqrt(d0 / 6.0)
    d1 = sqrt(d1 / 6.0)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, hmax)
    for i in range(6):
        z[i] = a[i] + h0 * k[i]
    _field6(n, z, k2)
    for i in range(6):
        sk = atol + rtol * fabs(a[i])
        d2 += ((sign * k2[i] - k[i]) / sk) ** 2
    d2 = sqrt(d2 / 6.0) / h0
    dm = max(d1, d2)
    if not dm > 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / dm) ** 0.2
    return min(100.0 * h0, h1, hmax)


def run_segment(double n, double sign, double t, y, double h, double t_end, double rtol,
                double atol, long max_steps, double max_aspect):
    """Adaptive stepping until ``t_end``, an observable sign change,
    ``max_steps``, a guard trip or step underflow; see the pure-Python
    version for the return contract."""
    cdef double cur[6]
    cdef double k[6]
    cdef double ynew[6]
    cdef double err[6]
    cdef double knew[6]
    cdef double e, fac, hnew, h_last = h, errold = 1e-4
    cdef bint inside, rejected = False, last
    cdef long steps = 0
    cdef int status = DONE, i
    _load(y, cur)
    ts = [t]
    ys = [_dump(cur)]
    inside = _observable6(n, cur) > 0.0
    _field6(n, cur, k)
    for i in range(6):
        k[i] = sign * k[i]
    while True:
        if t >= t_end:
            status = DONE
            break
        if steps >= max_steps:
            status = MAX_STEPS
            break
        if h < 10.0 * _EPS * max(fabs(t), _TINY):
            status = UNDERFLOW
            break
        last = False
        if t + h >= t_end:
            h = t_end - t
            last = True
        steps += 1
        _rk_step(n, sign, cur, k, h, ynew, err, knew)
        e = _err_norm(cur, ynew, err, rtol, atol)
        if e <= 1.0:
            fac = pow(e, _EXPO1) / pow(errold, _BETA)
            fac = max(_FACC2, min(_FACC1, fac / _SAFE))
            hnew = h / fac
            h_last = h
            if not _admissible(ynew, max_aspect):
                status = GUARD
                break
            if (_observable6(n, ynew) > 0.0) != inside:
                status = CROSSED
                break
            errold = max(e, 1e-4)
            if rejected:
                hnew = min(hnew, h)
            rejected = False
            t = t_end if last else t + h
            for i in range(6):
                cur[i] = ynew[i]
                k[i] = knew[i]
            ts.append(t)
            ys.append(_dump(cur))
            h = hnew
        else:
            if e != e:
                hnew = h / _FACC1
            else:
                hnew = h / min(_FACC1, pow(e, _EXPO1) / _SAFE)
            rejected = True
            h = hnew
    return status, ts, ys, h, h_last, steps
