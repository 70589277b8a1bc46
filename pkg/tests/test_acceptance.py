"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (printed in the terminal summary) with
the measured quantities, then asserts the criterion exactly as stated.
Tolerances and runtime bounds are fixed constants below.
"""
import time
from fractions import Fraction

import numpy as np

from conftest import record
from ricci_stiefel.exactpoly import Verdict, discriminant_p, verify_positivity
from ricci_stiefel.flow import (equilibrium_spectrum, jacobian, planar_equilibrium_data,
                                planar_field, plane_rates, vector_field)
from ricci_stiefel.geometry import (einstein_point, principal_ricci, scal_conic_residual,
                                    scalar_curvature)
from ricci_stiefel.integrate import IntegratorConfig, run_batch, trace_separatrix
from ricci_stiefel.regions import SurfaceId, inward_flux, tangency_residual

EQUILIBRIUM_TOL = 1e-12
SPECTRUM_RTOL = 1e-9
PLANE_FLUX_RTOL = 1e-12
DRIFT_TOL = 1e-8
IDENTITY_RTOL = 1e-12
SEPARATRIX_DIAG_TOL = 1e-6
SEPARATRIX_I3_TOL = 1e-4
PLANAR_RTOL = 1e-8
TANGENCY_TOL = 1e-10
WITNESS_MIN = 1e-3

FLOW_SEED = 7
POINT_BOX = (1e-2, 1e2)


def _points(rng, k):
    lo, hi = np.log(POINT_BOX[0]), np.log(POINT_BOX[1])
    return np.exp(rng.uniform(lo, hi, (3, k)))


def test_criterion_1_equilibrium_exactness():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(3, 13):
        kappa = einstein_point(n, 1.0)[0]
        for c in (1.0, float(kappa)):
            _, _, x0 = einstein_point(n, c)
            worst = max(worst, float(np.max(np.abs(vector_field(n, x0).as_array()))))
    elapsed = time.perf_counter() - t0
    ok = worst < EQUILIBRIUM_TOL and elapsed < 1.0
    record(1, "Einstein point is a rest point", ok,
           f"max |f(x0)| = {worst:.2e} over n=3..12, c in {{1, kappa}}; {elapsed:.3f}s")
    assert ok


def test_criterion_2_spectrum():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(3, 13):
        _, q, x0 = einstein_point(n, 1.0)
        want = sorted([(n * n - 5 * n + 5) / ((n - 2) ** 2 * q), -1 / q, 0.0])
        got = sorted(np.linalg.eigvals(jacobian(n, x0)).real)
        scale = max(abs(v) for v in want)
        worst = max(worst, max(abs(a - b) for a, b in zip(got, want)) / scale)
    j = jacobian(4, (1.0, 1.0, 4 / 3))
    n4 = sorted(float(v) for v in np.linalg.eigvals(j).real)
    n4_ok = np.allclose(n4, [-1.0, 0.0, 0.25], rtol=SPECTRUM_RTOL, atol=SPECTRUM_RTOL)
    elapsed = time.perf_counter() - t0
    ok = worst < SPECTRUM_RTOL and n4_ok and elapsed < 1.0
    record(2, "equilibrium spectrum", ok,
           f"max relative eigenvalue error {worst:.2e} (n=3..12); n=4,q=1 -> "
           f"{[round(v, 12) for v in n4]}; {elapsed:.3f}s")
    assert ok


def _on_plane_pair(rng, k):
    # 26-bit mantissas make u + v exact over the sampled range, so the
    # points lie exactly on the plane rather than one rounding away from it
    u, v, _ = _points(rng, k)
    m, e = np.frexp(np.array([u, v]))
    return np.ldexp(np.round(m * 2.0 ** 26) / 2.0 ** 26, e)


def test_criterion_3_plane_flux():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst = 0.0
    for n in range(3, 51):
        expected = 2.0 / (n - 2)
        u, v = _on_plane_pair(rng, 10_000)
        for k, x in enumerate((np.array([u + v, u, v]), np.array([u, u + v, v]))):
            rate = plane_rates(n, x)[k]
            worst = max(worst, float(np.max(np.abs(rate - expected))) / expected)
    u, v = _on_plane_pair(rng, 10_000)
    pi3 = plane_rates(3, np.array([u, v, u + v]))[2]
    worst3 = float(np.max(np.abs(pi3 - 2.0))) / 2.0
    spot = inward_flux(3, SurfaceId.PI3, (Fraction(1), Fraction(1), Fraction(2)))
    elapsed = time.perf_counter() - t0
    ok = worst <= PLANE_FLUX_RTOL and worst3 <= PLANE_FLUX_RTOL and spot == 2 and elapsed < 10
    record(3, "plane flux constants", ok,
           f"Pi1/Pi2 max rel. deviation from 2/(n-2) {worst:.2e} (n=3..50, 1e4 pts each); "
           f"Pi3 (n=3) {worst3:.2e}; {elapsed:.2f}s")
    assert ok


def test_criterion_4_sturm():
    t0 = time.perf_counter()
    reports = [verify_positivity(n) for n in range(4, 501)]
    positive = sum(r.verdict is Verdict.POSITIVE_ON_INTERVAL for r in reports)
    counts = sorted({(r.sign_changes_at_0, r.sign_changes_at_1) for r in reports})
    v_ok = counts == [(1, 1)]
    n3 = verify_positivity(3)
    ratio4 = discriminant_p(4).ratio
    ratio_ok = all(discriminant_p(n).ratio == ratio4 for n in range(4, 201))
    d3 = discriminant_p(3)
    ratio_ok = ratio_ok and d3.closed_form == 0 and d3.resultant == 0
    elapsed = time.perf_counter() - t0
    ok = (positive == len(reports) and v_ok and n3.verdict is Verdict.DEGENERATE and ratio_ok
          and elapsed < 30)
    record(4, "Sturm positivity", ok,
           f"PositiveOnInterval {positive}/{len(reports)} (n=4..500); n=3 {n3.verdict.value}; "
           f"(V(0), V(1)) observed {counts}, required (1, 1); discriminant ratio "
           f"{ratio4} constant for n=4..200: {ratio_ok}; {elapsed:.1f}s")
    assert ok


def test_criterion_5_finite_time_entry():
    t0 = time.perf_counter()
    cfg = IntegratorConfig(t_max=200.0)
    lines = []
    all_entered = True
    exits = 0
    drift = 0.0
    for n in range(3, 9):
        res = run_batch(n, 100, FLOW_SEED, cfg)
        entered = sum(r.entered for r in res)
        ex = sum(r.exits_after_entry for r in res)
        dr = max(r.drift for r in res)
        all_entered = all_entered and entered == 100
        exits += ex
        drift = max(drift, dr)
        lines.append(f"n={n}: {entered}/100 entered, {ex} exits, drift {dr:.1e}")
    elapsed = time.perf_counter() - t0
    ok = all_entered and exits == 0 and drift < DRIFT_TOL and elapsed < 120
    record(5, "finite-time entry, no exit, volume drift", ok,
           "; ".join(lines) + f"; max drift {drift:.2e} vs bound {DRIFT_TOL:.0e}; {elapsed:.1f}s")
    assert ok


def test_criterion_6_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = dict.fromkeys(["S", "r3", "conic", "volume", "degree0", "euler"], 0.0)
    for n in range(3, 11):
        x = _points(rng, 10_000)
        x1, x2, x3 = x
        r1, r2, r3 = principal_ricci(n, x)
        s = scalar_curvature(n, x)
        terms = (n - 2) * (np.abs(r1) + np.abs(r2)) + np.abs(r3)
        worst["S"] = max(worst["S"], np.max(np.abs(s - ((n - 2) * (r1 + r2) + r3)) / terms))
        lhs = 4 * x1 * x2 * x3 * r3
        rhs = (x3 - x1 + x2) * (x3 + x1 - x2)
        worst["r3"] = max(worst["r3"], np.max(np.abs(lhs - rhs) / (x1 + x2 + x3) ** 2))
        conic = scal_conic_residual(n, x)
        worst["conic"] = max(worst["conic"], np.max(
            np.abs(conic + 4 * x1 * x2 * x3 * s) / (4 * x1 * x2 * x3 * terms)))
        f = vector_field(n, x)
        parts = np.array([(n - 2) * f.f1 / x1, (n - 2) * f.f2 / x2, f.f3 / x3])
        worst["volume"] = max(worst["volume"], np.max(
            np.abs(parts.sum(axis=0)) / np.abs(parts).sum(axis=0)))
        fa = np.array([f.f1, f.f2, f.f3])
        g = vector_field(n, x * rng.uniform(0.1, 10.0, 10_000))
        fb = np.array([g.f1, g.f2, g.f3])
        worst["degree0"] = max(worst["degree0"], np.max(
            np.max(np.abs(fa - fb), axis=0) / np.max(np.abs(fa), axis=0)))
        j = jacobian(n, x)
        jx = np.einsum("ikp,kp->ip", j, x)
        worst["euler"] = max(worst["euler"], np.max(
            np.abs(jx) / np.einsum("ikp,kp->ip", np.abs(j), x)))
    elapsed = time.perf_counter() - t0
    ok = all(v <= IDENTITY_RTOL for v in worst.values()) and elapsed < 10
    record(6, "identity suite", ok,
           ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
           + f" (n=3..10, 1e4 pts each, box {POINT_BOX}); {elapsed:.2f}s")
    assert ok


def test_criterion_7_separatrix():
    t0 = time.perf_counter()
    diag = i3 = 0.0
    samples = 0
    for n in (4, 5):
        for side in (1, -1):
            x = trace_separatrix(n, "stable", side).x
            samples += len(x)
            diag = max(diag, float(np.max(np.abs(x[:, 0] - x[:, 1]) / x[:, 0])))
            i3 = max(i3, float(np.max(np.abs(x[:, 2] - x[:, 0] ** (4 - 2 * n)) / x[:, 2])))
    elapsed = time.perf_counter() - t0
    ok = diag < SEPARATRIX_DIAG_TOL and i3 < SEPARATRIX_I3_TOL and elapsed < 10
    record(7, "stable separatrix lies on I3", ok,
           f"max |x1-x2|/x1 {diag:.1e}, max I3 residual {i3:.1e} over {samples} samples; "
           f"{elapsed:.2f}s")
    assert ok


def _fd_jacobian(n, q, h):
    # fourth-order central differences
    cols = []
    for k in range(2):
        e = np.zeros(2)
        e[k] = h
        f = [np.array(planar_field(n, *(np.array([q, q]) + m * e))) for m in (2, 1, -1, -2)]
        cols.append((-f[0] + 8 * f[1] - 8 * f[2] + f[3]) / (12 * h))
    return np.array(cols).T


def test_criterion_8_planar():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(3, 11):
        _, q, _ = einstein_point(n, 1.0)
        rep = planar_equilibrium_data(n, q)
        j = _fd_jacobian(n, q, 1e-3 * q)
        err_rho = abs(np.trace(j) - rep.rho) / abs(rep.rho)
        err_delta = abs(np.linalg.det(j) - rep.delta) / abs(rep.delta)
        worst = max(worst, err_rho, err_delta)
    sigma3 = planar_equilibrium_data(3, 1.0).sigma
    elapsed = time.perf_counter() - t0
    ok = worst < PLANAR_RTOL and sigma3 == 0 and elapsed < 1.0
    record(8, "planar trace/determinant", ok,
           f"max relative error {worst:.1e} (n=3..10); sigma(n=3) = {sigma3}; {elapsed:.3f}s")
    assert ok


def test_criterion_9_invariance():
    t0 = time.perf_counter()
    taus = np.geomspace(0.05, 20.0, 100)
    n3 = max(tangency_residual(3, 1.0, w, float(t)) for w in (1, 2) for t in taus)
    witnesses = {}
    for n in range(4, 9):
        witnesses[n] = max(tangency_residual(n, 1.0, w, float(t)) for w in (1, 2) for t in taus)
    elapsed = time.perf_counter() - t0
    ok = n3 < TANGENCY_TOL and min(witnesses.values()) > WITNESS_MIN and elapsed < 5
    record(9, "I1/I2 invariant only for n=3", ok,
           f"n=3 max residual {n3:.1e}; witnesses "
           + ", ".join(f"n={n}: {v:.2f}" for n, v in witnesses.items()) + f"; {elapsed:.2f}s")
    assert ok
