"""Acceptance criteria 1-12.

Each test appends one "[PASS]/[FAIL] criterion N: ..." line, shown in the
pytest terminal summary.  Run directly with ``python3 tests/test_acceptance.py``.
"""
import math
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from hyperschrod import complex_reduction as cr
from hyperschrod import euclid_prop as ep
from hyperschrod import harish_chandra as hc
from hyperschrod import radial_spectral as rs
from hyperschrod import uncertainty_audit as ua
from hyperschrod.symmetric_space import SPACE_TAGS, build_space, condition_C, psi, radial_grid, radial_profile


def record(n, ok, detail, elapsed, limit):
    ok = bool(ok) and elapsed < limit
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}; {elapsed:.2f} s (limit {limit:g} s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def gauss(space, a, **kw):
    return radial_profile(space, lambda r: psi(space, r) * np.exp(-a * r * r), **kw)


def test_criterion_01_c_normalisation():
    t = time.perf_counter()
    errs = {}
    for tag in SPACE_TAGS:
        X = build_space(tag)
        c = complex(np.asarray(hc.c_function(X, hc.minus_i_rho(X))).ravel()[0])
        errs[tag] = abs(c - 1.0)
    worst = max(errs.values())
    assert record(1, worst <= 1e-10, f"max |c(-i rho) - 1| = {worst:.1e} over {len(errs)} spaces (tol 1e-10)",
                  time.perf_counter() - t, 1.0), errs


def test_criterion_02_h3_plancherel():
    t = time.perf_counter()
    X = build_space("H3")
    lam = np.linspace(0.1, 50.0, 5000)
    dev = float(np.max(np.abs(hc.plancherel_density(X, lam) / lam**2 - 1.0)))
    assert record(2, dev <= 1e-8, f"max rel deviation of |c|^-2 from lambda^2 = {dev:.1e} (tol 1e-8)",
                  time.perf_counter() - t, 1.0)


def test_criterion_03_xi_bounds():
    t = time.perf_counter()
    r = radial_grid(20.0, 1e-2, include_origin=False)
    bad = {}
    ratios = {}
    for tag in SPACE_TAGS:
        X = build_space(tag)
        v = hc.xi_bound_violations(X, hc.chamber_sample(X, r))
        total = v["not_in_(0,1]"] + v["lower"] + v["upper"] + v["lemma_xi_exp_rho_sigma"]
        ratios[tag] = v["max_upper_ratio"]
        if total:
            bad[tag] = total
    detail = ("zero violations on all five spaces" if not bad else
              "violations " + ", ".join(f"{k}: {n} (max Xi/upper = {ratios[k]:.3f})" for k, n in bad.items()))
    assert record(3, not bad, detail, time.perf_counter() - t, 5.0), bad


def _euclid_sweep():
    cases = []
    for n, N, L in ((1, 1024, 30.0), (2, 256, 22.0)):
        for a in (0.5, 1.0, 2.0):
            f = ep.gaussian_field(a, n, N, L)
            for tt in (0.1, 0.25, 1.0):
                cases.append((n, a, tt, f, ep.gaussian_oracle(a, 0.0, tt, n, N, L)))
    return cases


def test_criterion_04_euclid_oracle():
    t = time.perf_counter()
    worst = max(ep.rel_l2_error(ep.propagate_multiplier(f, tt), oracle) for _, _, tt, f, oracle in _euclid_sweep())
    assert record(4, worst <= 1e-6, f"max rel L2 error vs Gaussian oracle = {worst:.1e} over 18 cases (tol 1e-6)",
                  time.perf_counter() - t, 10.0)


def test_criterion_05_chirp_vs_multiplier():
    t = time.perf_counter()
    worst = max(ep.rel_l2_error(ep.chirp_solution(f, tt), ep.propagate_multiplier(f, tt))
                for _, _, tt, f, _ in _euclid_sweep())
    assert record(5, worst <= 1e-6, f"max rel L2 gap chirp vs multiplier = {worst:.1e} over 18 cases (tol 1e-6)",
                  time.perf_counter() - t, 10.0)


def test_criterion_06_isometry_and_conservation():
    t = time.perf_counter()
    X = build_space("H3")
    worst = 0.0
    for a in (0.5, 1.0, 2.0):
        f = gauss(X, a)
        n0 = rs.l2_norm_sq(f)
        worst = max(worst, abs(rs.spectral_norm_sq(rs.spherical_transform(f)) / n0 - 1))
        for tt in (0.25, 1.0):
            worst = max(worst, abs(rs.l2_norm_sq(rs.propagate_radial(f, tt)) / n0 - 1))
    assert record(6, worst <= 1e-4, f"max relative norm defect = {worst:.1e} (tol 1e-4)",
                  time.perf_counter() - t, 10.0)


def test_criterion_07_factorisation():
    t = time.perf_counter()
    X = build_space("H3")
    funcs = [gauss(X, 0.5), gauss(X, 2.0),
             radial_profile(X, lambda r: psi(X, r) * (1 + r * r) * np.exp(-r * r))]
    worst = 0.0
    for f in funcs:
        F = rs.spherical_transform(f).values
        FA = rs.fourier_A(rs.abel_transform(f))
        worst = max(worst, float(np.linalg.norm(FA - F) / np.linalg.norm(F)))
    assert record(7, worst <= 1e-6, f"max rel gap F_A(R f) vs spherical transform = {worst:.1e} (tol 1e-6)",
                  time.perf_counter() - t, 5.0)


def test_criterion_08_extremal():
    t = time.perf_counter()
    X = build_space("H3")
    pair = cr.extremal_pair(X, 1.0, 1.0 / 16)
    u = rs.propagate_radial(pair.f, pair.t0)
    beta_hat = ua.decay_fit(u, use_psi_prefactor=True).alpha_hat
    beta_err = abs(beta_hat - pair.beta) * 16
    phase = cr.phase_quadratic_coefficient(u)
    phase_err = abs(phase - 0.25) / 0.25
    _, spread, _ = cr.match_constant(u, pair.u_expected)
    ok = pair.t0 == 1.0 and beta_err <= 0.02 and phase_err <= 0.02 and spread <= 1e-3
    assert record(8, ok, f"t0 = {pair.t0:g}, |beta_hat - 1/16|*16 = {beta_err:.1e}, phase rel err = "
                         f"{phase_err:.1e}, ratio spread = {spread:.1e}", time.perf_counter() - t, 30.0)


def test_criterion_09_classifier():
    t = time.perf_counter()
    expected = {0.5: ("NO_CONCLUSION", True), 0.9: ("NO_CONCLUSION", True),
                1.1: ("FORCES_ZERO", False), 4.0: ("FORCES_ZERO", False)}
    X = build_space("H3")
    # alpha = beta = 4 and t0 = sqrt(p)/16 give 16 alpha beta t0^2 = p
    f = gauss(X, 4.0, r_max=10.0, dr=1e-3)
    fit = ua.decay_fit(f, use_psi_prefactor=True)
    got = {}
    for p in expected:
        t0 = math.sqrt(p) / 16.0
        _, verdict, _ = ua.classify(fit, fit, t0)
        got[p] = (verdict.value, ua.beurling_functional(f, f, t0).divergent)
    ok = got == expected
    detail = ", ".join(f"{p}: {v}/{'DIVERGENT' if d else 'finite'}" for p, (v, d) in got.items())
    assert record(9, ok, detail, time.perf_counter() - t, 20.0), got


def test_criterion_10_condition_c():
    t = time.perf_counter()
    got = {tag: condition_C(build_space(tag)) for tag in SPACE_TAGS}
    want = {"H2": False, "H3": True, "H4": True, "H5": True, "SL3C": True}
    assert record(10, got == want, ", ".join(f"{k}: {v}" for k, v in got.items()), time.perf_counter() - t, 1.0)


def test_criterion_11_convolution_bound():
    t = time.perf_counter()
    X = build_space("H3")
    worst = 0.0
    for a, b in ((0.5, 1.0), (1.0, 1.0), (1.0, 2.0)):
        h, k = gauss(X, a), gauss(X, b)
        hk = rs.radial_convolve(h, k)
        for C in (0.0, 0.5, 1.0):
            ratio = ua.l1c_norm(hk, C).value / (ua.l1c_norm(h, C).value * ua.l1c_norm(k, C).value)
            worst = max(worst, ratio)
    assert record(11, worst <= 1 + 1e-3, f"max ||h x k|| / (||h|| ||k||) = {worst:.6f} (tol 1.001)",
                  time.perf_counter() - t, 10.0)


def test_criterion_12_hardy_certificate():
    t = time.perf_counter()
    X = build_space("H3")
    h, pair = cr.extremal_chirp_factor(X, 1.0, 1.0 / 16)
    fit = cr.hardy_equality_fit(h, pair.beta, 1)
    skew, defect, q = cr.skew_divisibility(fit, X)
    x = h.axes()[0]
    control = h.with_values(h.values * np.exp(-x**4))
    bad = cr.hardy_equality_fit(control, pair.beta, 1)
    ok = fit.residual <= 1e-6 and skew and bad.residual > 1e-2
    assert record(12, ok, f"extremal residual = {fit.residual:.1e}, P = {abs(q):.4f} x (even part {defect:.1e}); "
                          f"control residual = {bad.residual:.3f}", time.perf_counter() - t, 5.0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
