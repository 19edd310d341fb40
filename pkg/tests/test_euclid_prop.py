import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperschrod import euclid_prop as ep
from hyperschrod._numerics import fft_workers
from hyperschrod.errors import AliasWarning, DomainError, GridError, KernelUndefined

N1, L1 = 1024, 30.0


@pytest.fixture(scope="module")
def g1():
    return ep.gaussian_field(1.0, 1, N1, L1)


def test_flatfield_requires_power_of_two():
    with pytest.raises(GridError):
        ep.FlatField(np.zeros(1000), 10.0)
    with pytest.raises(GridError):
        ep.FlatField(np.zeros((3, 4, 4)), 1.0)


def test_grid_layout():
    f = ep.flat_grid(1, 8, 4.0)
    assert np.allclose(f.axes()[0], [-4, -3, -2, -1, 0, 1, 2, 3])
    assert f.measure_convention == ep.MEASURE_CONVENTION


def test_identity_at_t0(g1):
    assert np.allclose(ep.propagate_multiplier(g1, 0.0).values, g1.values, atol=1e-15)


def test_gaussian_quarter(g1):
    u = ep.propagate_multiplier(g1, 0.25)
    assert ep.rel_l2_error(u, ep.gaussian_oracle(1.0, 0.0, 0.25, 1, N1, L1)) <= 1e-6


def test_damping_is_a_phase(g1):
    u0 = ep.propagate_multiplier(g1, 0.25, 0.0)
    u1 = ep.propagate_multiplier(g1, 0.25, 1.0)
    assert np.allclose(u1.values, u0.values * np.exp(-0.25j), rtol=0, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.floats(-3.0, 3.0), st.floats(-2.0, 2.0))
def test_unitarity(t, c):
    f = ep.from_function(lambda x: np.exp(-x * x) * (1 + 0.3j * x), 1, 256, 12.0)
    u = ep.propagate_multiplier(f, t, c)
    assert u.l2_norm() == pytest.approx(f.l2_norm(), rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(-1.0, 1.0), st.floats(-1.0, 1.0), st.floats(0.0, 2.0))
def test_group_law(t1, t2, c):
    f = ep.from_function(lambda x, y: np.exp(-x * x - 2 * y * y), 2, 64, 8.0)
    a = ep.propagate_multiplier(ep.propagate_multiplier(f, t1, c), t2, c)
    b = ep.propagate_multiplier(f, t1 + t2, c)
    assert ep.rel_l2_error(a, b) <= 1e-10


def test_kernel_values():
    assert ep.kernel_gamma(1, 0.0, 0.5, 0.0) == pytest.approx(np.exp(-1j * math.pi / 4), abs=1e-15)
    x = np.array([[0.3, -1.2], [4.0, 2.0]])
    assert np.allclose(np.abs(ep.kernel_gamma(2, 0.0, 1.0, x)), 0.5)
    with pytest.raises(KernelUndefined):
        ep.kernel_gamma(1, 0.0, 0.0, 1.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 5.0), st.floats(-10.0, 10.0), st.sampled_from([1, 2]))
def test_kernel_time_reversal(t, x, n):
    pt = [x] * n if n == 2 else x
    assert ep.kernel_gamma(n, 0.0, -t, pt) == pytest.approx(np.conj(ep.kernel_gamma(n, 0.0, t, pt)), abs=1e-14)


def test_kernel_is_the_multiplier():
    # gamma * f (normalised measure) equals the multiplier solution
    f = ep.gaussian_field(0.7, 1, 512, 20.0)
    t, c = 0.6, 0.3
    x = f.axes()[0]
    dx = f.dx[0]
    K = ep.kernel_gamma(1, c, t, x[:, None] - x[None, :])
    direct = K @ f.values * dx / math.sqrt(2 * math.pi)
    assert ep.rel_l2_error(direct, ep.propagate_multiplier(f, t, c)) <= 1e-8


def test_chirp_zero_field():
    z = ep.flat_grid(1, 256, 10.0)
    assert np.all(ep.chirp_solution(z, 0.5).values == 0)


def test_chirp_matches_multiplier(g1):
    for t in (0.25, -0.25, 0.1):
        assert ep.rel_l2_error(ep.chirp_solution(g1, t), ep.propagate_multiplier(g1, t)) <= 1e-6


def test_chirp_modulus_structure(g1):
    t = 0.25
    u = ep.chirp_solution(g1, t)
    # |u(x)| = (2|t|)^{-1/2} |h^(x/2t)|; h^ for a Gaussian is known in closed form
    x = g1.axes()[0]
    xi = x / (2 * t)
    b = 1.0 - 1j / (4 * t)
    h_hat = np.exp(-xi * xi / (4 * b)) / np.sqrt(2 * b)
    assert np.allclose(np.abs(u.values), (2 * t) ** -0.5 * np.abs(h_hat), rtol=0, atol=1e-10)


def test_chirp_needs_nonzero_t(g1):
    with pytest.raises(KernelUndefined):
        ep.chirp_solution(g1, 0.0)


def test_alias_warning():
    wide = ep.gaussian_field(0.01, 1, 256, 10.0)
    with pytest.warns(AliasWarning):
        u = ep.chirp_solution(wide, 0.5)
    assert any("AliasWarning" in w for w in u.warnings)


def test_oracle_examples():
    o = ep.gaussian_oracle(1.0, 0.0, 0.0, 1, 256, 10.0)
    x = o.axes()[0]
    assert np.allclose(o.values, np.exp(-x * x))
    # modulus decay exponent a/(1 + 16 a^2 t^2)
    t = 0.4
    u = ep.gaussian_oracle(1.0, 0.0, t, 1, 256, 10.0)
    logm = np.log(np.abs(u.values))
    slope = np.polyfit(x * x, logm, 1)[0]
    assert -slope == pytest.approx(1.0 / (1 + 16 * t * t), rel=1e-12)
    # damping c = |rho|^2 only rotates the phase
    a = ep.gaussian_oracle(0.5, 1.0, 0.7, 2, 32, 5.0)
    b = ep.gaussian_oracle(0.5, 0.0, 0.7, 2, 32, 5.0)
    assert np.allclose(a.values, b.values * np.exp(-0.7j))
    with pytest.raises(DomainError):
        ep.gaussian_oracle(-1.0, 0.0, 1.0, 1, 8, 1.0)


def test_branch_continuity():
    ts = np.linspace(-2, 2, 401)
    vals = np.array([ep.gaussian_oracle(1.0, 0.0, t, 2, 2, 1.0).values[1, 1] for t in ts])
    assert np.max(np.abs(np.diff(vals))) < 0.05


def test_hardy_sharpness_witness():
    # e^{-x^2} at 4 a t0 = 1 decays like a/(1 + 16 a^2 t0^2) = 1/2
    t0 = 0.25
    u = ep.propagate_multiplier(ep.gaussian_field(1.0, 1, N1, L1), t0)
    x = u.axes()[0]
    keep = np.abs(x) <= 6
    slope = np.polyfit(x[keep] ** 2, np.log(np.abs(u.values[keep])), 1)[0]
    assert -slope == pytest.approx(0.5, rel=1e-8)
    assert 16 * 1.0 * (-slope) * t0 ** 2 == pytest.approx(0.5, rel=1e-8)


def test_thread_env(monkeypatch):
    monkeypatch.setenv("HYPERSCHROD_THREADS", "3")
    assert fft_workers() == 3
    monkeypatch.setenv("HYPERSCHROD_THREADS", "junk")
    assert fft_workers() == 1
