import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperschrod.errors import DomainError, GridError, UnsupportedSpace
from hyperschrod.symmetric_space import (
    SPACE_TAGS,
    RadialProfile,
    build_space,
    condition_C,
    delta_density,
    delta_density_asymptotic_form,
    half_sum,
    in_closed_chamber,
    psi,
    radial_grid,
    structure_functions,
    weyl_group,
)


def test_h3_descriptor():
    s = build_space("H3")
    assert (s.rank, s.d, s.is_complex) == (1, 1, True)
    assert s.positive_roots[0].m == 2 and s.positive_roots[0].m2 == 0
    assert s.rho == (1.0,)


def test_h3_rho_from_delta_growth():
    # sinh^2 r ~ e^{2 rho r}/4 pins rho = 1
    s = build_space("H3")
    r = np.array([15.0, 18.0])
    slope = np.diff(np.log(delta_density(s, r)))[0] / 3.0
    assert slope == pytest.approx(2.0 * s.rho[0], rel=1e-12)


def test_h2_descriptor():
    s = build_space("H2")
    assert (s.rank, s.d, s.is_complex) == (1, 1, False)
    assert s.positive_roots[0].m == 1
    assert s.rho == (0.5,)
    r = np.array([15.0, 18.0])
    slope = np.diff(np.log(delta_density(s, r)))[0] / 3.0
    assert slope == pytest.approx(1.0, rel=1e-12)


def test_sl3c_descriptor_and_closure():
    s = build_space("SL3C")
    assert (s.rank, s.d, s.is_complex) == (2, 3, True)
    assert all(r.m == 2 for r in s.positive_roots)
    roots = [np.array(r.coeffs) for r in s.positive_roots]
    full = roots + [-v for v in roots]
    group = weyl_group(s)
    assert len(group) == 6
    assert sorted(d for _, d in group) == [-1, -1, -1, 1, 1, 1]
    for w, _ in group:
        for v in full:
            assert any(np.allclose(w @ v, u) for u in full)
    assert np.allclose(s.rho, [1.0, math.sqrt(3.0)])
    assert s.rho_norm_sq == pytest.approx(4.0)


@pytest.mark.parametrize("tag", SPACE_TAGS)
def test_rho_is_half_sum(tag):
    s = build_space(tag)
    assert tuple(half_sum(s.positive_roots)) == s.rho


def test_unknown_tag():
    with pytest.raises(UnsupportedSpace):
        build_space("H7")


def test_delta_examples():
    assert delta_density(build_space("H3"), 0.0) == 0.0
    assert delta_density(build_space("H3"), 1.0) == pytest.approx(1.3810978455418157, rel=1e-14)
    assert delta_density(build_space("H2"), 1.0) == pytest.approx(1.1752011936438014, rel=1e-14)


def test_delta_outside_chamber():
    with pytest.raises(DomainError):
        delta_density(build_space("H3"), -0.5)
    with pytest.raises(DomainError):
        delta_density(build_space("SL3C"), [[0.0, -1.0]])


def test_structure_functions_h3():
    eta, pi, ps = structure_functions(build_space("H3"), 1.0)
    assert eta == pytest.approx(math.sinh(1.0))
    assert pi == pytest.approx(1.0)
    assert ps == pytest.approx(1.0 / math.sinh(1.0), rel=1e-14)
    assert psi(build_space("H3"), 1e-9) == pytest.approx(1.0, abs=1e-15)
    assert psi(build_space("H3"), 0.0) == 1.0


def test_structure_functions_sl3c():
    s = build_space("SL3C")
    H = np.array([0.4, 1.1])
    a = s.root_matrix @ H
    eta, pi, ps = structure_functions(s, H)
    assert eta == pytest.approx(np.prod(np.sinh(a)), rel=1e-14)
    assert pi == pytest.approx(np.prod(a), rel=1e-14)


def test_condition_c():
    got = {t: condition_C(build_space(t)) for t in SPACE_TAGS}
    assert got == {"H2": False, "H3": True, "H4": True, "H5": True, "SL3C": True}


def _sl3c_points(u, v):
    # u, v >= 0 along the chamber's edge directions
    e1 = np.array([math.cos(math.pi / 6), math.sin(math.pi / 6)])
    e2 = np.array([0.0, 1.0])
    return u * e1 + v * e2


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 20.0), st.sampled_from(SPACE_TAGS[:4]))
def test_delta_second_form_rank_one(r, tag):
    s = build_space(tag)
    a, b = delta_density(s, r), delta_density_asymptotic_form(s, r)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 8.0), st.floats(0.0, 8.0))
def test_sl3c_identities(u, v):
    s = build_space("SL3C")
    H = _sl3c_points(u, v)
    assert in_closed_chamber(s, H)
    assert delta_density(s, H) == pytest.approx(delta_density_asymptotic_form(s, H), rel=1e-12, abs=1e-300)
    eta, pi, ps = structure_functions(s, H)
    assert 0.0 < ps <= 1.0
    if pi > 1e-6:
        assert ps * eta == pytest.approx(pi, rel=1e-12)


def test_psi_in_unit_interval_on_grid():
    for tag in SPACE_TAGS[:4]:
        p = psi(build_space(tag), radial_grid())
        assert np.all(p > 0) and np.all(p <= 1.0) and p[0] == 1.0


def test_radial_profile_validation():
    s = build_space("H3")
    r = radial_grid(1.0, 0.1, include_origin=False)
    prof = RadialProfile(s, r, np.ones_like(r))
    assert not prof.includes_origin and prof.dr == pytest.approx(0.1)
    with pytest.raises(GridError):
        RadialProfile(s, r + 0.05, np.ones_like(r))
    with pytest.raises(GridError):
        RadialProfile(s, np.array([0.0, 0.1, 0.3]), np.ones(3))
    with pytest.raises(Exception):
        RadialProfile(s, r, np.full_like(r, np.nan))
