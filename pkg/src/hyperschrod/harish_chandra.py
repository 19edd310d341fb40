"""Harish-Chandra c-function, Plancherel density and the spherical function Xi."""
from __future__ import annotations

import functools
import math

import numpy as np
from scipy.integrate import quad_vec

from .errors import DensityUndefined, DomainError, PoleError, XiAccuracyError
from .special import is_gamma_pole, log_gamma
from .symmetric_space import (
    SpaceDescriptor,
    as_flat,
    in_closed_chamber,
    psi,
    x_over_sinh,
)

_LOG2 = math.log(2.0)

# (C1, C2) with C1 * g <= |c|^{-2} <= C2 * g on |lambda| in [0.5, 100], where
# g is the product in plancherel_asymptotic_ratio; measured, not derived.
PLANCHEREL_RATIO_FIXTURES = {
    "H2": (3.1730085801255083, 8.643957119865108),
    "H3": (0.9999999999998395, 1.0000000000002685),
    "H4": (0.11904148239025095, 0.194410346126601),
    "H5": (0.013888913082519489, 0.027233168861439703),
    "SL3C": (0.24999999999993003, 0.25000000000014927),
}


def _lambda_alpha(space: SpaceDescriptor, lam) -> np.ndarray:
    """lambda_alpha = <lambda, alpha>/<alpha, alpha> for each positive root."""
    lam = np.asarray(lam, dtype=complex)
    if space.rank == 1 and (lam.ndim == 0 or lam.shape[-1] != 1):
        lam = lam[..., None]
    roots = space.root_matrix
    return (lam @ roots.T) / np.sum(roots * roots, axis=1)


def _gamma_args(space: SpaceDescriptor, lam_a):
    m = space.multiplicities
    m2 = np.array([r.m2 for r in space.positive_roots], dtype=float)
    z = 1j * lam_a
    return z, z / 2 + m / 4 + 0.5, z / 2 + m / 4 + m2 / 2


def _indivisible_mask(space):
    vecs = space.root_matrix
    return np.array([not any(np.allclose(v, 2 * w) for w in vecs) for v in vecs])


def _log_c_unnormalized(space: SpaceDescriptor, lam) -> np.ndarray:
    lam_a = _lambda_alpha(space, lam)
    z, d1, d2 = _gamma_args(space, lam_a)
    mask = _indivisible_mask(space)
    for name, arg in (("Gamma(i lambda_alpha)", z),
                      ("Gamma(i lambda_alpha/2 + m/4 + 1/2)", d1),
                      ("Gamma(i lambda_alpha/2 + m/4 + m_2/2)", d2)):
        hit = is_gamma_pole(arg) & mask
        if np.any(hit):
            j = int(np.argwhere(hit)[0][-1])
            raise PoleError(f"{space.name}: {name} has a pole for root #{j}", factor=(j, name))
    with np.errstate(all="ignore"):
        terms = -z * _LOG2 + log_gamma(z) - log_gamma(d1) - log_gamma(d2)
    return np.sum(np.where(mask, terms, 0.0), axis=-1)


@functools.lru_cache(maxsize=None)
def log_c0(space: SpaceDescriptor) -> complex:
    """log of the constant fixing c(-i rho) = 1."""
    return complex(-_log_c_unnormalized(space, -1j * space.rho_vector))


def minus_i_rho(space: SpaceDescriptor) -> np.ndarray:
    return -1j * space.rho_vector


def c_function(space: SpaceDescriptor, lam) -> np.ndarray:
    """Gindikin-Karpelevich product with c(-i rho) = 1.

    ``lam`` is real (rank-many coefficients, trailing axis) or -i*rho.
    Raises PoleError when a Gamma factor sits on a pole, e.g. lambda_alpha = 0.
    """
    return np.exp(_log_c_unnormalized(space, lam) + log_c0(space))


def plancherel_density(space: SpaceDescriptor, lam) -> np.ndarray:
    """|c(lambda)|^{-2} for real lambda; vanishes where some lambda_alpha = 0."""
    lam = np.asarray(lam)
    if np.iscomplexobj(lam) and np.any(lam.imag != 0):
        raise DomainError("Plancherel density is defined for real lambda only")
    lam_a = _lambda_alpha(space, np.real(lam))
    z, d1, d2 = _gamma_args(space, lam_a)
    mask = _indivisible_mask(space)
    if np.any((is_gamma_pole(d1) | is_gamma_pole(d2)) & mask):
        raise DensityUndefined(f"{space.name}: denominator Gamma factor on a pole")
    zero = np.abs(lam_a) == 0
    with np.errstate(all="ignore"):
        zs = np.where(zero, 1.0, z)
        # |1/c_alpha|^2; 1/Gamma(i lambda_alpha) has a simple zero at lambda_alpha = 0
        log_inv = 2.0 * np.real(log_gamma(d1) + log_gamma(d2) - log_gamma(zs) + zs * _LOG2)
    log_inv = np.where(mask, log_inv, 0.0)
    out = np.exp(np.sum(log_inv, axis=-1) - 2.0 * log_c0(space).real)
    return np.where(np.any(zero & mask, axis=-1), 0.0, out)


def plancherel_asymptotic_ratio(space: SpaceDescriptor, lam) -> np.ndarray:
    """|c|^{-2} divided by prod |<l,a>|^2 (1+|<l,a>|)^{m + m2 - 2}."""
    lam = np.asarray(lam, dtype=float)
    if space.rank == 1 and (lam.ndim == 0 or lam.shape[-1] != 1):
        lam = lam[..., None]
    mask = _indivisible_mask(space)
    ip = np.abs(lam @ space.root_matrix.T)
    m = space.multiplicities + np.array([r.m2 for r in space.positive_roots])
    g = np.prod(np.where(mask, ip**2 * (1.0 + ip) ** (m - 2.0), 1.0), axis=-1)
    return plancherel_density(space, lam) / g


def measure_asymptotic_constants(space: SpaceDescriptor, n_radial=400, n_angular=41):
    """Extremes of plancherel_asymptotic_ratio on |lambda| in [0.5, 100]."""
    mags = np.geomspace(0.5, 100.0, n_radial)
    if space.rank == 1:
        ratios = plancherel_asymptotic_ratio(space, mags)
    else:
        # directions strictly inside the positive chamber (between the two simple walls)
        theta = np.linspace(0.0, np.pi / 3, n_angular + 2)[1:-1] + np.pi / 6
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        lam = mags[:, None, None] * dirs[None, :, :]
        ratios = plancherel_asymptotic_ratio(space, lam)
    return float(np.min(ratios)), float(np.max(ratios))


# ---------------------------------------------------------------- Xi

XI_ABS_TOL = 1e-10


def _xi_rank_one_scaled(space: SpaceDescriptor, r: np.ndarray) -> np.ndarray:
    """Xi(r) e^{rho r} from the K-integral.

    With u = e^{r} tan(theta/2) the angular integral
        Xi(r) = c_n int_0^pi (cosh r - sinh r cos theta)^{-rho} sin^{2 rho - 1} theta dtheta
    becomes c_n 4^rho e^{-rho r} int_R e^{2 rho s} (1+e^{2s})^{-rho} (1+e^{2s-2r})^{-rho} ds,
    s = log u, whose integrand has no peak that sharpens with r.
    """
    rho = space.rho_vector[0]
    dim = 2.0 * rho + 1.0
    c_n = math.gamma(dim / 2) / (math.sqrt(math.pi) * math.gamma(rho))
    span = 40.0 / rho

    def integrand(s):
        return np.exp(2 * rho * s - rho * np.logaddexp(0.0, 2 * s) - rho * np.logaddexp(0.0, 2 * s - 2 * r))

    r_hi = float(np.max(r)) if r.size else 0.0
    val, err = quad_vec(integrand, -span, r_hi + span, epsabs=XI_ABS_TOL, epsrel=1e-12,
                        norm="max", points=[0.0] + ([r_hi] if r_hi > 0 else []), limit=20000)
    if err > 100 * XI_ABS_TOL:
        raise XiAccuracyError(f"{space.name}: Xi quadrature did not converge", residual=float(err))
    return c_n * 4.0**rho * val


def xi(space: SpaceDescriptor, H) -> np.ndarray:
    """Spherical function of spectral parameter 0 at exp(H), H in the closed chamber."""
    if not np.all(in_closed_chamber(space, H)):
        raise DomainError(f"{space.name}: point outside the closed positive chamber")
    if space.is_complex:
        # complex case: Xi = pi/eta = psi exactly (H3: r / sinh r)
        return psi(space, H)
    Hf = as_flat(space, H)
    r = Hf[..., 0]
    flat = np.ravel(r)
    scaled = _xi_rank_one_scaled(space, flat)
    rho = space.rho_vector[0]
    return (np.exp(-rho * flat) * scaled).reshape(r.shape)


def xi_bounds(space: SpaceDescriptor, H):
    """(lower, upper) = e^{-rho(H)}, e^{-rho(H)} (1 + |H|_Killing)^d."""
    Hf = as_flat(space, H)
    rho_H = Hf @ space.rho_vector
    norm = np.linalg.norm(Hf, axis=-1)
    lower = np.exp(-rho_H)
    return lower, lower * (1.0 + space.killing_scale * norm) ** space.d


def xi_bound_violations(space: SpaceDescriptor, H, rtol=1e-12) -> dict:
    """Counts of grid points violating each Xi inequality."""
    values = xi(space, H)
    lower, upper = xi_bounds(space, H)
    norm = np.linalg.norm(as_flat(space, H), axis=-1)
    lemma = values * np.exp(space.rho_norm * norm)
    return {
        "points": int(np.size(values)),
        "not_in_(0,1]": int(np.sum((values <= 0) | (values > 1 + rtol))),
        "lower": int(np.sum(values < lower * (1 - rtol))),
        "upper": int(np.sum(values > upper * (1 + rtol))),
        "lemma_xi_exp_rho_sigma": int(np.sum(lemma < 1 - rtol)),
        "max_upper_ratio": float(np.max(values / upper)),
    }


def chamber_sample(space: SpaceDescriptor, radii, n_dirs=7) -> np.ndarray:
    """Flat points at the given radii along directions spanning the closed chamber."""
    radii = np.asarray(radii, dtype=float)
    if space.rank == 1:
        return radii[:, None]
    theta = np.pi / 6 + np.linspace(0.0, np.pi / 3, n_dirs)
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return (radii[:, None, None] * dirs[None]).reshape(-1, 2)
