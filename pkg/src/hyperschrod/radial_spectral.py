"""Radial spherical transform on H^3 and everything built on it.

On H^3 (curvature -1) phi_lambda(r) = sin(lambda r) / (lambda sinh r), the
polar density is sinh^2 r and |c(lambda)|^{-2} = lambda^2, so

    F(lambda) = c_p int_0^inf f(r) phi_lambda(r) sinh^2 r dr
              = (c_p / lambda) int_0^inf f(r) sinh r sin(lambda r) dr,

a sine transform of f sinh.  The inverse is
f(r) = (2/|W|) int_0^inf F(lambda) phi_lambda(r) |c(lambda)|^{-2} dlambda.
Both are Simpson sums evaluated at every output node at once with a chirp-z
transform.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from ._numerics import exp_sum, radial_weights, simpson_weights
from .errors import GridError, InputError, TailWarning, UnsupportedSpace
from .euclid_prop import FlatField, flat_grid
from .harish_chandra import plancherel_density
from .symmetric_space import RadialProfile, SpaceDescriptor, psi, radial_grid

LAMBDA_MAX = 40.0
DLAMBDA = 5e-3
TAIL_TOL = 1e-10
_SERIES_CUTOFF = 1e-4


@dataclass(frozen=True, eq=False)
class SpectralProfile:
    """Samples of a radial spectral function on a uniform grid of [0, Lambda_max]."""

    space: SpaceDescriptor
    lambdas: np.ndarray
    values: np.ndarray
    warnings: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if lam.ndim != 1 or lam.size < 3 or v.shape != lam.shape:
            raise GridError("lambdas and values must be 1-D arrays of equal length (>= 3)")
        steps = np.diff(lam)
        if abs(lam[0]) > 1e-12 or steps.min() <= 0 or np.ptp(steps) > 1e-9 * steps.mean():
            raise GridError("spectral grid must be uniform and start at lambda = 0")
        if not np.all(np.isfinite(v)):
            raise InputError("spectral profile contains non-finite values")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "values", v)

    @property
    def dlam(self) -> float:
        return float(self.lambdas[-1] / (self.lambdas.size - 1))

    def with_values(self, values, warnings=()) -> "SpectralProfile":
        return SpectralProfile(self.space, self.lambdas, values, tuple(self.warnings) + tuple(warnings))


def spectral_grid(lam_max: float = LAMBDA_MAX, dlam: float = DLAMBDA) -> np.ndarray:
    n = int(round(lam_max / dlam))
    if n < 2 or abs(n * dlam - lam_max) > 1e-9 * lam_max:
        raise GridError(f"lam_max={lam_max} is not a multiple of dlam={dlam}")
    return dlam * np.arange(n + 1)


def _require_h3(space: SpaceDescriptor):
    if space.name != "H3":
        raise UnsupportedSpace(f"radial transforms are implemented for H3 only, not {space.name}")


def _warn(msg, notes):
    warnings.warn(msg, TailWarning, stacklevel=3)
    notes.append("TailWarning: " + msg)


def spherical_function(space: SpaceDescriptor, lam, r) -> np.ndarray:
    """phi_lambda(r) = sin(lambda r)/(lambda sinh r) on H^3 (both limits filled in)."""
    _require_h3(space)
    lam, r = np.broadcast_arrays(np.asarray(lam, dtype=float), np.asarray(r, dtype=float))
    x = lam * r
    small = np.abs(x) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    x2 = x * x
    sinc = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)
    # sin(lr)/(l sinh r) = sinc(lr) * r/sinh r
    return sinc * psi(space, r)


def eigen_ode_residual(space: SpaceDescriptor, lam: float, r_lo=0.5, r_hi=10.0, h=1e-3) -> float:
    """Relative residual of u'' + 2 coth(r) u' + (lambda^2 + 1) u = 0 for u = phi_lambda.

    Derivatives by fourth-order central differences.
    """
    r = np.arange(r_lo, r_hi, h)
    u = [spherical_function(space, lam, r + k * h) for k in (-2, -1, 0, 1, 2)]
    d1 = (u[0] - 8 * u[1] + 8 * u[3] - u[4]) / (12 * h)
    d2 = (-u[0] + 16 * u[1] - 30 * u[2] + 16 * u[3] - u[4]) / (12 * h * h)
    lhs = d2 + 2.0 / np.tanh(r) * d1 + (lam * lam + space.rho_norm_sq) * u[2]
    scale = np.max(np.abs((lam * lam + space.rho_norm_sq) * u[2]))
    return float(np.max(np.abs(lhs)) / scale)


def spherical_transform(f: RadialProfile, lam_max: float = LAMBDA_MAX, dlam: float = DLAMBDA,
                        polar_constant: float = None) -> SpectralProfile:
    _require_h3(f.space)
    cp = f.space.polar_constant if polar_constant is None else polar_constant
    r = f.radii
    notes = []
    g = f.values * np.sinh(r)
    peak = np.max(np.abs(g))
    if peak > 0 and abs(g[-1]) > TAIL_TOL * peak:
        _warn(f"f sinh r at r_max is {abs(g[-1]) / peak:.2e} of its peak", notes)
    gw = g * radial_weights(r, f.dr)
    lam = spectral_grid(lam_max, dlam)
    m = lam.size
    e_plus = exp_sum(gw, r[0], f.dr, 0.0, dlam, m, sign=1)
    e_minus = exp_sum(gw, r[0], f.dr, 0.0, dlam, m, sign=-1)
    sine = (e_plus - e_minus) / 2j
    out = np.empty(m, dtype=complex)
    out[1:] = sine[1:] / lam[1:]
    out[0] = np.sum(gw * r)
    return SpectralProfile(f.space, lam, cp * out, tuple(notes))


def inverse_spherical(F: SpectralProfile, radii=None, weyl_order: int = None) -> RadialProfile:
    """(1/|W|) int_R F phi_lambda |c|^{-2} dlambda, folded onto lambda >= 0."""
    _require_h3(F.space)
    W = F.space.weyl_order if weyl_order is None else weyl_order
    r = radial_grid() if radii is None else np.asarray(radii, dtype=float)
    notes = []
    peak = np.max(np.abs(F.values))
    if peak > 0 and abs(F.values[-1]) > TAIL_TOL * peak:
        _warn(f"F at lambda_max is {abs(F.values[-1]) / peak:.2e} of its peak", notes)
    lam = F.lambdas
    dens = plancherel_density(F.space, lam)
    wF = simpson_weights(lam.size, F.dlam) * F.values
    v = np.zeros_like(wF)
    v[1:] = wF[1:] * dens[1:] / lam[1:]
    dr = float(r[1] - r[0])
    e_plus = exp_sum(v, 0.0, F.dlam, r[0], dr, r.size, sign=1)
    e_minus = exp_sum(v, 0.0, F.dlam, r[0], dr, r.size, sign=-1)
    sine = (e_plus - e_minus) / 2j
    out = np.empty(r.size, dtype=complex)
    at0 = np.abs(r) < 0.5 * dr
    rs = np.where(at0, 1.0, r)
    out[:] = sine / np.sinh(rs)
    out[at0] = np.sum(wF * dens)
    return RadialProfile(F.space, r, (2.0 / W) * out, tuple(F.warnings) + tuple(notes))


def schrodinger_multiplier(space: SpaceDescriptor, lam, t: float) -> np.ndarray:
    return np.exp(-1j * (np.asarray(lam) ** 2 + space.rho_norm_sq) * t)


def propagate_radial(f: RadialProfile, t: float, lam_max: float = LAMBDA_MAX,
                     dlam: float = DLAMBDA) -> RadialProfile:
    F = spherical_transform(f, lam_max, dlam)
    Ft = F.with_values(schrodinger_multiplier(f.space, F.lambdas, t) * F.values)
    u = inverse_spherical(Ft, f.radii)
    return RadialProfile(f.space, u.radii, u.values, tuple(f.warnings) + u.warnings)


def l2_norm_sq(f: RadialProfile) -> float:
    """c_p int |f|^2 sinh^2 r dr."""
    _require_h3(f.space)
    integrand = np.abs(f.values) ** 2 * np.sinh(f.radii) ** 2
    return float(f.space.polar_constant * np.dot(radial_weights(f.radii, f.dr), integrand))


def spectral_norm_sq(F: SpectralProfile) -> float:
    """(2/|W|) int_0^inf |F|^2 |c|^{-2} dlambda."""
    dens = plancherel_density(F.space, F.lambdas)
    w = simpson_weights(F.lambdas.size, F.dlam)
    return float(2.0 / F.space.weyl_order * np.dot(w, np.abs(F.values) ** 2 * dens))


def calibrate_polar_constant(space: SpaceDescriptor, a: float = 1.0, r_max=20.0, dr=1e-3) -> float:
    """c_p for which c_p ||f||^2 = ||F||^2 on the reference f = psi e^{-a r^2}.

    With F computed at c_p = 1 the identity reads c_p L = c_p^2 R, so c_p = L/R.
    """
    r = radial_grid(r_max, dr)
    f = RadialProfile(space, r, psi(space, r) * np.exp(-a * r * r))
    F1 = spherical_transform(f, polar_constant=1.0)
    lhs = l2_norm_sq(f) / space.polar_constant
    return lhs / spectral_norm_sq(F1)


def abel_transform(f: RadialProfile, N: int = 4096, L: float = None,
                   lam_max: float = LAMBDA_MAX, dlam: float = DLAMBDA) -> FlatField:
    """Rf on the flat as the inverse Euclidean transform of the spherical transform.

    Rf(s) = (2 pi)^{-1/2} int_R F(lambda) e^{i lambda s} dlambda
          = (2/pi)^{1/2} int_0^inf F(lambda) cos(lambda s) dlambda  (F even).

    The flat carries da = ds / (2 pi)^{1/2}, so F(0) = int Rf da.  For H^3
    this reproduces Rf(s) = (2/pi)^{1/2} int_{|s|}^inf f(r) sinh r dr.
    """
    F = spherical_transform(f, lam_max, dlam)
    base = flat_grid(1, N, f.r_max if L is None else L)
    x0, dx = -base.L[0], base.dx[0]
    wF = simpson_weights(F.lambdas.size, F.dlam) * F.values
    e_plus = exp_sum(wF, 0.0, F.dlam, x0, dx, N, sign=1)
    e_minus = exp_sum(wF, 0.0, F.dlam, x0, dx, N, sign=-1)
    cosine = 0.5 * (e_plus + e_minus)
    return base.with_values(math.sqrt(2.0 / math.pi) * cosine, f.warnings + F.warnings)


def fourier_A(h: FlatField, lam_max: float = LAMBDA_MAX, dlam: float = DLAMBDA) -> np.ndarray:
    """(2 pi)^{-1/2} int h(s) e^{-i lambda s} ds on the spectral grid (periodic trapezoid)."""
    if h.dim != 1:
        raise GridError("fourier_A takes a one-dimensional field")
    lam = spectral_grid(lam_max, dlam)
    dx = h.dx[0]
    s = exp_sum(h.values, -h.L[0], dx, 0.0, dlam, lam.size, sign=-1)
    return s * dx / math.sqrt(2.0 * math.pi)


def radial_convolve(h: RadialProfile, k: RadialProfile, lam_max: float = LAMBDA_MAX,
                    dlam: float = DLAMBDA) -> RadialProfile:
    """h x k through the product of spherical transforms."""
    if not h.same_grid(k):
        raise GridError("convolution needs both profiles on the same space and grid")
    Fh = spherical_transform(h, lam_max, dlam)
    Fk = spherical_transform(k, lam_max, dlam)
    prod = Fh.with_values(Fh.values * Fk.values, Fk.warnings)
    out = inverse_spherical(prod, h.radii)
    return RadialProfile(h.space, out.radii, out.values, tuple(h.warnings) + out.warnings)
