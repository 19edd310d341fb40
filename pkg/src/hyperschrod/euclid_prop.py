"""Damped Schroedinger evolution i u_t + (Delta - c) u = 0 on periodic R^n grids.

Fourier pair convention: f^(xi) = (2 pi)^{-n/2} int f(x) e^{-i x.xi} dx, i.e.
Lebesgue measure divided by (2 pi)^{n/2} on both sides.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy import fft as sfft
from scipy.signal import resample

from ._numerics import exp_sum, fft_workers
from .errors import AliasWarning, DomainError, GridError, KernelUndefined

MEASURE_CONVENTION = "lebesgue/(2pi)^(n/2)"
BOUNDARY_TOL = 1e-12


def _as_tuple(v, dim):
    if np.ndim(v) == 0:
        return (v,) * dim
    v = tuple(v)
    if len(v) != dim:
        raise GridError(f"expected {dim} per-axis grid parameters, got {len(v)}")
    return v


@dataclass(frozen=True, eq=False)
class FlatField:
    """Samples on x_j = -L + j dx, dx = 2L/N, per axis (periodic grid)."""

    values: np.ndarray
    L: Tuple[float, ...]
    warnings: Tuple[str, ...] = field(default=())
    measure_convention: str = MEASURE_CONVENTION

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim not in (1, 2):
            raise GridError("FlatField supports dimension 1 or 2")
        L = tuple(float(x) for x in _as_tuple(self.L, v.ndim))
        for n, ell in zip(v.shape, L):
            if n < 2 or n & (n - 1):
                raise GridError(f"grid size {n} is not a power of two")
            if not ell > 0:
                raise GridError("half-width L must be positive")
        if not np.all(np.isfinite(v)):
            raise GridError("field contains non-finite values")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "L", L)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def N(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def dx(self) -> Tuple[float, ...]:
        return tuple(2.0 * ell / n for ell, n in zip(self.L, self.N))

    def axes(self):
        return [-ell + d * np.arange(n) for ell, d, n in zip(self.L, self.dx, self.N)]

    def coords(self):
        """Broadcastable coordinate arrays, one per axis (indexing='ij')."""
        return np.meshgrid(*self.axes(), indexing="ij", sparse=True)

    def r2(self) -> np.ndarray:
        return sum(c * c for c in self.coords())

    def with_values(self, values, warnings=()) -> "FlatField":
        return FlatField(values, self.L, tuple(self.warnings) + tuple(warnings))

    def same_grid(self, other: "FlatField") -> bool:
        return self.N == other.N and np.allclose(self.L, other.L, rtol=1e-12, atol=0)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * np.prod(self.dx)))


def flat_grid(dim: int, N, L) -> FlatField:
    """Zero field on the given grid."""
    N = _as_tuple(N, dim)
    return FlatField(np.zeros(tuple(int(n) for n in N), dtype=complex), _as_tuple(L, dim))


def from_function(func, dim: int, N, L) -> FlatField:
    base = flat_grid(dim, N, L)
    return base.with_values(np.broadcast_to(func(*base.coords()), base.N))


def rel_l2_error(a, b) -> float:
    """||a - b|| / ||b|| for fields or arrays on the same grid."""
    a = a.values if isinstance(a, FlatField) else np.asarray(a)
    b = b.values if isinstance(b, FlatField) else np.asarray(b)
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def frequencies(f: FlatField):
    return [2.0 * np.pi * sfft.fftfreq(n, d) for n, d in zip(f.N, f.dx)]


def propagate_multiplier(f: FlatField, t: float, c: float = 0.0) -> FlatField:
    """Multiply the discrete spectrum by exp(-i(|lambda|^2 + c) t)."""
    lam2 = sum(k * k for k in np.meshgrid(*frequencies(f), indexing="ij", sparse=True))
    workers = fft_workers()
    spec = sfft.fftn(f.values, workers=workers)
    spec *= np.exp(-1j * (lam2 + c) * t)
    return f.with_values(sfft.ifftn(spec, workers=workers))


def kernel_gamma(n: int, c: float, t: float, x) -> np.ndarray:
    """gamma_{c,t}(x) = (2|t|)^{-n/2} e^{-ict} e^{-i pi sign(t) n/4} e^{i|x|^2/4t}.

    ``x`` has a trailing axis of length n (for n = 1 a bare array is accepted).
    """
    if t == 0:
        raise KernelUndefined("gamma_{c,t} is undefined at t = 0")
    x = np.asarray(x, dtype=float)
    r2 = x * x if n == 1 and (x.ndim == 0 or x.shape[-1] != 1) else np.sum(x * x, axis=-1)
    phase = -c * t - math.pi * math.copysign(1.0, t) * n / 4.0 + r2 / (4.0 * t)
    return (2.0 * abs(t)) ** (-n / 2.0) * np.exp(1j * phase)


def boundary_level(f: FlatField) -> float:
    """max |f| on the outermost grid shell relative to max |f|."""
    v = np.abs(f.values)
    peak = v.max()
    if peak == 0:
        return 0.0
    edge = 0.0
    for ax in range(f.dim):
        edge = max(edge, np.take(v, 0, axis=ax).max(), np.take(v, -1, axis=ax).max())
    return float(edge / peak)


def refinement_factor(L: float, N: int, t: float) -> int:
    """Power-of-two M with pi N M / (2L) >= 1.25 L / (2|t|)."""
    need = 1.25 * L * L / (math.pi * N * abs(t))
    return 1 if need <= 1 else 1 << math.ceil(math.log2(need))


def chirp_solution(f: FlatField, t: float, c: float = 0.0) -> FlatField:
    """u_t = gamma_{c,t} * f written as a chirp-modulated Fourier transform.

    u_t(x) = (2|t|)^{-n/2} e^{-ict} e^{-i pi sign(t) n/4} e^{i|x|^2/4t} h^(x/2t),
    h(y) = e^{i|y|^2/4t} f(y).  h^ is summed exactly at the off-grid
    frequencies x/2t with a chirp-z transform along each axis.  Samples of h
    fix h^ only modulo 2 pi/dx, so f is first refined by Fourier interpolation
    until that period covers the targets |x/2t| <= L/2|t|.
    """
    if t == 0:
        raise KernelUndefined("chirp path is undefined at t = 0")
    notes = []
    if boundary_level(f) > BOUNDARY_TOL:
        msg = f"field is {boundary_level(f):.2e} of its peak at the boundary; wrap-around expected"
        warnings.warn(msg, AliasWarning, stacklevel=2)
        notes.append("AliasWarning: " + msg)
    fine = f.values
    for ax, (ell, n) in enumerate(zip(f.L, f.N)):
        fine = resample(fine, n * refinement_factor(ell, n, t), axis=ax)
    fine_axes = [-ell + (2.0 * ell / m) * np.arange(m) for ell, m in zip(f.L, fine.shape)]
    r2 = sum(x * x for x in np.meshgrid(*fine_axes, indexing="ij", sparse=True))
    h = fine * np.exp(1j * r2 / (4.0 * t))
    for ax, (ell, d, n) in enumerate(zip(f.L, f.dx, f.N)):
        dfine = 2.0 * ell / h.shape[ax]
        h = exp_sum(h, -ell, dfine, -ell / (2.0 * t), d / (2.0 * t), n, sign=-1, axis=ax)
        h *= dfine / math.sqrt(2.0 * math.pi)
    n = f.dim
    pref = (2.0 * abs(t)) ** (-n / 2.0) * np.exp(1j * (-c * t - math.pi * math.copysign(1.0, t) * n / 4.0))
    return f.with_values(pref * np.exp(1j * f.r2() / (4.0 * t)) * h, notes)


def gaussian_oracle(a: complex, c: float, t: float, dim: int, N, L) -> FlatField:
    """Exact evolution of e^{-a|x|^2}: (1+4iat)^{-n/2} e^{-ict} e^{-a|x|^2/(1+4iat)}."""
    a = complex(a)
    if a.real <= 0:
        raise DomainError("Gaussian oracle needs Re(a) > 0")
    base = flat_grid(dim, N, L)
    z = 1.0 + 4j * a * t
    # principal branch; z stays in the right half plane so the root is continuous in t
    amp = z ** (-dim / 2.0) * np.exp(-1j * c * t)
    return base.with_values(amp * np.exp(-a * base.r2() / z))


def gaussian_field(a: complex, dim: int, N, L) -> FlatField:
    return gaussian_oracle(a, 0.0, 0.0, dim, N, L)
