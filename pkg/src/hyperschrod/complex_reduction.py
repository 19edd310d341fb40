"""Flat reduction for complex spaces and the extremal (equality-case) family.

For complex G the radial Laplacian is (1/eta)(Delta_a - |rho|^2) eta, so eta*u
solves the flat Schroedinger equation with damping c = |rho|^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import FitError, InputError, UnsupportedSpace
from .euclid_prop import FlatField, flat_grid, propagate_multiplier
from .symmetric_space import (
    RadialProfile,
    SpaceDescriptor,
    as_flat,
    psi,
    radial_grid,
    root_values,
    weyl_group,
)

FIT_FLOOR = 1e-12
MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class SkewFlatFunction:
    space: SpaceDescriptor
    field: FlatField
    parity: str = "skew"


def default_flat_grid(space: SpaceDescriptor, N=None, L=None) -> FlatField:
    """Rank 1: N = 4096 on [-40, 40).  Rank 2: 256^2 nodes, x in [-24, 24), dy = sqrt(3) dx.

    The rank-2 aspect ratio makes the triangular sublattice (i = j mod 2)
    invariant under S_3, which the parity check relies on.
    """
    if space.rank == 1:
        return flat_grid(1, 4096 if N is None else N, 40.0 if L is None else L)
    n = 256 if N is None else int(N)
    lx = 24.0 if L is None else float(L)
    return flat_grid(2, (n, n), (lx, math.sqrt(3.0) * lx))


def _flat_points(grid: FlatField) -> np.ndarray:
    if grid.dim == 1:
        return grid.axes()[0][:, None]
    x, y = np.meshgrid(*grid.axes(), indexing="ij")
    return np.stack([x, y], axis=-1)


def eta_on_grid(space: SpaceDescriptor, grid: FlatField) -> np.ndarray:
    """eta(H) = prod sinh alpha(H) on every node, signs included (W-skew)."""
    a = root_values(space, _flat_points(grid))
    return np.prod(np.sinh(a), axis=-1)


def _radial_interpolant(f: RadialProfile):
    r = f.radii
    v = f.values
    if not f.includes_origin:
        # even extension fills in r = 0 smoothly
        r = np.concatenate([-r[:3][::-1], r])
        v = np.concatenate([v[:3][::-1], v])
    spline_re = CubicSpline(r, v.real)
    spline_im = CubicSpline(r, v.imag)
    r_hi = f.r_max

    def evaluate(rho):
        rho = np.asarray(rho, dtype=float)
        inside = rho <= r_hi
        rc = np.where(inside, rho, 0.0)
        out = spline_re(rc) + 1j * spline_im(rc)
        return np.where(inside, out, 0.0)

    return evaluate


def flat_reduce(f, N=None, L=None, grid: Optional[FlatField] = None) -> SkewFlatFunction:
    """g(H) = eta(H) f(H) on the whole flat.

    ``f`` is a RadialProfile (a function of |H|, spline-interpolated and
    extended by zero past r_max) or, for rank 2, W-invariant samples given
    as a FlatField on the grid itself.
    """
    space = f.space if isinstance(f, RadialProfile) else None
    if isinstance(f, tuple):
        space, f = f
    if space is None or not space.is_complex:
        raise UnsupportedSpace("flat reduction requires a complex space")
    if isinstance(f, FlatField):
        grid = f
        values = f.values
    else:
        grid = default_flat_grid(space, N, L) if grid is None else grid
        radius = np.sqrt(grid.r2())
        values = _radial_interpolant(f)(np.broadcast_to(radius, grid.N))
    g = eta_on_grid(space, grid) * values
    return SkewFlatFunction(space, grid.with_values(g))


def reduce_values(space: SpaceDescriptor, field: FlatField) -> SkewFlatFunction:
    """eta * field for W-invariant samples already on a flat grid."""
    return flat_reduce((space, field))


def divide_eta(skew: SkewFlatFunction, wall_tol=1e-8) -> np.ndarray:
    """g / eta off the walls, NaN on them."""
    eta = eta_on_grid(skew.space, skew.field)
    with np.errstate(all="ignore"):
        return np.where(np.abs(eta) > wall_tol, skew.field.values / eta, np.nan)


def _rank2_orbit_indices(grid: FlatField, w: np.ndarray):
    nx, ny = grid.N
    dx, dy = grid.dx
    i, j = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    p = i - nx // 2
    q = j - ny // 2
    on_lattice = (p - q) % 2 == 0
    H = np.stack([p * dx, q * dy], axis=-1)
    Hw = H @ w.T
    pw = Hw[..., 0] / dx
    qw = Hw[..., 1] / dy
    ip = np.rint(pw).astype(int) + nx // 2
    jq = np.rint(qw).astype(int) + ny // 2
    ok = (
        on_lattice
        & (np.abs(pw - np.rint(pw)) < 1e-9)
        & (np.abs(qw - np.rint(qw)) < 1e-9)
        & (ip >= 0) & (ip < nx) & (jq >= 0) & (jq < ny)
    )
    return ok, i[ok], j[ok], ip[ok], jq[ok]


def weyl_parity_defect(skew: SkewFlatFunction) -> float:
    """max |g(wH) - det(w) g(H)| / max |g| over nodes whose orbit stays on the grid."""
    g = skew.field.values
    scale = np.max(np.abs(g))
    if scale == 0:
        return 0.0
    sign = {"skew": 1, "invariant": 0}[skew.parity]
    worst = 0.0
    if skew.field.dim == 1:
        # x_j and x_{N-j} are mirror images; x_0 = -L has no partner
        n = g.size
        mirrored = g[1:][::-1]
        target = -g[1:] if sign else g[1:]
        return float(np.max(np.abs(mirrored - target)) / scale) if n > 1 else 0.0
    for w, det in weyl_group(skew.space):
        ok, i, j, ip, jq = _rank2_orbit_indices(skew.field, w)
        expected = (det if sign else 1) * g[i, j]
        worst = max(worst, float(np.max(np.abs(g[ip, jq] - expected), initial=0.0)))
    return worst / scale


# ---------------------------------------------------------------- extremal family


@dataclass(frozen=True, eq=False)
class ExtremalPair:
    f: object
    u_expected: object
    t0: float
    alpha: float
    beta: float

    @property
    def threshold_product(self) -> float:
        return 16.0 * self.alpha * self.beta * self.t0 ** 2


def extremal_pair(space: SpaceDescriptor, alpha: float, beta: float, r_max=20.0, dr=1e-3,
                  grid: Optional[FlatField] = None) -> ExtremalPair:
    """f = psi e^{-a|H|^2} e^{-i sqrt(ab)|H|^2}, t0 = (16ab)^{-1/2}, u ~ psi e^{-b|H|^2} e^{i|H|^2/4t0}.

    Rank 1 returns RadialProfiles; rank 2 returns W-invariant FlatFields.
    """
    if not space.is_complex:
        raise UnsupportedSpace("the extremal family is constructed for complex spaces")
    if not (alpha > 0 and beta > 0):
        raise InputError("alpha and beta must be positive")
    t0 = 1.0 / math.sqrt(16.0 * alpha * beta)
    k = math.sqrt(alpha * beta)

    def f_of(H, r2):
        return psi(space, H) * np.exp(-alpha * r2) * np.exp(-1j * k * r2)

    def u_of(H, r2):
        return psi(space, H) * np.exp(-beta * r2) * np.exp(1j * r2 / (4.0 * t0))

    if space.rank == 1:
        r = radial_grid(r_max, dr)
        f = RadialProfile(space, r, f_of(r, r * r))
        u = RadialProfile(space, r, u_of(r, r * r))
    else:
        grid = default_flat_grid(space) if grid is None else grid
        H = _flat_points(grid)
        r2 = np.sum(H * H, axis=-1)
        f = grid.with_values(f_of(H, r2))
        u = grid.with_values(u_of(H, r2))
    return ExtremalPair(f, u, t0, float(alpha), float(beta))


def match_constant(u_computed, u_shape, rel_floor=1e-10) -> Tuple[complex, float, int]:
    """Single complex constant c with u_computed ~ c * u_shape.

    c is the ratio at the node of maximal |u_computed|; the returned spread is
    max |ratio/c - 1| over nodes where |u_shape| >= rel_floor * max |u_shape|.
    """
    a = np.ravel(getattr(u_computed, "values", u_computed))
    b = np.ravel(getattr(u_shape, "values", u_shape))
    k = int(np.argmax(np.abs(a)))
    c = a[k] / b[k]
    window = np.abs(b) >= rel_floor * np.max(np.abs(b))
    spread = float(np.max(np.abs(a[window] / (c * b[window]) - 1.0)))
    return complex(c), spread, int(np.sum(window))


def phase_quadratic_coefficient(u: RadialProfile, r_lo=1.0, rel_floor=1e-8) -> float:
    """Slope of the unwrapped phase of u against r^2 (least squares)."""
    amp = np.abs(u.values)
    window = (u.radii >= r_lo) & (amp >= rel_floor * amp.max())
    r = u.radii[window]
    phase = np.unwrap(np.angle(u.values[window]))
    slope, _ = np.polyfit(r * r, phase, 1)
    return float(slope)


def extremal_chirp_factor(space: SpaceDescriptor, alpha: float, beta: float, grid: Optional[FlatField] = None):
    """eta u(t0) e^{-i|x|^2/4t0}, computed from eta f by the flat propagator (c = |rho|^2).

    At the extremal time this is a polynomial times e^{-beta|x|^2}.
    """
    pair = extremal_pair(space, alpha, beta, grid=grid)
    if space.rank == 1:
        g = flat_reduce(pair.f, grid=grid if grid is not None else default_flat_grid(space, N=2048))
    else:
        g = reduce_values(space, pair.f)
    v = propagate_multiplier(g.field, pair.t0, space.rho_norm_sq)
    h = v.values * np.exp(-1j * v.r2() / (4.0 * pair.t0))
    return v.with_values(h), pair


# ---------------------------------------------------------------- Hardy equality fit


@dataclass(frozen=True)
class HardyFit:
    coeffs: np.ndarray  # rank 1: ascending powers; rank 2: dict-like array over (i, j)
    exponents: Tuple[Tuple[int, ...], ...]
    residual: float
    degree: int
    window_points: int

    def polynomial(self, *x):
        out = 0.0
        for c, e in zip(self.coeffs, self.exponents):
            term = c
            for xi, k in zip(x, e):
                term = term * xi ** k
            out = out + term
        return out


def default_m(space: SpaceDescriptor) -> int:
    """Smallest m with 2m >= |Sigma^+|."""
    return math.ceil(len(space.positive_roots) / 2)


def hardy_equality_fit(h: FlatField, a: float, m: int = 1) -> HardyFit:
    """Least squares h ~ P e^{-a|x|^2} with deg P <= 2m on the window e^{-a|x|^2} >= 1e-12.

    The misfit is measured on h itself (relative L^2), not on h e^{a|x|^2}:
    dividing by the Gaussian would inflate roundoff in the tails by up to 1e12.
    Coordinates are scaled to the window before building the Vandermonde matrix.
    """
    if not a > 0:
        raise InputError("a must be positive")
    if m < 0:
        raise InputError("m must be nonnegative")
    gauss = np.exp(-a * h.r2())
    gauss = np.broadcast_to(gauss, h.N)
    window = gauss >= FIT_FLOOR
    deg = 2 * m
    exps = [e for e in np.ndindex(*(deg + 1,) * h.dim) if sum(e) <= deg]
    npts = int(np.sum(window))
    if npts < 2 * len(exps):
        raise FitError(f"fit window has {npts} nodes for {len(exps)} unknowns")
    coords = [np.broadcast_to(c, h.N)[window] for c in h.coords()]
    scale = math.sqrt(-math.log(FIT_FLOOR) / a)
    gw = gauss[window]
    A = np.stack([gw * np.prod([(x / scale) ** k for x, k in zip(coords, e)], axis=0) for e in exps], axis=1)
    target = h.values[window]
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise FitError(f"Vandermonde system is ill-conditioned (cond = {cond:.2e})")
    sol, *_ = np.linalg.lstsq(A, target, rcond=None)
    resid = float(np.linalg.norm(A @ sol - target) / np.linalg.norm(target))
    coeffs = np.array([c / scale ** sum(e) for c, e in zip(sol, exps)])
    return HardyFit(coeffs, tuple(tuple(int(k) for k in e) for e in exps), resid, deg, npts)


def skew_divisibility(fit: HardyFit, space: SpaceDescriptor, tol=1e-8, grid: Optional[FlatField] = None):
    """Check P = q * pi with q constant.

    Rank 1: P(0) and every even coefficient vanish relative to the largest
    coefficient.  Rank 2: distance from P to the span of pi on the grid.
    Returns (passes, defect, q).
    """
    if space.rank == 1:
        c = fit.coeffs
        big = np.max(np.abs(c))
        even = np.array([abs(ci) for ci, e in zip(c, fit.exponents) if e[0] % 2 == 0])
        defect = float(np.max(even) / big) if even.size else 0.0
        q = complex(dict(zip(fit.exponents, c)).get((1,), 0.0))
        return defect <= tol, defect, q
    grid = default_flat_grid(space) if grid is None else grid
    H = _flat_points(grid).reshape(-1, 2)
    # restrict to a disc where the fit was informative
    rad = np.sqrt(np.sum(H * H, axis=-1))
    H = H[rad <= min(grid.L)]
    P = fit.polynomial(H[:, 0], H[:, 1])
    pi = np.prod(as_flat(space, H) @ space.root_matrix.T, axis=-1)
    q = np.vdot(pi, P) / np.vdot(pi, pi)
    defect = float(np.linalg.norm(P - q * pi) / np.linalg.norm(P))
    return defect <= tol, defect, complex(q)
