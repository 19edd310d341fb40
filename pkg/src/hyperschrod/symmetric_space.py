"""Root data and elementary densities of the supported symmetric spaces.

Gauge: hyperbolic spaces H^n carry the curvature -1 metric, so the single
positive root evaluates to the geodesic radius (alpha(H) = r) and
rho = (n-1)/2.  For SL(3,C)/SU(3) the flat is identified with R^2 in an
orthonormal basis in which the three positive roots have unit length.

The Killing-form norm of a flat vector is ``killing_scale * |H|``.  It is
only needed where an inequality mixes |H| with an additive constant (the
upper bound on Xi); everything else is invariant once radii and times are
rescaled together (alpha -> alpha / k^2, t -> k^2 t keeps 16 alpha beta t^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .errors import DomainError, GridError, InputError, UnsupportedSpace

SPACE_TAGS = ("H2", "H3", "H4", "H5", "SL3C")

# below this |alpha(H)| the ratio x/sinh(x) is evaluated by its Taylor series
_SERIES_CUTOFF = 1e-4
_WALL_TOL = 1e-12


@dataclass(frozen=True)
class Root:
    coeffs: Tuple[float, ...]
    m: int
    m2: int = 0


@dataclass(frozen=True)
class SpaceDescriptor:
    name: str
    rank: int
    positive_roots: Tuple[Root, ...]
    rho: Tuple[float, ...]
    d: int
    is_complex: bool
    killing_scale: float
    # constant c in dx = c * delta(H) dk dH, fixed by the Plancherel identity
    polar_constant: float

    @property
    def root_matrix(self) -> np.ndarray:
        return np.array([a.coeffs for a in self.positive_roots], dtype=float)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([a.m for a in self.positive_roots], dtype=float)

    @property
    def rho_vector(self) -> np.ndarray:
        return np.array(self.rho, dtype=float)

    @property
    def rho_norm(self) -> float:
        return float(np.linalg.norm(self.rho))

    @property
    def rho_norm_sq(self) -> float:
        return float(np.dot(self.rho, self.rho))

    @property
    def weyl_order(self) -> int:
        return len(weyl_group(self))

    def __repr__(self) -> str:
        return f"SpaceDescriptor({self.name!r})"


def half_sum(roots) -> np.ndarray:
    return 0.5 * sum(r.m * np.asarray(r.coeffs, dtype=float) for r in roots)


def build_space(name: str) -> SpaceDescriptor:
    """Return the root data for one of ``SPACE_TAGS``."""
    if name in ("H2", "H3", "H4", "H5"):
        n = int(name[1])
        roots = (Root((1.0,), n - 1, 0),)
        killing = math.sqrt(2.0 * (n - 1))
    elif name == "SL3C":
        s = math.sqrt(3.0) / 2.0
        roots = (Root((1.0, 0.0), 2), Root((-0.5, s), 2), Root((0.5, s), 2))
        killing = math.sqrt(6.0)
    else:
        raise UnsupportedSpace(f"unknown space tag {name!r}; expected one of {SPACE_TAGS}")
    rank = len(roots[0].coeffs)
    rho = tuple(float(x) for x in half_sum(roots))
    total_mult = sum(r.m + r.m2 for r in roots)
    return SpaceDescriptor(
        name=name,
        rank=rank,
        positive_roots=roots,
        rho=rho,
        d=_count_indivisible(roots),
        is_complex=all(r.m == 2 and r.m2 == 0 for r in roots),
        killing_scale=killing,
        polar_constant=2.0**total_mult / (2.0 * math.pi) ** rank,
    )


def _count_indivisible(roots) -> int:
    vecs = [np.asarray(r.coeffs) for r in roots]
    count = 0
    for v in vecs:
        if not any(np.allclose(v, 2.0 * w) for w in vecs):
            count += 1
    return count


def as_flat(space: SpaceDescriptor, H) -> np.ndarray:
    """Flat points as an array with trailing axis ``rank``.

    For rank one a bare scalar or array of radii is accepted.
    """
    H = np.asarray(H, dtype=float)
    if space.rank == 1:
        if H.ndim == 0 or H.shape[-1] != 1:
            H = H[..., None]
        return H
    if H.shape[-1] != space.rank:
        raise InputError(f"{space.name}: flat points need a trailing axis of length {space.rank}")
    return H


def root_values(space: SpaceDescriptor, H) -> np.ndarray:
    """alpha(H) for every positive root, shape (..., n_roots)."""
    return as_flat(space, H) @ space.root_matrix.T


def in_closed_chamber(space: SpaceDescriptor, H) -> np.ndarray:
    return np.all(root_values(space, H) >= -_WALL_TOL, axis=-1)


def _check_chamber(space, H):
    if not np.all(in_closed_chamber(space, H)):
        raise DomainError(f"{space.name}: point outside the closed positive chamber")


def delta_density(space: SpaceDescriptor, H) -> np.ndarray:
    """prod_alpha sinh(alpha(H))^{m_alpha} on the closed chamber."""
    _check_chamber(space, H)
    a = np.maximum(root_values(space, H), 0.0)
    return np.prod(np.sinh(a) ** space.multiplicities, axis=-1)


def delta_density_asymptotic_form(space: SpaceDescriptor, H) -> np.ndarray:
    """Same density written as e^{2 rho(H)} prod((1 - e^{-2 alpha})/2)^m."""
    _check_chamber(space, H)
    a = np.maximum(root_values(space, H), 0.0)
    rho_H = as_flat(space, H) @ space.rho_vector
    return np.exp(2.0 * rho_H) * np.prod((-np.expm1(-2.0 * a) / 2.0) ** space.multiplicities, axis=-1)


def x_over_sinh(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0, safe / np.sinh(safe))


def log_x_over_sinh(x) -> np.ndarray:
    """log(x/sinh x), accurate for large |x| where sinh overflows."""
    x = np.abs(np.asarray(x, dtype=float))
    big = x > 20.0
    xs = np.where(big, 1.0, x)
    xb = np.where(big, x, 21.0)
    return np.where(big, np.log(2.0 * xb) - xb - np.log1p(-np.exp(-2.0 * xb)), np.log(x_over_sinh(xs)))


def psi(space: SpaceDescriptor, H) -> np.ndarray:
    """prod (alpha(H)/sinh alpha(H))^{m/2}; equals 1 on the walls' limit at H = 0."""
    a = root_values(space, H)
    return np.exp(np.sum(0.5 * space.multiplicities * log_x_over_sinh(a), axis=-1))


def structure_functions(space: SpaceDescriptor, H):
    """(eta, pi, psi) at H; eta and pi carry no multiplicities."""
    a = root_values(space, H)
    eta = np.prod(np.sinh(a), axis=-1)
    pi = np.prod(a, axis=-1)
    return eta, pi, psi(space, H)


def condition_C(space: SpaceDescriptor) -> bool:
    """True iff every positive indivisible root has m != 1 or 2*alpha is a root."""
    vecs = [np.asarray(r.coeffs) for r in space.positive_roots]
    for root, v in zip(space.positive_roots, vecs):
        if any(np.allclose(v, 2.0 * w) for w in vecs):
            continue
        doubled = root.m2 > 0 or any(np.allclose(2.0 * v, w) for w in vecs)
        if root.m == 1 and not doubled:
            return False
    return True


def reflection_matrix(alpha) -> np.ndarray:
    a = np.asarray(alpha, dtype=float)
    return np.eye(a.size) - 2.0 * np.outer(a, a) / np.dot(a, a)


def weyl_group(space: SpaceDescriptor):
    """All Weyl group elements as (matrix, det) pairs, identity first."""
    gens = [reflection_matrix(r.coeffs) for r in space.positive_roots]
    elems = [np.eye(space.rank)]
    frontier = list(elems)
    while frontier:
        new = []
        for g in frontier:
            for s in gens:
                h = s @ g
                if not any(np.allclose(h, e) for e in elems):
                    elems.append(h)
                    new.append(h)
        frontier = new
    return [(g, int(round(np.linalg.det(g)))) for g in elems]


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """A K-invariant function sampled on a uniform grid of geodesic radii."""

    space: SpaceDescriptor
    radii: np.ndarray
    values: np.ndarray
    warnings: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if r.ndim != 1 or r.size < 3 or v.shape != r.shape:
            raise GridError("radii and values must be 1-D arrays of equal length (>= 3)")
        steps = np.diff(r)
        dr = steps.mean()
        if dr <= 0 or np.max(np.abs(steps - dr)) > 1e-9 * max(dr, 1.0):
            raise GridError("radial grid must be uniform and strictly increasing")
        if abs(r[0]) > 1e-9 * dr and abs(r[0] - dr) > 1e-9 * dr:
            raise GridError("radial grid must start at 0 or at one step")
        if not np.all(np.isfinite(v)):
            raise InputError("radial profile contains non-finite values")
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "values", v)

    @property
    def dr(self) -> float:
        return float((self.radii[-1] - self.radii[0]) / (self.radii.size - 1))

    @property
    def includes_origin(self) -> bool:
        return abs(self.radii[0]) < 0.5 * self.dr

    @property
    def r_max(self) -> float:
        return float(self.radii[-1])

    def with_values(self, values, warnings=()) -> "RadialProfile":
        return RadialProfile(self.space, self.radii, values, tuple(self.warnings) + tuple(warnings))

    def same_grid(self, other: "RadialProfile") -> bool:
        return (
            self.space.name == other.space.name
            and self.radii.shape == other.radii.shape
            and np.allclose(self.radii, other.radii, rtol=0, atol=1e-12 * max(1.0, self.r_max))
        )


def radial_grid(r_max: float = 20.0, dr: float = 1e-3, include_origin: bool = True) -> np.ndarray:
    n = int(round(r_max / dr))
    if n < 2 or abs(n * dr - r_max) > 1e-9 * r_max:
        raise GridError(f"r_max={r_max} is not a multiple of dr={dr}")
    k = np.arange(0 if include_origin else 1, n + 1)
    return k * dr


def radial_profile(space: SpaceDescriptor, func, r_max: float = 20.0, dr: float = 1e-3,
                   include_origin: bool = True) -> RadialProfile:
    r = radial_grid(r_max, dr, include_origin)
    return RadialProfile(space, r, np.asarray(func(r), dtype=complex))
