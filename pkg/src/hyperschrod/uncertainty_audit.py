"""Beurling, Gelfand-Shilov, Cowling-Price and Hardy functionals on radial data.

"Finite" has no direct numerical meaning, so every integral is evaluated on
the windows [0, R/2] and [0, R]; when doubling the window multiplies the
partial integral by more than ``growth`` (1.5 by default) the value is
reported as DIVERGENT, with both partials kept for inspection.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from ._numerics import radial_weights
from .errors import FitError, GridError, ParamError, UnsupportedSpace
from .harish_chandra import xi
from .symmetric_space import RadialProfile, SpaceDescriptor, log_x_over_sinh

GROWTH = 1.5
EPS_CLS = 0.05
BEURLING_POINTS = 2001


class Verdict(str, enum.Enum):
    FORCES_ZERO = "FORCES_ZERO"
    BOUNDARY = "BOUNDARY"
    NO_CONCLUSION = "NO_CONCLUSION"


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    divergent: bool
    partial_half: float
    partial_full: float
    log_value: float = -math.inf

    def as_json(self):
        return {
            "value": "DIVERGENT" if self.divergent else self.value,
            "divergent": self.divergent,
            "partial_half": self.partial_half,
            "partial_full": self.partial_full,
            "log_value": self.log_value,
        }


@dataclass(frozen=True)
class DecayFit:
    alpha_hat: float
    A_hat: float
    r2: float
    window: Tuple[float, float]
    use_psi_prefactor: bool = False

    def as_json(self):
        return {"alpha_hat": self.alpha_hat, "A_hat": self.A_hat, "r2": self.r2,
                "window": list(self.window), "use_psi_prefactor": self.use_psi_prefactor}


@dataclass(frozen=True)
class AuditReport:
    beurling: FunctionalValue
    gs_values: Optional[Tuple[FunctionalValue, FunctionalValue]]
    cp_values: Optional[Tuple[FunctionalValue, FunctionalValue]]
    alpha_fit: DecayFit
    beta_fit: DecayFit
    t0: float
    threshold_product: float
    verdict: Verdict
    gs_product: Optional[float] = None
    warnings: Tuple[str, ...] = field(default=())

    def as_json(self):
        pair = lambda v: None if v is None else [v[0].as_json(), v[1].as_json()]
        return {
            "beurling": self.beurling.as_json(),
            "gs_values": pair(self.gs_values),
            "cp_values": pair(self.cp_values),
            "alpha_fit": self.alpha_fit.as_json(),
            "beta_fit": self.beta_fit.as_json(),
            "t0": self.t0,
            "threshold_product": self.threshold_product,
            "gs_product": self.gs_product,
            "verdict": self.verdict.value,
            "warnings": list(self.warnings),
        }


def _require_rank_one(space: SpaceDescriptor):
    if space.rank != 1:
        raise UnsupportedSpace(f"audit functionals are radial (rank one); {space.name} is rank {space.rank}")


def _log_measure(space: SpaceDescriptor, r: np.ndarray, dr: float) -> np.ndarray:
    """log of c_p * Simpson weight * delta(r); -inf at the origin."""
    w = radial_weights(r, dr)
    m = space.multiplicities[0]
    with np.errstate(divide="ignore"):
        # log sinh r = log r - log(r / sinh r)
        log_sinh = np.log(r) - log_x_over_sinh(r)
        return math.log(space.polar_constant) + np.log(w) + m * log_sinh


def _log_xi(space: SpaceDescriptor, r: np.ndarray) -> np.ndarray:
    if space.name == "H3":
        return log_x_over_sinh(r)
    with np.errstate(divide="ignore"):
        return np.log(xi(space, r))


def _log_abs(values) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(values))


def _windowed(log_terms: np.ndarray, r: np.ndarray, growth: float, reducer="sum") -> FunctionalValue:
    half = r <= 0.5 * r[-1] + 1e-12
    if reducer == "sum":
        lh = logsumexp(log_terms[half]) if np.any(np.isfinite(log_terms[half])) else -math.inf
        lf = logsumexp(log_terms) if np.any(np.isfinite(log_terms)) else -math.inf
    else:
        lh = float(np.max(log_terms[half]))
        lf = float(np.max(log_terms))
    return _classified(lh, lf, growth)


def _classified(lh: float, lf: float, growth: float) -> FunctionalValue:
    if lf == -math.inf:
        return FunctionalValue(0.0, False, 0.0, 0.0, -math.inf)
    divergent = lh == -math.inf or (lf - lh) > math.log(growth)
    with np.errstate(over="ignore"):
        vh, vf = float(np.exp(lh)), float(np.exp(lf))
    return FunctionalValue(vf, bool(divergent), vh, vf, float(lf))


def l1c_norm(f: RadialProfile, C: float, growth: float = GROWTH) -> FunctionalValue:
    """||f||_{1,C} = int_X |f| Xi e^{C sigma} dx."""
    if C < 0:
        raise ParamError("C must be nonnegative")
    _require_rank_one(f.space)
    r = f.radii
    terms = _log_abs(f.values) + _log_xi(f.space, r) + C * r + _log_measure(f.space, r, f.dr)
    return _windowed(terms, r, growth)


def l1_norm(f: RadialProfile) -> float:
    """int_X |f| dx."""
    _require_rank_one(f.space)
    r = f.radii
    terms = _log_abs(f.values) + _log_measure(f.space, r, f.dr)
    return float(np.exp(logsumexp(terms)))


def _stride(n_intervals: int, max_points: int) -> int:
    s = max(1, math.ceil(n_intervals / (max_points - 1)))
    while n_intervals % s:
        s += 1
    return s


def beurling_functional(f: RadialProfile, u: RadialProfile, t0: float, growth: float = GROWTH,
                        max_points: int = BEURLING_POINTS) -> FunctionalValue:
    """int int |f(x)||u(y)| Xi(x) Xi(y) e^{sigma(x) sigma(y)/2t0} dx dy over [0,R]^2.

    Summed in log space on a grid thinned to at most ``max_points`` radii.
    """
    if not f.same_grid(u):
        raise GridError("Beurling functional needs f and u on the same space and grid")
    if not t0 > 0:
        raise ParamError("t0 must be positive")
    _require_rank_one(f.space)
    s = _stride(f.radii.size - 1, max_points)
    r = f.radii[::s]
    dr = f.dr * s
    base = _log_xi(f.space, r) + _log_measure(f.space, r, dr)
    a = _log_abs(f.values[::s]) + base
    b = _log_abs(u.values[::s]) + base
    half = r <= 0.5 * r[-1] + 1e-12

    def total(mask):
        if not (np.any(np.isfinite(a[mask])) and np.any(np.isfinite(b[mask]))):
            return -math.inf
        rm = r[mask]
        grid = a[mask][:, None] + b[mask][None, :] + np.outer(rm, rm) / (2.0 * t0)
        return float(logsumexp(grid))

    return _classified(total(half), total(np.ones_like(half)), growth)


def gs_cp_functionals(f: RadialProfile, u: RadialProfile, mode: str, p: float, q: float = None,
                      alpha: float = None, beta: float = None, a: float = None, b: float = None,
                      growth: float = GROWTH):
    """Gelfand-Shilov or Cowling-Price hypotheses as a pair of windowed integrals.

    gs: int |f| Xi e^{(alpha^p/p) sigma^p} dx and int |u| Xi e^{(beta^q/q) sigma^q} dx,
        1 < p < inf, 1/p + 1/q = 1.
    cp: || |f| e^{a sigma^2} ||_{L^p} and || |u| e^{b sigma^2} ||_{L^q}, 1 <= p, q <= inf
        (the sup norm is windowed the same way).
    """
    if not f.same_grid(u):
        raise GridError("f and u must share space and grid")
    _require_rank_one(f.space)
    r = f.radii
    lm = _log_measure(f.space, r, f.dr)
    if mode == "gs":
        if not (1 < p < math.inf):
            raise ParamError("Gelfand-Shilov mode needs 1 < p < inf")
        q_conj = p / (p - 1.0)
        if q is not None and abs(q - q_conj) > 1e-12 * q_conj:
            raise ParamError("Gelfand-Shilov mode needs 1/p + 1/q = 1")
        if alpha is None or beta is None or alpha <= 0 or beta <= 0:
            raise ParamError("Gelfand-Shilov mode needs positive alpha and beta")
        lxi = _log_xi(f.space, r)
        with np.errstate(divide="ignore"):
            fs = _log_abs(f.values) + lxi + (alpha ** p / p) * r ** p + lm
            us = _log_abs(u.values) + lxi + (beta ** q_conj / q_conj) * r ** q_conj + lm
        return _windowed(fs, r, growth), _windowed(us, r, growth)
    if mode == "cp":
        if q is None or not (1 <= p <= math.inf and 1 <= q <= math.inf):
            raise ParamError("Cowling-Price mode needs 1 <= p, q <= inf")
        if a is None or b is None or a <= 0 or b <= 0:
            raise ParamError("Cowling-Price mode needs positive a and b")

        def lp(values, e, expo):
            logv = _log_abs(values) + e * r * r
            if math.isinf(expo):
                out = _windowed(logv, r, growth, reducer="max")
                return out
            out = _windowed(expo * logv + lm, r, growth)
            # report the L^p norm itself, i.e. the 1/p-th power of the integral
            root = lambda v: float(v) ** (1.0 / expo)
            return FunctionalValue(root(out.value), out.divergent, root(out.partial_half),
                                   root(out.partial_full), out.log_value / expo)

        return lp(f.values, a, p), lp(u.values, b, q)
    raise ParamError(f"unknown mode {mode!r}; expected 'gs' or 'cp'")


def decay_fit(f: RadialProfile, use_psi_prefactor: bool = False, r_min: float = 1.0,
              floor: float = 1e-12) -> DecayFit:
    """Least squares of log|f| (minus log psi if flagged) on -alpha r^2 + log A.

    The window is r in [r_min, r_cut], r_cut the last radius with |f| >= floor
    (relative to max |f|).  Samples are equally weighted in r.
    """
    amp = np.abs(f.values)
    peak = amp.max()
    if peak == 0:
        raise FitError("cannot fit the decay of the zero function")
    above = np.nonzero(amp >= floor * peak)[0]
    r_cut = f.radii[above[-1]]
    window = (f.radii >= r_min) & (f.radii <= r_cut)
    if np.sum(window) < 10:
        raise FitError("decay fit window has fewer than 10 samples")
    r = f.radii[window]
    y = np.log(amp[window])
    if use_psi_prefactor:
        y = y - 0.5 * f.space.multiplicities[0] * log_x_over_sinh(r)
    X = np.stack([-r * r, np.ones_like(r)], axis=1)
    (alpha_hat, log_A), *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ np.array([alpha_hat, log_A])
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - float(np.sum(resid ** 2) / ss_tot) if ss_tot > 0 else 1.0
    return DecayFit(float(alpha_hat), float(math.exp(log_A)), r2, (float(r[0]), float(r[-1])), use_psi_prefactor)


def _exponent(v) -> float:
    return v.alpha_hat if isinstance(v, DecayFit) else float(v)


def classify(alpha_fit, beta_fit, t0: float, eps: float = EPS_CLS, gs_exponents=None):
    """(threshold_product, verdict, gs_product) from fitted Gaussian exponents.

    threshold_product = 16 alpha beta t0^2; gs_product = 2 t0 alpha_GS beta_GS
    when GS exponents are supplied.
    """
    product = 16.0 * _exponent(alpha_fit) * _exponent(beta_fit) * t0 * t0
    if product > 1.0 + eps:
        verdict = Verdict.FORCES_ZERO
    elif abs(product - 1.0) <= eps:
        verdict = Verdict.BOUNDARY
    else:
        verdict = Verdict.NO_CONCLUSION
    gs_product = None
    if gs_exponents is not None:
        gs_product = 2.0 * t0 * gs_exponents[0] * gs_exponents[1]
    return product, verdict, gs_product


def gs_exponents_from_gaussian(alpha: float, beta: float, p: float = 2.0):
    """GS exponents matching e^{-alpha r^2}, e^{-beta r^2} at p = q = 2: alpha_GS^2/2 = alpha."""
    if p != 2.0:
        raise ParamError("Gaussian exponents convert to GS exponents only at p = 2")
    return math.sqrt(2.0 * alpha), math.sqrt(2.0 * beta)


def audit(f: RadialProfile, u: RadialProfile, t0: float, gs_p: float = None, cp: Tuple[float, float] = None,
          use_psi_prefactor: bool = True, growth: float = GROWTH, eps: float = EPS_CLS) -> AuditReport:
    if not f.same_grid(u):
        raise GridError("f and u must share space and grid")
    if not t0 > 0:
        raise ParamError("t0 must be positive")
    alpha_fit = decay_fit(f, use_psi_prefactor)
    beta_fit = decay_fit(u, use_psi_prefactor)
    beur = beurling_functional(f, u, t0, growth)
    gs_vals = gs_prod = None
    gs_exp = None
    if gs_p is not None:
        gs_exp = gs_exponents_from_gaussian(alpha_fit.alpha_hat, beta_fit.alpha_hat, gs_p)
        gs_vals = gs_cp_functionals(f, u, "gs", gs_p, alpha=gs_exp[0], beta=gs_exp[1], growth=growth)
    cp_vals = None
    if cp is not None:
        cp_vals = gs_cp_functionals(f, u, "cp", cp[0], cp[1], a=alpha_fit.alpha_hat,
                                    b=beta_fit.alpha_hat, growth=growth)
    product, verdict, gs_prod = classify(alpha_fit, beta_fit, t0, eps, gs_exp)
    return AuditReport(beur, gs_vals, cp_vals, alpha_fit, beta_fit, float(t0), product, verdict,
                       gs_prod, tuple(f.warnings) + tuple(u.warnings))
