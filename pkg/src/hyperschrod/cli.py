"""Command line driver.

Every subcommand is first turned into a config dict, validated, then run;
``run --config file.json`` feeds the same dict from disk.  Exit codes:
0 success, 2 input error, 3 numerical failure.  Errors go to stderr as JSON.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from . import complex_reduction as cr
from . import euclid_prop as ep
from . import harish_chandra as hc
from . import io
from . import radial_spectral as rs
from . import uncertainty_audit as ua
from .errors import HyperschrodError, InputError, NumericalError, ParamError
from .symmetric_space import SPACE_TAGS, build_space, condition_C, radial_grid

SCHEMA_VERSION = 1

# name -> (type, default, positive?)
_SCHEMA = {
    "check-space": {"space": (str, None, False), "r_max": (float, 20.0, True), "dr": (float, 1e-3, True),
                    "out": (str, None, False)},
    "propagate-euclid": {"n": (int, 1, True), "a_re": (float, 1.0, True), "a_im": (float, 0.0, False),
                         "c": (float, 0.0, False), "t": (float, 0.25, False), "grid_N": (int, 1024, True),
                         "grid_L": (float, 30.0, True), "method": (str, "multiplier", False),
                         "out": (str, None, False), "report": (str, None, False)},
    "propagate-radial": {"space": (str, "H3", False), "init": (str, None, False), "t": (float, None, False),
                         "lambda_max": (float, rs.LAMBDA_MAX, True), "dlambda": (float, rs.DLAMBDA, True),
                         "out": (str, None, False), "report": (str, None, False)},
    "extremal": {"space": (str, "H3", False), "alpha": (float, None, True), "beta": (float, None, True),
                 "out_prefix": (str, "extremal", False), "r_max": (float, 20.0, True), "dr": (float, 1e-3, True)},
    "audit": {"space": (str, "H3", False), "f": (str, None, False), "u": (str, None, False),
              "t0": (float, None, True), "gs": (float, None, True), "cp": (list, None, False),
              "growth": (float, ua.GROWTH, True), "eps": (float, ua.EPS_CLS, True),
              "use_psi_prefactor": (bool, True, False), "report": (str, None, False)},
}
_REQUIRED = {
    "check-space": ("space",),
    "propagate-euclid": (),
    "propagate-radial": ("init", "t", "out"),
    "extremal": ("alpha", "beta"),
    "audit": ("f", "u", "t0"),
}


def validate(config: dict) -> dict:
    """Fill defaults, coerce types and reject bad values before any computation."""
    if not isinstance(config, dict):
        raise ParamError("config must be a JSON object")
    version = config.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ParamError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")
    cmd = config.get("subcommand")
    if cmd not in _SCHEMA:
        raise ParamError(f"unknown subcommand {cmd!r}; expected one of {sorted(_SCHEMA)}")
    schema = _SCHEMA[cmd]
    unknown = set(config) - set(schema) - {"subcommand", "schema_version"}
    if unknown:
        raise ParamError(f"unknown keys for {cmd}: {sorted(unknown)}")
    out = {"subcommand": cmd, "schema_version": SCHEMA_VERSION}
    for key, (typ, default, positive) in schema.items():
        val = config.get(key, default)
        if val is None:
            if key in _REQUIRED[cmd]:
                raise ParamError(f"{cmd}: missing required parameter {key!r}")
            out[key] = None
            continue
        try:
            val = typ(val) if typ is not list else [float(v) for v in val]
        except (TypeError, ValueError) as exc:
            raise ParamError(f"{cmd}: parameter {key!r} has the wrong type ({exc})") from exc
        if typ in (int, float) and not math.isfinite(val):
            raise ParamError(f"{cmd}: parameter {key!r} must be finite")
        if positive and typ in (int, float) and val <= 0:
            raise ParamError(f"{cmd}: parameter {key!r} must be positive")
        out[key] = val
    if "space" in out and out["space"] not in SPACE_TAGS:
        raise InputError(f"unknown space tag {out['space']!r}")
    if cmd == "propagate-euclid":
        if out["n"] not in (1, 2):
            raise ParamError("propagate-euclid: n must be 1 or 2")
        if out["method"] not in ("multiplier", "chirp"):
            raise ParamError("propagate-euclid: method is 'multiplier' or 'chirp'")
        if out["method"] == "chirp" and out["t"] == 0:
            raise ParamError("propagate-euclid: the chirp path needs t != 0")
    if cmd == "audit" and out["cp"] is not None and len(out["cp"]) != 2:
        raise ParamError("audit: cp takes two exponents p q")
    return out


def _header(config):
    return {"config": config, "version": __version__}


def _check_space(cfg):
    space = build_space(cfg["space"])
    c = complex(np.asarray(hc.c_function(space, hc.minus_i_rho(space))).ravel()[0])
    r = radial_grid(cfg["r_max"], cfg["dr"], include_origin=False)
    H = hc.chamber_sample(space, r)
    report = _header(cfg)
    report.update({
        "space": space.name,
        "rank": space.rank,
        "rho": list(space.rho),
        "d": space.d,
        "is_complex": space.is_complex,
        "weyl_order": space.weyl_order,
        "killing_scale": space.killing_scale,
        "polar_constant": space.polar_constant,
        "c_minus_i_rho": [c.real, c.imag],
        "c_minus_i_rho_error": abs(c - 1.0),
        "condition_C": condition_C(space),
        "xi_bound_violations": hc.xi_bound_violations(space, H),
        "plancherel_ratio_range": list(hc.measure_asymptotic_constants(space)),
    })
    return report


def _propagate_euclid(cfg):
    a = complex(cfg["a_re"], cfg["a_im"])
    n, N, L, t, c = cfg["n"], cfg["grid_N"], cfg["grid_L"], cfg["t"], cfg["c"]
    f = ep.gaussian_field(a, n, N, L)
    u = ep.propagate_multiplier(f, t, c) if cfg["method"] == "multiplier" else ep.chirp_solution(f, t, c)
    oracle = ep.gaussian_oracle(a, c, t, n, N, L)
    if cfg["out"]:
        io.write_flat(cfg["out"], u)
    report = _header(cfg)
    report.update({"rel_l2_error_vs_oracle": ep.rel_l2_error(u, oracle),
                   "l2_norm_ratio": u.l2_norm() / f.l2_norm(),
                   "warnings": list(u.warnings)})
    return report


def _propagate_radial(cfg):
    space = build_space(cfg["space"])
    f = io.read_radial(cfg["init"], space)
    u = rs.propagate_radial(f, cfg["t"], cfg["lambda_max"], cfg["dlambda"])
    io.write_radial(cfg["out"], u)
    report = _header(cfg)
    report.update({"l2_norm_ratio": math.sqrt(rs.l2_norm_sq(u) / rs.l2_norm_sq(f)),
                   "warnings": list(u.warnings)})
    return report


def _extremal(cfg):
    space = build_space(cfg["space"])
    pair = cr.extremal_pair(space, cfg["alpha"], cfg["beta"], cfg["r_max"], cfg["dr"])
    prefix = cfg["out_prefix"]
    report = _header(cfg)
    report.update({"t0": pair.t0, "threshold_product": pair.threshold_product})
    if space.rank == 1:
        u = rs.propagate_radial(pair.f, pair.t0)
        const, spread, npts = cr.match_constant(u, pair.u_expected)
        beta_fit = ua.decay_fit(u, use_psi_prefactor=True)
        phase = cr.phase_quadratic_coefficient(u)
        io.write_radial(prefix + "_f.csv", pair.f)
        io.write_radial(prefix + "_u_expected.csv", pair.u_expected)
        io.write_radial(prefix + "_u_computed.csv", u)
        warn = list(u.warnings)
    else:
        u = None
        io.write_flat(prefix + "_f.csv", pair.f)
        io.write_flat(prefix + "_u_expected.csv", pair.u_expected)
        warn = []
    h, _ = cr.extremal_chirp_factor(space, cfg["alpha"], cfg["beta"],
                                    grid=None if space.rank == 1 else pair.f)
    fit = cr.hardy_equality_fit(h, cfg["beta"], cr.default_m(space))
    ok, defect, q = cr.skew_divisibility(fit, space, tol=1e-6, grid=h)
    report["hardy_fit"] = {"residual": fit.residual, "degree": fit.degree,
                           "skew_divisible": ok, "divisibility_defect": defect, "q": [q.real, q.imag]}
    if u is not None:
        report.update({
            "beta_hat": beta_fit.alpha_hat,
            "beta_rel_error": abs(beta_fit.alpha_hat - cfg["beta"]) / cfg["beta"],
            "phase_coefficient": phase,
            "phase_rel_error": abs(phase - 1.0 / (4.0 * pair.t0)) * 4.0 * pair.t0,
            "constant": [const.real, const.imag],
            "ratio_spread": spread,
            "ratio_points": npts,
        })
    else:
        io.write_flat(prefix + "_u_computed.csv", h)
        report["parity_defect"] = cr.weyl_parity_defect(cr.reduce_values(space, pair.f))
    report["warnings"] = warn
    io.dump_json(prefix + "_report.json", report)
    return report


def _audit(cfg):
    space = build_space(cfg["space"])
    f = io.read_radial(cfg["f"], space)
    u = io.read_radial(cfg["u"], space)
    rep = ua.audit(f, u, cfg["t0"], gs_p=cfg["gs"], cp=None if cfg["cp"] is None else tuple(cfg["cp"]),
                   use_psi_prefactor=cfg["use_psi_prefactor"], growth=cfg["growth"], eps=cfg["eps"])
    report = _header(cfg)
    report.update(rep.as_json())
    return report


_DISPATCH = {
    "check-space": _check_space,
    "propagate-euclid": _propagate_euclid,
    "propagate-radial": _propagate_radial,
    "extremal": _extremal,
    "audit": _audit,
}


def execute(config: dict) -> dict:
    cfg = validate(config)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = _DISPATCH[cfg["subcommand"]](cfg)
    extra = [f"{w.category.__name__}: {w.message}" for w in caught]
    if extra:
        merged = list(report.get("warnings", []))
        merged.extend(m for m in extra if m not in merged)
        report["warnings"] = merged
    return report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("USAGE", message)
        sys.exit(2)


def _emit_error(code, message):
    sys.stderr.write(json.dumps({"error": code, "message": str(message)}, sort_keys=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hyperschrod", description="Schroedinger propagation and uncertainty audits on symmetric spaces.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("check-space", help="c(-i rho), Xi bound violations, condition (C)")
    s.add_argument("space", choices=SPACE_TAGS)
    s.add_argument("--r-max", type=float, default=20.0)
    s.add_argument("--dr", type=float, default=1e-3)
    s.add_argument("--out", help="write the JSON report here instead of stdout")

    s = sub.add_parser("propagate-euclid", help="evolve a Gaussian on R^n")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--a-re", type=float, default=1.0)
    s.add_argument("--a-im", type=float, default=0.0)
    s.add_argument("--c", type=float, default=0.0)
    s.add_argument("--t", type=float, default=0.25)
    s.add_argument("--grid-N", type=int, default=1024)
    s.add_argument("--grid-L", type=float, default=30.0)
    s.add_argument("--method", choices=("multiplier", "chirp"), default="multiplier")
    s.add_argument("--out")
    s.add_argument("--report")

    s = sub.add_parser("propagate-radial", help="evolve a radial profile read from CSV")
    s.add_argument("--space", default="H3")
    s.add_argument("--init", required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--lambda-max", type=float, default=rs.LAMBDA_MAX)
    s.add_argument("--dlambda", type=float, default=rs.DLAMBDA)
    s.add_argument("--out", required=True)
    s.add_argument("--report")

    s = sub.add_parser("extremal", help="build and propagate the extremal pair")
    s.add_argument("--space", default="H3")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--out-prefix", default="extremal")
    s.add_argument("--r-max", type=float, default=20.0)
    s.add_argument("--dr", type=float, default=1e-3)

    s = sub.add_parser("audit", help="uncertainty functionals and verdict for (f, u(t0))")
    s.add_argument("--space", default="H3")
    s.add_argument("--f", required=True)
    s.add_argument("--u", required=True)
    s.add_argument("--t0", type=float, required=True)
    s.add_argument("--gs", type=float, metavar="P")
    s.add_argument("--cp", type=float, nargs=2, metavar=("P", "Q"))
    s.add_argument("--growth", type=float, default=ua.GROWTH)
    s.add_argument("--eps", type=float, default=ua.EPS_CLS)
    s.add_argument("--no-psi-prefactor", dest="use_psi_prefactor", action="store_false")
    s.add_argument("--report")

    s = sub.add_parser("run", help="run a JSON experiment config")
    s.add_argument("--config", required=True)
    return p


def _report_path(cfg):
    return cfg.get("out") if cfg["subcommand"] == "check-space" else cfg.get("report")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.subcommand == "run":
            try:
                with open(args.config) as fh:
                    config = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot load config {args.config}: {exc}") from exc
        else:
            config = {k: v for k, v in vars(args).items() if v is not None or k in ("out", "report")}
        report = execute(config)
    except InputError as exc:
        _emit_error(exc.code, exc)
        return 2
    except (NumericalError, FloatingPointError) as exc:
        _emit_error(getattr(exc, "code", "NUMERICAL_FAILURE"), exc)
        return 3
    except HyperschrodError as exc:
        _emit_error(exc.code, exc)
        return 3
    path = _report_path(report["config"])
    text = io.dump_json(path, report)
    if path is None and report["config"]["subcommand"] != "extremal":
        sys.stdout.write(text)
    elif report["config"]["subcommand"] == "extremal":
        sys.stdout.write(io.dump_json(None, {"report": report["config"]["out_prefix"] + "_report.json",
                                             "t0": report["t0"]}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
