"""CSV and JSON artifacts: one header line, 17 significant digits, sorted keys."""
from __future__ import annotations

import json

import numpy as np

from .errors import GridError, InputError
from .euclid_prop import FlatField
from .symmetric_space import RadialProfile, SpaceDescriptor

FLOAT_FMT = "%.17g"


def _write(path, header, columns):
    data = np.column_stack(columns)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        np.savetxt(fh, data, fmt=FLOAT_FMT, delimiter=",")


def write_radial(path, f: RadialProfile):
    v = f.values
    _write(path, ["r", "re", "im", "abs"], [f.radii, v.real, v.imag, np.abs(v)])


def write_spectral(path, F):
    v = F.values
    _write(path, ["lambda", "re", "im"], [F.lambdas, v.real, v.imag])


def write_flat(path, f: FlatField):
    v = f.values
    if f.dim == 1:
        _write(path, ["x", "re", "im", "abs"], [f.axes()[0], v.real, v.imag, np.abs(v)])
        return
    x1, x2 = np.meshgrid(*f.axes(), indexing="ij")
    _write(path, ["x1", "x2", "re", "im", "abs"],
           [x1.ravel(), x2.ravel(), v.real.ravel(), v.imag.ravel(), np.abs(v).ravel()])


def _read(path, expected):
    try:
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: malformed numeric data ({exc})") from exc
    if header[: len(expected)] != expected:
        raise InputError(f"{path}: header {header} does not start with {expected}")
    return data


def read_radial(path, space: SpaceDescriptor) -> RadialProfile:
    data = _read(path, ["r", "re", "im"])
    try:
        return RadialProfile(space, data[:, 0], data[:, 1] + 1j * data[:, 2])
    except GridError as exc:
        raise GridError(f"{path}: {exc}") from exc


def dump_json(path, payload):
    text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=True) + "\n"
    if path is None:
        return text
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return text
