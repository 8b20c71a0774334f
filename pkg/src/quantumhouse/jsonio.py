"""Repo-wide density-matrix JSON format.

A density matrix travels as {"dims": [dA, dB], "re": [[..]], "im": [[..]]}
with row-major real and imaginary parts. Parsing validates density-matrix
invariants unless explicitly disabled.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .linalg import DensityMatrix, density


def density_to_json(dm: DensityMatrix) -> dict:
    return {
        "dims": list(dm.dims),
        "re": dm.mat.real.tolist(),
        "im": dm.mat.imag.tolist(),
    }


def density_from_json(obj: dict, *, validate: bool = True, tol: float | None = None) -> DensityMatrix:
    try:
        dims = [int(d) for d in obj["dims"]]
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed density-matrix JSON: {exc}") from exc
    if re.shape != im.shape or re.ndim != 2:
        raise ValueError(f"re/im shapes differ or are not 2-D: {re.shape} vs {im.shape}")
    dim = math.prod(dims)
    if re.shape != (dim, dim):
        raise ValueError(f"matrix shape {re.shape} does not match dims {dims}")
    return density(re + 1j * im, dims, tol=tol, validate=validate)


def dumps(dm: DensityMatrix) -> str:
    return json.dumps(density_to_json(dm))


def loads(text: str, *, validate: bool = True, tol: float | None = None) -> DensityMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValueError("density-matrix JSON must be an object")
    return density_from_json(obj, validate=validate, tol=tol)


def load_path(path: str, *, validate: bool = True, tol: float | None = None) -> DensityMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read(), validate=validate, tol=tol)
