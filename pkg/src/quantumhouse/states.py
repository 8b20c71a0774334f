"""Constructors for the named states, ensembles and the pseudo-pure map.

Rational matrix entries (halves, thirds, sixths) are built from integer
fractions and converted to floating point once, so golden tests can compare
at 1e-12 tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import DensityMatrix, density, tensor

_SQRT2 = math.sqrt(2.0)

# Single-qubit state vectors: computational, Hadamard and circular bases.
KETS: dict[str, np.ndarray] = {
    "0": np.array([1, 0], dtype=np.complex128),
    "1": np.array([0, 1], dtype=np.complex128),
    "+": np.array([1, 1], dtype=np.complex128) / _SQRT2,
    "-": np.array([1, -1], dtype=np.complex128) / _SQRT2,
    "+i": np.array([1, 1j], dtype=np.complex128) / _SQRT2,
    "-i": np.array([1, -1j], dtype=np.complex128) / _SQRT2,
}

BASES: dict[str, tuple[str, str]] = {
    "computational": ("0", "1"),
    "hadamard": ("+", "-"),
    "circular": ("+i", "-i"),
}


def ket(label: str) -> np.ndarray:
    """Multi-qubit basis vector for a bit string, or a single-qubit label."""
    if label in KETS:
        return KETS[label].copy()
    if label and all(c in "01" for c in label):
        v = np.zeros(2 ** len(label), dtype=np.complex128)
        v[int(label, 2)] = 1.0
        return v
    raise ValueError(f"unknown ket label {label!r}")


def basis_matrix(name: str) -> np.ndarray:
    """2x2 matrix whose columns are the named measurement basis."""
    a, b = BASES[name]
    return np.column_stack([KETS[a], KETS[b]])


def _diag(fracs, dims) -> DensityMatrix:
    return density(np.diag([float(Fraction(*f)) for f in fracs]).astype(complex), dims)


def _epr_matrix() -> np.ndarray:
    m = np.zeros((4, 4), dtype=np.complex128)
    m[np.ix_([0, 3], [0, 3])] = 0.5
    return m


def _plus_i_density(sign: int) -> np.ndarray:
    # |+-i><+-i| has rational (Gaussian) entries.
    return np.array([[0.5, -0.5j * sign], [0.5j * sign, 0.5]], dtype=np.complex128)


_BUILDERS = {
    # Bipartite 2x2 states.
    "epr": lambda: density(_epr_matrix(), (2, 2)),
    "classical-corr": lambda: _diag([(1, 2), (0, 1), (0, 1), (1, 2)], (2, 2)),
    "eq1": lambda: _diag([(1, 3), (1, 6), (1, 6), (1, 3)], (2, 2)),
    "eq3": lambda: _diag([(1, 6), (1, 3), (1, 3), (1, 6)], (2, 2)),
    "maxmix4": lambda: density(np.eye(4, dtype=np.complex128) / 4, (2, 2)),
    "zero-maxmix": lambda: density(
        tensor(np.diag([1.0, 0.0]).astype(complex), np.eye(2, dtype=np.complex128) / 2), (2, 2)
    ),
    "maxmix-zero": lambda: density(
        tensor(np.eye(2, dtype=np.complex128) / 2, np.diag([0.0, 1.0]).astype(complex)), (2, 2)
    ),
    # Single-qubit states.
    "maxmix2": lambda: density(np.eye(2, dtype=np.complex128) / 2, (2,)),
    "zero": lambda: density(np.diag([1.0, 0.0]).astype(complex), (2,)),
    "one": lambda: density(np.diag([0.0, 1.0]).astype(complex), (2,)),
    "plus": lambda: density(np.full((2, 2), 0.5, dtype=np.complex128), (2,)),
    "minus": lambda: density(np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=np.complex128), (2,)),
    "plus-i": lambda: density(_plus_i_density(+1), (2,)),
    "minus-i": lambda: density(_plus_i_density(-1), (2,)),
}

NAMED_STATE_IDS = tuple(sorted(_BUILDERS))


def make(tag: str) -> DensityMatrix:
    """Build a named state by its stable string id (see NAMED_STATE_IDS)."""
    try:
        builder = _BUILDERS[tag]
    except KeyError:
        raise ValueError(f"unknown state id {tag!r}; known: {', '.join(NAMED_STATE_IDS)}") from None
    return builder()


def maxmix(dim: int, dims=None) -> DensityMatrix:
    return density(np.eye(dim, dtype=np.complex128) / dim, dims if dims is not None else (dim,))


@dataclass(frozen=True)
class Ensemble:
    """A weighted list of pure state vectors realizing a density matrix."""

    items: tuple[tuple[float, np.ndarray], ...]
    dims: tuple[int, ...]

    def __post_init__(self):
        total = sum(p for p, _ in self.items)
        if any(p < 0 for p, _ in self.items) or abs(total - 1.0) > 1e-9:
            raise ValueError("ensemble weights must be nonnegative and sum to 1")
        dim = math.prod(self.dims)
        for _, v in self.items:
            if v.shape != (dim,):
                raise ValueError(f"state vector shape {v.shape} does not match dims {self.dims}")
            if abs(np.linalg.norm(v) - 1.0) > 1e-9:
                raise ValueError("ensemble vectors must be unit norm")


def two_qubit_ket(alice: str, bob: str) -> np.ndarray:
    return np.kron(KETS[alice], KETS[bob])


# The six equal-weight preparations Charlie announces in the concrete game
# flavor; their Alice marginals run over all three conjugate bases.
EQ2_ITEM_LABELS: tuple[tuple[str, str], ...] = (
    ("0", "0"),
    ("1", "1"),
    ("+", "0"),
    ("-", "0"),
    ("+i", "1"),
    ("-i", "1"),
)


def ensemble_eq2() -> Ensemble:
    sixth = 1.0 / 6.0
    items = tuple((sixth, two_qubit_ket(a, b)) for a, b in EQ2_ITEM_LABELS)
    return Ensemble(items, (2, 2))


def ensemble_to_density(e: Ensemble) -> DensityMatrix:
    dim = math.prod(e.dims)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for p, v in e.items:
        out += p * np.outer(v, v.conj())
    return density(out, e.dims)


def pseudo_pure(psi, eta: float, dims=None) -> DensityMatrix:
    """Mixture (1 - eta) I/d + eta |psi><psi| produced by NMR-style hardware."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must be in [0, 1]")
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValueError("psi must be a unit vector")
    d = v.shape[0]
    if dims is None:
        n = int(round(math.log2(d)))
        dims = (2,) * n if 2 ** n == d else (d,)
    mat = (1.0 - eta) * np.eye(d, dtype=np.complex128) / d + eta * np.outer(v, v.conj())
    return density(mat, dims)
