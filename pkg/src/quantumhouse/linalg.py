"""Dense complex linear algebra for small multipartite Hilbert spaces.

All matrices are plain ``numpy.ndarray`` (complex128); ``DensityMatrix`` is a
thin immutable wrapper that carries the subsystem dimensions. The leftmost
tensor factor is the most-significant index, so for ``dims = (dA, dB)`` the
basis label |a b> maps to row ``a * dB + b``.

Total dimension is capped at 64; everything is dense and deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

DEFAULT_TOL = 1e-9
MAX_DIM = 64

_default_tol = DEFAULT_TOL


def default_tol() -> float:
    """Current global tolerance for equality/validity checks."""
    return _default_tol


def set_default_tol(tol: float) -> None:
    global _default_tol
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    _default_tol = tol


def _tol(tol: float | None) -> float:
    return _default_tol if tol is None else tol


# Common single-qubit operators.
I2 = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValueError("matrix has non-finite entries")
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """A density operator together with its subsystem dimensions."""

    mat: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = _as_matrix(self.mat)
        dims = tuple(int(d) for d in self.dims)
        if any(d < 1 for d in dims):
            raise ValueError(f"invalid subsystem dimensions {dims}")
        dim = math.prod(dims)
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        if dim > MAX_DIM:
            raise ValueError(f"total dimension {dim} exceeds supported maximum {MAX_DIM}")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class HermitianEigensystem:
    """Eigenvalues (real, descending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class DensityDiagnostics:
    """Validity report for a would-be density matrix."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    def passes(self, tol: float | None = None) -> bool:
        t = _tol(tol)
        return (
            self.hermiticity_defect <= t
            and self.trace_defect <= t
            and self.min_eigenvalue >= -t
        )


# ---------------------------------------------------------------------------
# Local operations


@dataclass(frozen=True)
class Unitary:
    matrix: np.ndarray


@dataclass(frozen=True)
class MeasurementChannel:
    """Complete projective measurement, forgetting the outcome.

    ``basis`` holds the measurement basis as orthonormal columns; the channel
    is rho -> sum_i P_i rho P_i with P_i the rank-1 projectors.
    """

    basis: np.ndarray


@dataclass(frozen=True)
class KrausChannel:
    operators: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class SwapWithPrepared:
    """Replace the target subsystem with an independently prepared state.

    ``state = None`` means "a fresh copy of the current marginal", which is
    the preparation that leaves the local state exactly invariant.
    """

    state: np.ndarray | None = None


LocalOperation = Union[Unitary, MeasurementChannel, KrausChannel, SwapWithPrepared]


# ---------------------------------------------------------------------------
# Basic constructions


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a``'s indices most significant."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def product_density(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(tensor(a.mat, b.mat), a.dims + b.dims)


def pure_density(vec, dims: Sequence[int]) -> DensityMatrix:
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > 1e-8:
        raise ValueError(f"state vector norm {n} is not 1")
    return DensityMatrix(np.outer(v, v.conj()), tuple(dims))


def density(
    mat, dims: Sequence[int], *, tol: float | None = None, validate: bool = True
) -> DensityMatrix:
    """Wrap ``mat`` as a DensityMatrix, checking validity unless told not to."""
    dm = DensityMatrix(_as_matrix(mat), tuple(dims))
    if validate:
        diag = validate_density(dm.mat, tol=tol)
        if not diag.passes(tol):
            raise ValueError(
                "not a valid density matrix: "
                f"hermiticity defect {diag.hermiticity_defect:.3g}, "
                f"trace defect {diag.trace_defect:.3g}, "
                f"min eigenvalue {diag.min_eigenvalue:.3g}"
            )
    return dm


def validate_density(m, tol: float | None = None) -> DensityDiagnostics:
    """Report how far ``m`` is from being a density matrix (never raises)."""
    a = _as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    herm = float(np.max(np.abs(a - a.conj().T)))
    trace = float(abs(a.trace() - 1.0))
    h = (a + a.conj().T) / 2
    eigvals = _jacobi(h, want_vectors=False)[0]
    return DensityDiagnostics(herm, trace, float(np.min(eigvals)))


# ---------------------------------------------------------------------------
# Partial trace and subsystem bookkeeping


def _keep_list(keep, n_subsystems: int) -> list[int]:
    keep = [keep] if isinstance(keep, int) else list(keep)
    if not keep or any(k < 0 or k >= n_subsystems for k in keep):
        raise ValueError(f"invalid subsystem selector {keep} for {n_subsystems} parts")
    if len(set(keep)) != len(keep):
        raise ValueError("duplicate subsystem selector")
    return keep


def partial_trace_mat(mat: np.ndarray, dims: Sequence[int], keep) -> np.ndarray:
    dims = list(dims)
    keep = _keep_list(keep, len(dims))
    traced = [i for i in range(len(dims)) if i not in keep]
    a = mat.reshape(dims + dims)
    for idx in sorted(traced, reverse=True):
        a = np.trace(a, axis1=idx, axis2=idx + len(dims))
        dims.pop(idx)
    d = math.prod(dims)
    a = a.reshape(d, d)
    # Kept subsystems must come back in their original relative order, which
    # np.trace preserves; reorder only if the caller asked out of order.
    order = sorted(range(len(keep)), key=lambda i: keep[i])
    if order != list(range(len(keep))):
        inv = [order.index(i) for i in range(len(keep))]
        a = _permute_mat(a, [dims[i] for i in order], inv)
    return a


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Marginal of ``rho`` on the kept subsystem(s)."""
    if len(rho.dims) < 2:
        raise ValueError("partial trace needs at least two subsystems")
    keep = _keep_list(keep, len(rho.dims))
    mat = partial_trace_mat(rho.mat, rho.dims, keep)
    return DensityMatrix(mat, tuple(rho.dims[k] for k in keep))


def _permute_mat(mat: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    dims = list(dims)
    n = len(dims)
    axes = list(perm) + [p + n for p in perm]
    a = mat.reshape(dims + dims).transpose(axes)
    d = math.prod(dims)
    return a.reshape(d, d)


def permute_subsystems(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    """Reorder tensor factors; new factor ``i`` is old factor ``perm[i]``."""
    perm = list(perm)
    if sorted(perm) != list(range(len(rho.dims))):
        raise ValueError(f"{perm} is not a permutation of the subsystems")
    new_dims = tuple(rho.dims[p] for p in perm)
    return DensityMatrix(_permute_mat(rho.mat, rho.dims, perm), new_dims)


# ---------------------------------------------------------------------------
# Hermitian eigendecomposition (cyclic Jacobi)


def _offdiag_norm(a: np.ndarray) -> float:
    m = np.abs(a) ** 2
    np.fill_diagonal(m, 0.0)
    return math.sqrt(float(m.sum()))


def _jacobi(h: np.ndarray, want_vectors: bool = True, conv_tol: float = 1e-13,
            max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray | None]:
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128) if want_vectors else None
    scale = max(1.0, math.sqrt(float(np.sum(np.abs(a) ** 2))))
    skip = conv_tol * scale / max(1, n * n)
    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= conv_tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                b = abs(apq)
                if b <= skip:
                    continue
                phase = apq / b
                tau = (a[q, q].real - a[p, p].real) / (2.0 * b)
                if tau >= 0:
                    t = -1.0 / (tau + math.sqrt(tau * tau + 1.0))
                else:
                    t = 1.0 / (-tau + math.sqrt(tau * tau + 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p + s * np.conj(phase) * col_q
                a[:, q] = -s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p + s * phase * row_q
                a[q, :] = -s * np.conj(phase) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp + s * np.conj(phase) * vq
                    v[:, q] = -s * phase * vp + c * vq
    else:
        raise RuntimeError("Jacobi eigensolver failed to converge")
    return np.diagonal(a).real.copy(), v


def eig_hermitian(h, tol: float | None = None) -> HermitianEigensystem:
    """Spectral decomposition of a Hermitian matrix.

    Eigenvalues come out in descending order; each eigenvector is phase
    normalized so its first significant component is real positive, which
    makes the output deterministic. Raises on non-Hermitian input.
    """
    a = _as_matrix(h)
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {a.shape[0]} exceeds supported maximum {MAX_DIM}")
    t = _tol(tol)
    defect = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if defect > t:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3g} > tol {t:.3g})")
    vals, vecs = _jacobi((a + a.conj().T) / 2, want_vectors=True)
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    cutoff = 1e-8
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        nz = np.flatnonzero(np.abs(col) > cutoff * np.max(np.abs(col)))
        lead = col[nz[0]]
        vecs[:, k] = col * (lead.conjugate() / abs(lead))
    return HermitianEigensystem(vals, vecs)


def eigvals_hermitian(h) -> np.ndarray:
    """Eigenvalues only (descending), skipping eigenvector accumulation."""
    vals = _jacobi(_as_matrix(h), want_vectors=False)[0]
    return np.sort(vals)[::-1]


# ---------------------------------------------------------------------------
# Metrics


def trace_distance(rho: DensityMatrix | np.ndarray, sigma: DensityMatrix | np.ndarray) -> float:
    """Half the trace norm of rho - sigma; 0 iff equal, 1 at perfect
    distinguishability."""
    a = rho.mat if isinstance(rho, DensityMatrix) else _as_matrix(rho)
    b = sigma.mat if isinstance(sigma, DensityMatrix) else _as_matrix(sigma)
    if isinstance(rho, DensityMatrix) and isinstance(sigma, DensityMatrix):
        if rho.dims != sigma.dims:
            raise ValueError(f"dimension mismatch: {rho.dims} vs {sigma.dims}")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    diff = (diff + diff.conj().T) / 2
    vals = _jacobi(diff, want_vectors=False)[0]
    return 0.5 * float(np.sum(np.abs(vals)))


# ---------------------------------------------------------------------------
# Channels


def kraus_operators(op: LocalOperation, dim: int, tol: float | None = None) -> list[np.ndarray]:
    """Kraus family of a local operation acting on a ``dim``-dimensional part."""
    t = _tol(tol)
    if isinstance(op, Unitary):
        u = _as_matrix(op.matrix)
        if u.shape != (dim, dim):
            raise ValueError(f"unitary shape {u.shape} does not match dimension {dim}")
        defect = float(np.max(np.abs(u.conj().T @ u - np.eye(dim))))
        if defect > t:
            raise ValueError(f"matrix is not unitary (defect {defect:.3g})")
        return [u]
    if isinstance(op, MeasurementChannel):
        basis = _as_matrix(op.basis)
        if basis.shape != (dim, dim):
            raise ValueError(f"basis shape {basis.shape} does not match dimension {dim}")
        defect = float(np.max(np.abs(basis.conj().T @ basis - np.eye(dim))))
        if defect > t:
            raise ValueError(f"basis is not orthonormal (defect {defect:.3g})")
        return [np.outer(basis[:, i], basis[:, i].conj()) for i in range(dim)]
    if isinstance(op, KrausChannel):
        ops = [_as_matrix(k) for k in op.operators]
        if not ops or any(k.shape != (dim, dim) for k in ops):
            raise ValueError("Kraus operators must be square and match the target dimension")
        total = sum(k.conj().T @ k for k in ops)
        defect = float(np.max(np.abs(total - np.eye(dim))))
        if defect > t:
            raise ValueError(f"Kraus family is not trace preserving (defect {defect:.3g})")
        return ops
    raise TypeError(f"no Kraus form for {type(op).__name__}")


def embed_at(k: np.ndarray, dims: Sequence[int], target: int) -> np.ndarray:
    """Lift an operator on subsystem ``target`` to the full space."""
    full = np.eye(1, dtype=np.complex128)
    for i, d in enumerate(dims):
        full = np.kron(full, k if i == target else np.eye(d, dtype=np.complex128))
    return full


def apply_local(
    rho: DensityMatrix, op: LocalOperation, target: int = 0, tol: float | None = None
) -> DensityMatrix:
    """Apply an operation confined to one subsystem.

    ``SwapWithPrepared`` replaces the target with the given state (or with a
    fresh copy of its current marginal); everything else goes through the
    Kraus representation.
    """
    if target < 0 or target >= len(rho.dims):
        raise ValueError(f"target {target} out of range for dims {rho.dims}")
    d = rho.dims[target]
    if isinstance(op, SwapWithPrepared):
        if op.state is None:
            fresh = partial_trace(rho, target).mat
        else:
            fresh = _as_matrix(op.state)
            if fresh.shape != (d, d):
                raise ValueError(f"prepared state shape {fresh.shape} does not match dimension {d}")
        others = [i for i in range(len(rho.dims)) if i != target]
        if others:
            rest = partial_trace(rho, others)
            combined = DensityMatrix(tensor(fresh, rest.mat), (d,) + rest.dims)
            kron_order = [target] + others
            perm = [kron_order.index(i) for i in range(len(rho.dims))]
            return permute_subsystems(combined, perm)
        return DensityMatrix(fresh, (d,))
    out = np.zeros_like(rho.mat)
    for k in kraus_operators(op, d, tol):
        kf = embed_at(k, rho.dims, target)
        out = out + kf @ rho.mat @ kf.conj().T
    return DensityMatrix(out, rho.dims)


def depolarize(rho: DensityMatrix, p: float, target: int = 0) -> DensityMatrix:
    """Partially replace the target subsystem with the maximally mixed state."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("depolarizing strength must be in [0, 1]")
    d = rho.dims[target]
    mixed = apply_local(rho, SwapWithPrepared(np.eye(d) / d), target)
    return DensityMatrix((1.0 - p) * rho.mat + p * mixed.mat, rho.dims)


# ---------------------------------------------------------------------------
# Seeded random sampling


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish unitary via QR of a complex Gaussian matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    # Fix the phases so the distribution is right (and the output canonical).
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return m / m.trace().real


def sample_random(kind: str, dim: int, seed: int):
    """Deterministic random object: 'pure-state', 'density' or 'unitary'."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    if kind == "pure-state":
        return random_pure_state(dim, rng)
    if kind == "unitary":
        return random_unitary(dim, rng)
    if kind == "density":
        return DensityMatrix(random_density(dim, rng), (dim,))
    raise ValueError(f"unknown sample kind {kind!r}")
