"""Zero-vs-nonzero quantum discord with respect to the first subsystem.

The decision procedure works on the grid of correlation blocks
C_mn = (I (x) <m|) rho (I (x) |n>): the state is classical-quantum (zero
discord w.r.t. A) exactly when all blocks are normal and pairwise commute,
because that is when a common orthonormal eigenbasis of A exists. When the
verdict is "zero", the witnessing basis is recovered by diagonalizing a
random Hermitian combination of the blocks.

A randomized basis-search oracle (`perturbation_search`) is included for
cross-validation; it knows nothing about the block criterion and simply
minimizes the measurement disturbance over bases of A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .linalg import (
    DensityMatrix,
    MeasurementChannel,
    apply_local,
    eig_hermitian,
    trace_distance,
)

DISCORD_TOL = 1e-8
_MAX_WITNESS_ATTEMPTS = 8


@dataclass(frozen=True)
class CorrelationBlocks:
    """dB x dB grid of dA x dA operators C_mn = (I (x) <m|) rho (I (x) |n>)."""

    blocks: np.ndarray  # shape (dB, dB, dA, dA)
    dims: tuple[int, int]


@dataclass(frozen=True)
class DiscordVerdict:
    zero_discord: bool
    witness_basis: np.ndarray | None
    certificate: dict | None
    diagnostics: dict


def _bipartite(rho: DensityMatrix) -> tuple[int, int]:
    if len(rho.dims) != 2:
        raise ValueError(f"expected a bipartite state, got dims {rho.dims}")
    return rho.dims


def correlation_blocks(rho: DensityMatrix) -> CorrelationBlocks:
    da, db = _bipartite(rho)
    r4 = rho.mat.reshape(da, db, da, db)
    blocks = np.transpose(r4, (1, 3, 0, 2)).copy()
    return CorrelationBlocks(blocks, (da, db))


def _family_defects(blocks: np.ndarray) -> tuple[float, float, tuple | None, tuple | None]:
    """Max non-normality and max pairwise commutator over the block family."""
    db = blocks.shape[0]
    flat = [blocks[m, n] for m in range(db) for n in range(db)]
    idx = [(m, n) for m in range(db) for n in range(db)]
    worst_nn, worst_nn_at = 0.0, None
    for (m, n), c in zip(idx, flat):
        d = float(np.linalg.norm(c @ c.conj().T - c.conj().T @ c))
        if d > worst_nn:
            worst_nn, worst_nn_at = d, (m, n)
    worst_comm, worst_comm_at = 0.0, None
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            d = float(np.linalg.norm(flat[i] @ flat[j] - flat[j] @ flat[i]))
            if d > worst_comm:
                worst_comm, worst_comm_at = d, (idx[i], idx[j])
    return worst_nn, worst_comm, worst_nn_at, worst_comm_at


def _common_eigenbasis(blocks: np.ndarray, tol: float, seed: int) -> tuple[np.ndarray | None, float, int]:
    """Simultaneous eigenbasis of a commuting normal family, by diagonalizing
    a random Hermitian combination; resamples on degeneracy collisions."""
    db, _, da, _ = blocks.shape
    rng = np.random.default_rng(seed)
    best_res = np.inf
    for attempt in range(1, _MAX_WITNESS_ATTEMPTS + 1):
        c = rng.normal(size=(db, db)) + 1j * rng.normal(size=(db, db))
        c = (c + c.conj().T) / 2
        h = np.einsum("mn,mnij->ij", c, blocks)
        basis = eig_hermitian((h + h.conj().T) / 2).eigenvectors
        residual = 0.0
        for m in range(db):
            for n in range(db):
                rotated = basis.conj().T @ blocks[m, n] @ basis
                off = rotated - np.diag(np.diagonal(rotated))
                residual = max(residual, float(np.max(np.abs(off))))
        best_res = min(best_res, residual)
        if residual <= tol:
            return basis, residual, attempt
    return None, best_res, _MAX_WITNESS_ATTEMPTS


def is_zero_discord(rho: DensityMatrix, tol: float = DISCORD_TOL, seed: int = 11) -> DiscordVerdict:
    """Decide whether the discord w.r.t. subsystem A vanishes.

    Returns the witnessing measurement basis of A when it does, and a
    certificate (the offending block or block pair) when it does not.
    Verdicts whose defect sits within a decade of ``tol`` are flagged as
    boundary cases in the diagnostics.
    """
    cb = correlation_blocks(rho)
    worst_nn, worst_comm, nn_at, comm_at = _family_defects(cb.blocks)
    defect = max(worst_nn, worst_comm)
    diagnostics = {
        "max_nonnormality": worst_nn,
        "max_commutator": worst_comm,
        "tol": tol,
        "boundary": tol / 10 < defect < tol * 10,
    }
    if defect > tol:
        if worst_nn >= worst_comm:
            certificate = {"kind": "non-normal-block", "block": nn_at, "norm": worst_nn}
        else:
            certificate = {"kind": "non-commuting-pair", "blocks": comm_at, "norm": worst_comm}
        return DiscordVerdict(False, None, certificate, diagnostics)
    basis, residual, attempts = _common_eigenbasis(cb.blocks, max(tol, 1e-10), seed)
    diagnostics["witness_residual"] = residual
    diagnostics["attempts"] = attempts
    if basis is None:
        raise RuntimeError(
            "blocks pass the commuting-normal test but simultaneous "
            f"diagonalization did not settle (residual {residual:.3g}); "
            "this is an algorithmic failure, not a discord verdict"
        )
    return DiscordVerdict(True, basis, None, diagnostics)


def measurement_perturbation(rho: DensityMatrix, basis: np.ndarray) -> float:
    """Trace distance between rho and its A-side dephasing in ``basis``."""
    post = apply_local(rho, MeasurementChannel(basis), target=0)
    return trace_distance(rho, post)


# ---------------------------------------------------------------------------
# Brute-force oracle: randomized search over measurement bases of A


@dataclass(frozen=True)
class SearchResult:
    min_perturbation: float  # trace distance at the best basis found
    best_basis: np.ndarray
    scan_minimum: float  # Frobenius objective at the best scanned point
    points: int


def _bases_from_angles(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Batch of 2x2 basis matrices (columns) from Bloch angles."""
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    e = np.exp(1j * phi)
    u0 = np.stack([c.astype(complex), e * s], axis=-1)
    u1 = np.stack([-np.conj(e) * s, c.astype(complex)], axis=-1)
    return np.stack([u0, u1], axis=-1)  # (..., component, column)


def _dephasing_residual_batch(rho: DensityMatrix, bases: np.ndarray) -> np.ndarray:
    da, db = rho.dims
    r4 = rho.mat.reshape(da, db, da, db)
    cols = np.moveaxis(bases, -1, 1)  # (k, i, component)
    proj = cols[..., :, None] * cols.conj()[..., None, :]  # (k, i, a, a')
    post = np.einsum("kiax,xbyd,kiyc->kabcd", proj, r4, proj)
    diff = post - r4[None]
    return np.sqrt(np.sum(np.abs(diff) ** 2, axis=(1, 2, 3, 4)))


def perturbation_search(
    rho: DensityMatrix, points: int = 2000, seed: int = 17, refine_top: int = 5
) -> SearchResult:
    """Minimize measurement disturbance over complete projective bases of A.

    Random scan plus local refinement of the best candidates. Only qubit-A
    states are supported (the suites here are 2x2 and 2x3).
    """
    da, _ = _bipartite(rho)
    if da != 2:
        raise ValueError("basis search is implemented for a qubit subsystem A")
    rng = np.random.default_rng(seed)
    # Uniform over the sphere: cos(theta) uniform in [-1, 1].
    theta = np.arccos(rng.uniform(-1.0, 1.0, size=points))
    phi = rng.uniform(0.0, 2 * np.pi, size=points)
    values = _dephasing_residual_batch(rho, _bases_from_angles(theta, phi))
    order = np.argsort(values)

    def objective(x: np.ndarray) -> float:
        basis = _bases_from_angles(np.asarray([x[0]]), np.asarray([x[1]]))
        return float(_dephasing_residual_batch(rho, basis)[0])

    best_x = np.array([theta[order[0]], phi[order[0]]])
    best_val = float(values[order[0]])
    for k in order[:refine_top]:
        res = minimize(
            objective,
            x0=np.array([theta[k], phi[k]]),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 400},
        )
        if res.fun < best_val:
            best_val = float(res.fun)
            best_x = np.asarray(res.x)
    basis = _bases_from_angles(np.asarray([best_x[0]]), np.asarray([best_x[1]]))[0]
    return SearchResult(
        min_perturbation=measurement_perturbation(rho, basis),
        best_basis=basis,
        scan_minimum=float(values[order[0]]),
        points=points,
    )
