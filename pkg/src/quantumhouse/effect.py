"""Quantum-house achievability: classify states, build and check witnesses.

A witness is a concrete operation in Alice's lab that changes the joint
state while leaving her marginal fixed. Non-product states admit one
outright (measure in the eigenbasis of rho_A when discord is non-zero,
otherwise swap in a fresh copy of rho_A). Product states with both factors
mixed need pre-shared side information: a classically correlated pair whose
marginals match, built here from the comonotone coupling of the two
spectra. Product states with a pure factor admit no witness at all, which
`impossibility_sweep` probes empirically with random channels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import discord
from .linalg import (
    DensityMatrix,
    KrausChannel,
    LocalOperation,
    MeasurementChannel,
    SwapWithPrepared,
    Unitary,
    apply_local,
    density,
    depolarize,
    eig_hermitian,
    partial_trace,
    product_density,
    random_unitary,
    tensor,
    trace_distance,
)

CLASSIFY_TOL = 1e-8
DELTA_A_TOL = 1e-8
DELTA_AB_TOL = 1e-6


class QhClass(enum.Enum):
    NON_PRODUCT = "non-product"
    PRODUCT_BOTH_MIXED = "product-both-mixed"
    PRODUCT_PURE_FACTOR = "product-pure-factor"


class WitnessKind(enum.Enum):
    EIGENBASIS_MEASUREMENT = "eigenbasis-measurement"
    SWAP_FRESH = "swap-fresh"
    SWAP_CORRELATED_ANCILLA = "swap-correlated-ancilla"
    EXPLICIT_UNITARY = "explicit-unitary"


@dataclass(frozen=True)
class QhWitness:
    kind: WitnessKind
    operation: LocalOperation | None = None
    side_info: DensityMatrix | None = None


@dataclass(frozen=True)
class SweepReport:
    trials: int
    violations: int
    examples: tuple[dict, ...]
    max_delta_ab_unnoticed: float  # largest joint change seen while A stayed put


@dataclass(frozen=True)
class NoiseModel:
    eta: float = 1.0  # pseudo-pure preparation weight on the ideal state
    gate_p: float = 0.0  # depolarizing strength applied per gate on A

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0 or not 0.0 <= self.gate_p <= 1.0:
            raise ValueError("noise parameters must lie in [0, 1]")


@dataclass(frozen=True)
class NoisyQheReport:
    delta_ab: float
    delta_a: float
    significant: float
    insignificant: float

    @property
    def verdict(self) -> bool:
        return self.delta_ab >= self.significant and self.delta_a <= self.insignificant


def _marginals(rho: DensityMatrix) -> tuple[DensityMatrix, DensityMatrix]:
    if len(rho.dims) != 2:
        raise ValueError(f"expected a bipartite state, got dims {rho.dims}")
    return partial_trace(rho, 0), partial_trace(rho, 1)


def _is_pure(rho: DensityMatrix, tol: float) -> bool:
    top = eig_hermitian(rho.mat).eigenvalues[0]
    return top >= 1.0 - tol


def classify(rho: DensityMatrix, tol: float = CLASSIFY_TOL) -> QhClass:
    """Sort a bipartite state into one of the three achievability classes."""
    rho_a, rho_b = _marginals(rho)
    if trace_distance(rho, product_density(rho_a, rho_b)) > tol:
        return QhClass.NON_PRODUCT
    if _is_pure(rho_a, tol) or _is_pure(rho_b, tol):
        return QhClass.PRODUCT_PURE_FACTOR
    return QhClass.PRODUCT_BOTH_MIXED


def comonotone_coupling(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Couple two sorted-descending spectra by greedy mass matching.

    The result has marginals p and q and maximal positive association; its
    support is a staircase, so it differs from the product coupling whenever
    both inputs have at least two positive weights.
    """
    w = np.zeros((len(p), len(q)))
    i = j = 0
    left_p = float(p[0]) if len(p) else 0.0
    left_q = float(q[0]) if len(q) else 0.0
    while i < len(p) and j < len(q):
        m = min(left_p, left_q)
        w[i, j] = m
        left_p -= m
        left_q -= m
        if left_p <= 1e-15:
            i += 1
            left_p = float(p[i]) if i < len(p) else 0.0
        if left_q <= 1e-15:
            j += 1
            left_q = float(q[j]) if j < len(q) else 0.0
    return w


def correlated_ancilla_state(rho_a: DensityMatrix, rho_b: DensityMatrix) -> DensityMatrix:
    """Non-product state whose marginals are exactly rho_a and rho_b."""
    ea = eig_hermitian(rho_a.mat)
    eb = eig_hermitian(rho_b.mat)
    w = comonotone_coupling(np.clip(ea.eigenvalues, 0, None), np.clip(eb.eigenvalues, 0, None))
    da, db = rho_a.dim, rho_b.dim
    out = np.zeros((da * db, da * db), dtype=np.complex128)
    for i in range(da):
        for j in range(db):
            if w[i, j] == 0.0:
                continue
            pa = np.outer(ea.eigenvectors[:, i], ea.eigenvectors[:, i].conj())
            pb = np.outer(eb.eigenvectors[:, j], eb.eigenvectors[:, j].conj())
            out += w[i, j] * tensor(pa, pb)
    return density(out, (da, db))


def construct_witness(
    rho: DensityMatrix,
    prefer: WitnessKind | None = None,
    tol: float = CLASSIFY_TOL,
) -> QhWitness | None:
    """Build a verifiable witness for ``rho``, or None when none can exist.

    Preference order when several apply: an eigenbasis measurement (only
    sound when discord is non-zero), then the fresh swap; product states
    with both factors mixed get the correlated-ancilla swap.
    """
    cls = classify(rho, tol)
    if cls is QhClass.PRODUCT_PURE_FACTOR:
        return None
    rho_a, rho_b = _marginals(rho)
    if cls is QhClass.PRODUCT_BOTH_MIXED:
        sigma = correlated_ancilla_state(rho_a, rho_b)
        return QhWitness(WitnessKind.SWAP_CORRELATED_ANCILLA, None, sigma)
    nonzero_discord = not discord.is_zero_discord(rho).zero_discord
    if prefer is WitnessKind.SWAP_FRESH or (prefer is None and not nonzero_discord):
        return QhWitness(WitnessKind.SWAP_FRESH, SwapWithPrepared(rho_a.mat))
    if nonzero_discord:
        basis = eig_hermitian(rho_a.mat).eigenvectors
        return QhWitness(WitnessKind.EIGENBASIS_MEASUREMENT, MeasurementChannel(basis))
    return QhWitness(WitnessKind.SWAP_FRESH, SwapWithPrepared(rho_a.mat))


def witness_from_unitary(u: np.ndarray) -> QhWitness:
    return QhWitness(WitnessKind.EXPLICIT_UNITARY, Unitary(u))


def apply_witness(rho: DensityMatrix, w: QhWitness) -> DensityMatrix:
    """Joint state after the witness operation runs in Alice's lab."""
    if w.kind is WitnessKind.SWAP_CORRELATED_ANCILLA:
        if w.side_info is None:
            raise ValueError("correlated-ancilla witness needs its side_info state")
        if w.side_info.dims != rho.dims:
            raise ValueError(
                f"side-info dims {w.side_info.dims} do not match state dims {rho.dims}"
            )
        return w.side_info
    if w.operation is None:
        raise ValueError(f"witness of kind {w.kind.value} carries no operation")
    return apply_local(rho, w.operation, target=0)


def verify_witness(rho: DensityMatrix, w: QhWitness) -> tuple[float, float]:
    """(joint change, Alice-marginal change) caused by the witness."""
    post = apply_witness(rho, w)
    delta_ab = trace_distance(rho, post)
    delta_a = trace_distance(partial_trace(rho, 0), partial_trace(post, 0))
    return delta_ab, delta_a


# ---------------------------------------------------------------------------
# Random-channel probe of the impossibility class


def random_channel_kraus(dim: int, rank: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Random CPTP map on a ``dim`` system via a Stinespring isometry with an
    ancilla of size ``rank`` (rank 1 reduces to a random unitary)."""
    u = random_unitary(dim * rank, rng)
    iso = u[:, :dim]  # columns: images of |j>; rows indexed by (i, e)
    return [iso[e::rank, :] if rank > 1 else iso for e in range(rank)]


def impossibility_sweep(
    rho: DensityMatrix,
    trials: int = 1000,
    seed: int = 23,
    tol_a: float = DELTA_A_TOL,
    tol_ab: float = DELTA_AB_TOL,
) -> SweepReport:
    """Throw random local channels at a product-with-pure-factor state and
    count quantum-house violations (there should be none)."""
    if classify(rho) is not QhClass.PRODUCT_PURE_FACTOR:
        raise ValueError("sweep is only meaningful for product states with a pure factor")
    rng = np.random.default_rng(seed)
    da = rho.dims[0]
    violations = 0
    examples: list[dict] = []
    max_quiet = 0.0
    for _ in range(trials):
        rank = int(rng.integers(1, 5))
        ops = random_channel_kraus(da, rank, rng)
        post = apply_local(rho, KrausChannel(tuple(ops)), target=0)
        delta_ab = trace_distance(rho, post)
        delta_a = trace_distance(partial_trace(rho, 0), partial_trace(post, 0))
        if delta_a <= tol_a:
            max_quiet = max(max_quiet, delta_ab)
            if delta_ab > tol_ab:
                violations += 1
                if len(examples) < 5:
                    examples.append({"rank": rank, "delta_ab": delta_ab, "delta_a": delta_a})
    return SweepReport(trials, violations, tuple(examples), max_quiet)


# ---------------------------------------------------------------------------
# Noisy variant


def _has_gate(w: QhWitness) -> bool:
    return w.kind in (WitnessKind.EXPLICIT_UNITARY, WitnessKind.EIGENBASIS_MEASUREMENT)


def noisy_metrics(
    rho: DensityMatrix,
    w: QhWitness,
    noise: NoiseModel,
    thresholds: tuple[float, float] = (0.1, 0.01),
) -> NoisyQheReport:
    """Deltas between the with- and without-witness branches under noise.

    Preparation noise mixes the ideal state with the maximally mixed one
    (weight 1 - eta); gate noise depolarizes Alice's side after each gate.
    Swap-style witnesses are realized with preparations matched to the noisy
    marginal, so they stay exactly quiet on A.
    """
    d = rho.dim
    prep = density(
        (1.0 - noise.eta) * np.eye(d, dtype=np.complex128) / d + noise.eta * rho.mat,
        rho.dims,
        validate=False,
    )
    if w.kind is WitnessKind.SWAP_CORRELATED_ANCILLA:
        sigma = w.side_info
        if sigma is None:
            raise ValueError("correlated-ancilla witness needs its side_info state")
        post = density(
            (1.0 - noise.eta) * np.eye(d, dtype=np.complex128) / d + noise.eta * sigma.mat,
            rho.dims,
            validate=False,
        )
    elif w.kind is WitnessKind.SWAP_FRESH:
        post = apply_local(prep, SwapWithPrepared(None), target=0)
    else:
        post = apply_witness(prep, w)
    if noise.gate_p > 0.0 and _has_gate(w):
        post = depolarize(post, noise.gate_p, target=0)
    delta_ab = trace_distance(prep, post)
    delta_a = trace_distance(partial_trace(prep, 0), partial_trace(post, 0))
    return NoisyQheReport(delta_ab, delta_a, thresholds[0], thresholds[1])
