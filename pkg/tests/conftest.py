import pathlib
import sys

import numpy as np
import pytest

_SRC = pathlib.Path(__file__).resolve().parents[1] / "src"
if str(_SRC) not in sys.path:
    sys.path.insert(0, str(_SRC))

from quantumhouse import linalg  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_bipartite(rng, dims=(2, 2)):
    d = dims[0] * dims[1]
    return linalg.density(linalg.random_density(d, rng), dims, validate=False)


def classical_quantum_state(rng, dims=(2, 2)):
    """Random zero-discord state: mixture of basis projectors on A tensored
    with arbitrary states on B."""
    da, db = dims
    basis = linalg.random_unitary(da, rng)
    probs = rng.dirichlet(np.ones(da))
    mat = np.zeros((da * db, da * db), dtype=np.complex128)
    for i in range(da):
        proj = np.outer(basis[:, i], basis[:, i].conj())
        mat += probs[i] * np.kron(proj, linalg.random_density(db, rng))
    return linalg.density(mat, dims, validate=False)
