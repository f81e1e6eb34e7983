"""Seeded random generators for states, unitaries, and frames.

Used by the randomized verification command and the test suite; not part
of the numerical API proper.
"""

from __future__ import annotations

import numpy as np

from .qstate import BipartiteState, DensityMatrix


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary via QR of a complex Gaussian matrix."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-norm random state vector."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random mixed state G G^dag / Tr(G G^dag) with G complex Gaussian d x rank."""
    r = d if rank is None else int(rank)
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_bipartite_state(
    dims: tuple[int, int], rng: np.random.Generator, rank: int | None = None
) -> BipartiteState:
    joint = random_density_matrix(dims[0] * dims[1], rng, rank=rank)
    return BipartiteState(joint, dims)


def random_orthonormal_frame(rng: np.random.Generator):
    """Random orthonormal triple of real 3-vectors (rows of a random rotation)."""
    from .encodings import OrthonormalFrame

    g = rng.standard_normal((3, 3))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    return OrthonormalFrame(q[:, 0], q[:, 1], q[:, 2])
