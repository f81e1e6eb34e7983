"""Density-matrix algebra for small dense systems.

Construction and validation of density matrices, Bloch-vector
parameterization of qubits, tensor products, partial traces, von Neumann
entropy, and the correlation-tensor decomposition of bipartite states.
All operations are pure functions on immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    BlochNormExceeded,
    DimensionMismatch,
    InvalidState,
    ParseError,
)

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A d x d complex Hermitian positive-semidefinite unit-trace operator.

    Validation happens on construction: Hermiticity and trace to 1e-12,
    smallest eigenvalue no lower than -1e-10.  Eigenvalues in [-1e-10, 0)
    are treated as exact zeros downstream; anything lower is rejected.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidState(f"expected a square matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise InvalidState("matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise InvalidState(f"trace {np.trace(m)} is not 1 within 1e-12")
        smallest = float(np.linalg.eigvalsh(m)[0])
        if smallest < PSD_FLOOR:
            raise InvalidState(f"smallest eigenvalue {smallest} below -1e-10")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending real eigenvalues, clipped to [0, 1]."""
        return np.clip(np.linalg.eigvalsh(self.matrix), 0.0, 1.0)


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector parameterizing a qubit state as (1 + v.sigma)/2."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if self.norm > 1.0 + 1e-12:
            raise BlochNormExceeded(f"|v| = {self.norm} exceeds 1")

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


def from_bloch(v: BlochVector | tuple[float, float, float]) -> DensityMatrix:
    """Qubit state (1 + v.sigma)/2 for a Bloch vector inside the unit ball.

    Raises BlochNormExceeded if |v| > 1 + 1e-12.
    """
    if not isinstance(v, BlochVector):
        v = BlochVector(*(float(c) for c in v))
    m = 0.5 * (np.eye(2, dtype=complex) + v.x * PAULI_X + v.y * PAULI_Y + v.z * PAULI_Z)
    return DensityMatrix(m)


def to_bloch(s: DensityMatrix) -> BlochVector:
    """Inverse of from_bloch: v_alpha = Tr(rho sigma_alpha)."""
    if s.dim != 2:
        raise DimensionMismatch(f"Bloch vectors describe qubits, got dim {s.dim}")
    comps = [float(np.trace(s.matrix @ p).real) for p in PAULIS]
    return BlochVector(*comps)


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Tensor (Kronecker) product of two states."""
    return DensityMatrix(np.kron(a.matrix, b.matrix))


def partial_trace(s: DensityMatrix, dims: tuple[int, int], keep: str) -> DensityMatrix:
    """Reduced state of one subsystem of a bipartite state.

    Parameters
    ----------
    s : DensityMatrix
        Joint state of dimension dims[0] * dims[1].
    dims : (int, int)
        Subsystem dimensions (d_A, d_B).
    keep : "A" or "B"
        Which subsystem survives the trace.
    """
    d_a, d_b = int(dims[0]), int(dims[1])
    if d_a * d_b != s.dim:
        raise DimensionMismatch(f"dims {dims} do not factor joint dimension {s.dim}")
    four = s.matrix.reshape(d_a, d_b, d_a, d_b)
    side = keep.upper()
    if side == "A":
        reduced = np.einsum("ijkj->ik", four)
    elif side == "B":
        reduced = np.einsum("ijil->jl", four)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return DensityMatrix(reduced)


def _spectrum_entropy(eigs: np.ndarray) -> float:
    """Shannon entropy in bits of a clipped eigenvalue vector, 0 log 0 := 0."""
    lam = eigs[eigs > 0.0]
    if lam.size == 0:
        return 0.0
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(s: DensityMatrix | np.ndarray) -> float:
    """Von Neumann entropy S(rho) = -Tr rho log2 rho in bits.

    Computed from the Hermitian eigenvalues, clipped to [0, 1] before the
    logarithm.  Accepts a DensityMatrix or a raw Hermitian array.
    """
    m = s.matrix if isinstance(s, DensityMatrix) else np.asarray(s)
    eigs = np.clip(np.linalg.eigvalsh(m), 0.0, 1.0)
    return _spectrum_entropy(eigs)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Joint state rho_AB with cached reductions and correlation tensor.

    gamma holds the coefficients of rho_AB - rho_A x rho_B in the product
    operator basis (Pauli matrices for qubits, the traceless Hermitian
    basis with Tr L_a L_b = d delta_ab in general), normalized so that

        rho_AB = rho_A x rho_B + sum_cd gamma[c, d] L_c x L_d

    holds exactly.
    """

    joint: DensityMatrix
    dims: tuple[int, int]

    def __post_init__(self) -> None:
        d_a, d_b = int(self.dims[0]), int(self.dims[1])
        object.__setattr__(self, "dims", (d_a, d_b))
        if d_a * d_b != self.joint.dim:
            raise DimensionMismatch(
                f"dims {self.dims} do not factor joint dimension {self.joint.dim}"
            )

    @property
    def dim_a(self) -> int:
        return self.dims[0]

    @property
    def dim_b(self) -> int:
        return self.dims[1]

    @cached_property
    def reduced_a(self) -> DensityMatrix:
        return partial_trace(self.joint, self.dims, "A")

    @cached_property
    def reduced_b(self) -> DensityMatrix:
        return partial_trace(self.joint, self.dims, "B")

    @cached_property
    def gamma(self) -> np.ndarray:
        # imported here: encodings depends on qstate for BlochVector
        from .encodings import gellmann_basis

        d_a, d_b = self.dims
        basis_a = np.stack(gellmann_basis(d_a).lambdas)
        basis_b = np.stack(gellmann_basis(d_b).lambdas)
        delta = self.joint.matrix - np.kron(self.reduced_a.matrix, self.reduced_b.matrix)
        four = delta.reshape(d_a, d_b, d_a, d_b)
        # Tr[(L_c x L_d) delta] = sum_{ijkl} (L_c)_{ij} (L_d)_{kl} delta_{(j,l),(i,k)}
        g = np.einsum("cij,dkl,jlik->cd", basis_a, basis_b, four)
        return np.real(g) / (d_a * d_b)

    @classmethod
    def from_pure(cls, vec: np.ndarray, dims: tuple[int, int]) -> "BipartiteState":
        """Projector onto a joint pure state (the vector is normalized)."""
        v = np.asarray(vec, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise InvalidState("zero vector has no associated state")
        v = v / n
        return cls(DensityMatrix(np.outer(v, v.conj())), dims)

    @classmethod
    def from_product(cls, a: DensityMatrix, b: DensityMatrix) -> "BipartiteState":
        return cls(tensor(a, b), (a.dim, b.dim))


def correlation_decompose(s: BipartiteState) -> np.ndarray:
    """Correlation coefficients gamma of a bipartite state.

    gamma[c, d] = Tr[(L_c x L_d)(rho_AB - rho_A x rho_B)] / (d_A d_B);
    identically zero for product states.
    """
    return s.gamma


def correlation_reconstruct(s: BipartiteState) -> DensityMatrix:
    """Rebuild rho_AB from the reductions and gamma (inverse of the expansion)."""
    from .encodings import gellmann_basis

    d_a, d_b = s.dims
    basis_a = np.stack(gellmann_basis(d_a).lambdas)
    basis_b = np.stack(gellmann_basis(d_b).lambdas)
    corr = np.einsum("cd,cij,dkl->ikjl", s.gamma, basis_a, basis_b)
    total = np.kron(s.reduced_a.matrix, s.reduced_b.matrix) + corr.reshape(s.joint.dim, s.joint.dim)
    return DensityMatrix(total)


def pure_state(vec: np.ndarray) -> DensityMatrix:
    """Projector |v><v| onto a (normalized) state vector."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise InvalidState("zero vector has no associated state")
    v = v / n
    return DensityMatrix(np.outer(v, v.conj()))


_BELL_VECTORS = {
    "psi+": np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2),
    "psi-": np.array([1, 0, 0, -1], dtype=complex) / math.sqrt(2),
    "phi+": np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2),
    "phi-": np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2),
}


def bell_state(which: str = "psi+") -> BipartiteState:
    """One of the four Bell states; psi+- = (|00> +- |11>)/sqrt2, phi+- = (|01> +- |10>)/sqrt2."""
    try:
        vec = _BELL_VECTORS[which]
    except KeyError:
        raise ParseError(f"unknown Bell state {which!r}") from None
    return BipartiteState.from_pure(vec, (2, 2))


def werner_state(p: float) -> BipartiteState:
    """Mixture p |psi+><psi+| + (1 - p) 1/4, physical for -1/3 <= p <= 1."""
    if not -1.0 / 3.0 <= p <= 1.0:
        raise InvalidState(f"werner parameter {p} outside [-1/3, 1]")
    bell = bell_state().joint.matrix
    m = p * bell + (1.0 - p) * np.eye(4, dtype=complex) / 4.0
    return BipartiteState(DensityMatrix(m), (2, 2))


def max_entangled_state(d: int) -> BipartiteState:
    """Maximally entangled two-qudit state sum_k |kk> / sqrt(d)."""
    if d < 2:
        raise InvalidState(f"need d >= 2, got {d}")
    vec = np.zeros(d * d, dtype=complex)
    vec[:: d + 1] = 1.0 / math.sqrt(d)
    return BipartiteState.from_pure(vec, (d, d))


def _matrix_from_json(entries, dim: int) -> np.ndarray:
    arr = np.asarray(entries, dtype=float)
    if arr.shape != (dim, dim, 2):
        raise ParseError(f"matrix shape {arr.shape} does not match dim {dim}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_from_json(obj: dict) -> DensityMatrix | BipartiteState:
    """Parse the JSON state format.

    Accepted forms:
      {"dim": d, "matrix": [[[re, im], ...], ...]}   row-major entries
      {"bloch": [x, y, z]}                           qubit Bloch vector
      {"tensor": {"a": <state>, "b": <state>}}       product state
    """
    if not isinstance(obj, dict):
        raise ParseError("state JSON must be an object")
    if "tensor" in obj:
        parts = obj["tensor"]
        if not isinstance(parts, dict) or "a" not in parts or "b" not in parts:
            raise ParseError("tensor form needs 'a' and 'b' states")
        a = state_from_json(parts["a"])
        b = state_from_json(parts["b"])
        if isinstance(a, BipartiteState) or isinstance(b, BipartiteState):
            raise ParseError("tensor factors must be single-system states")
        return BipartiteState.from_product(a, b)
    if "bloch" in obj:
        comps = obj["bloch"]
        if not isinstance(comps, (list, tuple)) or len(comps) != 3:
            raise ParseError("bloch form needs three components")
        try:
            return from_bloch(tuple(float(c) for c in comps))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad bloch components: {exc}") from None
    if "dim" in obj and "matrix" in obj:
        try:
            dim = int(obj["dim"])
            m = _matrix_from_json(obj["matrix"], dim)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad matrix entries: {exc}") from None
        return DensityMatrix(m)
    raise ParseError("state JSON needs 'matrix', 'bloch', or 'tensor'")


def state_to_json(s: DensityMatrix | BipartiteState) -> dict:
    """Serialize a state to the JSON matrix form (joint matrix for bipartite)."""
    m = s.joint.matrix if isinstance(s, BipartiteState) else s.matrix
    entries = np.stack([m.real, m.imag], axis=-1).tolist()
    out = {"dim": int(m.shape[0]), "matrix": entries}
    if isinstance(s, BipartiteState):
        out["dims"] = [s.dim_a, s.dim_b]
    return out
