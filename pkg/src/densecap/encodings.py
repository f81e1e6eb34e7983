"""Encoding unitary families and operator bases.

Builds the antipodal pair, the frame-generated four-unitary qubit set,
the generalized traceless Hermitian operator basis, and the d^2
shift/clock unitaries, together with their trace-orthogonality checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, FrameNotOrthonormal, InvalidDimension, ParseError
from .qstate import PAULI_X, PAULIS, BlochVector

FRAME_TOL = 1e-12
UNITARITY_TOL = 1e-12
GRAM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OrthonormalFrame:
    """Three mutually orthogonal real unit vectors n1, n2, n3."""

    n1: np.ndarray
    n2: np.ndarray
    n3: np.ndarray

    def __post_init__(self) -> None:
        rows = []
        for name, v in (("n1", self.n1), ("n2", self.n2), ("n3", self.n3)):
            arr = np.asarray(v, dtype=float).reshape(-1)
            if arr.shape != (3,):
                raise FrameNotOrthonormal(f"{name} is not a 3-vector")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
            rows.append(arr)
        m = np.stack(rows)
        if np.max(np.abs(m @ m.T - np.eye(3))) > FRAME_TOL:
            raise FrameNotOrthonormal("vectors are not orthonormal within 1e-12")
        # completeness sum_k n_k n_k^T = 1 (columns orthonormal too)
        if np.max(np.abs(m.T @ m - np.eye(3))) > FRAME_TOL:
            raise FrameNotOrthonormal("completeness relation fails within 1e-12")

    @classmethod
    def standard(cls) -> "OrthonormalFrame":
        return cls(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0, 0, 1.0]))

    def rows(self) -> np.ndarray:
        return np.stack([self.n1, self.n2, self.n3])


@dataclass(frozen=True, eq=False)
class EncodingEnsemble:
    """Unitaries U_a with a prior pi_a; the channel's signal alphabet generator."""

    dim: int
    unitaries: tuple[np.ndarray, ...]
    prior: np.ndarray

    def __post_init__(self) -> None:
        d = int(self.dim)
        object.__setattr__(self, "dim", d)
        us = []
        eye = np.eye(d)
        for a, u in enumerate(self.unitaries):
            m = np.asarray(u, dtype=complex)
            if m.shape != (d, d):
                raise DimensionMismatch(f"unitary {a} has shape {m.shape}, expected ({d}, {d})")
            if np.max(np.abs(m.conj().T @ m - eye)) > UNITARITY_TOL:
                raise ValueError(f"matrix {a} is not unitary within 1e-12")
            m.setflags(write=False)
            us.append(m)
        p = np.asarray(self.prior, dtype=float).reshape(-1)
        if p.shape != (len(us),):
            raise ValueError("prior length does not match the number of unitaries")
        if np.any(p < 0.0) or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("prior must be non-negative and sum to 1 within 1e-12")
        p.setflags(write=False)
        object.__setattr__(self, "unitaries", tuple(us))
        object.__setattr__(self, "prior", p)

    def __len__(self) -> int:
        return len(self.unitaries)


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """d^2 - 1 Hermitian traceless matrices with Tr L_a L_b = d delta_ab."""

    dim: int
    lambdas: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        d = int(self.dim)
        object.__setattr__(self, "dim", d)
        mats = []
        for a, lam in enumerate(self.lambdas):
            m = np.asarray(lam, dtype=complex)
            if abs(np.trace(m)) > 1e-12:
                raise ValueError(f"basis element {a} is not traceless")
            if np.max(np.abs(m - m.conj().T)) > 1e-12:
                raise ValueError(f"basis element {a} is not Hermitian")
            m.setflags(write=False)
            mats.append(m)
        stack = np.stack(mats)
        gram = np.einsum("aij,bji->ab", stack, stack)
        if np.max(np.abs(gram - d * np.eye(len(mats)))) > 1e-12:
            raise ValueError("basis fails Tr L_a L_b = d delta_ab within 1e-12")
        object.__setattr__(self, "lambdas", tuple(mats))


def canonical_qubit_set(frame: OrthonormalFrame) -> EncodingEnsemble:
    """The four-unitary qubit encoding {1, n1.sigma, n2.sigma, n3.sigma}.

    Uniform prior 1/4; each n_k.sigma is Hermitian and unitary, and the
    set averages any qubit state to the total mixture.
    """
    us = [np.eye(2, dtype=complex)]
    for n in (frame.n1, frame.n2, frame.n3):
        us.append(n[0] * PAULIS[0] + n[1] * PAULIS[1] + n[2] * PAULIS[2])
    return EncodingEnsemble(2, tuple(us), np.full(4, 0.25))


def antipodal_pair(v: BlochVector | tuple[float, float, float]) -> EncodingEnsemble:
    """Two-unitary encoding {1, U} with prior (1/2, 1/2).

    U is a pi-rotation about the normalized v x z axis (v x x when v is
    parallel to z), so it carries the state with Bloch vector v to the
    antipodal state -v.  For |v| <= 1e-12 any unitary works; the pair
    {1, sigma_x} is returned.
    """
    if not isinstance(v, BlochVector):
        v = BlochVector(*(float(c) for c in v))
    arr = v.as_array()
    if v.norm <= 1e-12:
        u = PAULI_X.copy()
    else:
        axis = np.cross(arr, np.array([0.0, 0.0, 1.0]))
        if np.linalg.norm(axis) <= 1e-12 * v.norm:
            axis = np.cross(arr, np.array([1.0, 0.0, 0.0]))
        axis = axis / np.linalg.norm(axis)
        u = axis[0] * PAULIS[0] + axis[1] * PAULIS[1] + axis[2] * PAULIS[2]
    return EncodingEnsemble(2, (np.eye(2, dtype=complex), u), np.array([0.5, 0.5]))


def gellmann_basis(d: int) -> OperatorBasis:
    """Generalized traceless Hermitian basis rescaled to Tr L_a L_b = d delta_ab.

    Ordering: symmetric pairs (j < k) lexicographic, then antisymmetric
    pairs, then diagonal operators.  d = 2 reproduces the Pauli matrices
    in the order (x, y, z).
    """
    if d < 2:
        raise InvalidDimension(f"need d >= 2, got {d}")
    scale = math.sqrt(d / 2.0)
    mats: list[np.ndarray] = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            mats.append(scale * m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1.0j
            m[k, j] = 1.0j
            mats.append(scale * m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        m[np.arange(l), np.arange(l)] = 1.0
        m[l, l] = -l
        mats.append(scale * math.sqrt(2.0 / (l * (l + 1))) * m)
    return OperatorBasis(d, tuple(mats))


def weyl_set(d: int) -> EncodingEnsemble:
    """The d^2 shift/clock unitaries U_(p,q) = X^p Z^q with uniform prior.

    X|k> = |k+1 mod d>, Z|k> = w^k |k> with w = exp(2 pi i / d).  The set
    satisfies Tr U_a^dag U_b = d delta_ab; index a = p * d + q.
    """
    if d < 2:
        raise InvalidDimension(f"need d >= 2, got {d}")
    shift = np.zeros((d, d), dtype=complex)
    shift[(np.arange(d) + 1) % d, np.arange(d)] = 1.0
    omega = np.exp(2.0j * np.pi / d)
    clock = np.diag(omega ** np.arange(d))
    us = []
    xp = np.eye(d, dtype=complex)
    for _ in range(d):
        zq = np.eye(d, dtype=complex)
        for _ in range(d):
            us.append(xp @ zq)
            zq = zq @ clock
        xp = xp @ shift
    return EncodingEnsemble(d, tuple(us), np.full(d * d, 1.0 / (d * d)))


def verify_orthogonality(e: EncodingEnsemble) -> tuple[np.ndarray, bool]:
    """Normalized Gram matrix (1/d) Tr U_a^dag U_b and whether it is the identity.

    Returns the complex Gram matrix and True when it matches the identity
    within 1e-10 entrywise.
    """
    stack = np.stack(e.unitaries)
    gram = np.einsum("ajk,bjk->ab", stack.conj(), stack) / e.dim
    ok = bool(np.max(np.abs(gram - np.eye(len(e)))) <= GRAM_TOL)
    return gram, ok


def lift_ensemble(e: EncodingEnsemble, d_other: int, side: str = "a") -> EncodingEnsemble:
    """Embed an ensemble on one subsystem of a bipartite space (U x 1 or 1 x U)."""
    eye = np.eye(int(d_other), dtype=complex)
    if side.lower() == "a":
        us = tuple(np.kron(u, eye) for u in e.unitaries)
    elif side.lower() == "b":
        us = tuple(np.kron(eye, u) for u in e.unitaries)
    else:
        raise ValueError(f"side must be 'a' or 'b', got {side!r}")
    return EncodingEnsemble(e.dim * int(d_other), us, e.prior.copy())


def ensemble_to_json(e: EncodingEnsemble) -> dict:
    """Serialize to {"dim": d, "unitaries": [matrix, ...], "prior": [...]}."""
    mats = [np.stack([u.real, u.imag], axis=-1).tolist() for u in e.unitaries]
    return {"dim": e.dim, "unitaries": mats, "prior": [float(p) for p in e.prior]}


def ensemble_from_json(obj: dict) -> EncodingEnsemble:
    if not isinstance(obj, dict) or "dim" not in obj or "unitaries" not in obj:
        raise ParseError("ensemble JSON needs 'dim' and 'unitaries'")
    try:
        d = int(obj["dim"])
        us = []
        for entries in obj["unitaries"]:
            arr = np.asarray(entries, dtype=float)
            if arr.shape != (d, d, 2):
                raise ParseError(f"unitary shape {arr.shape} does not match dim {d}")
            us.append(arr[..., 0] + 1j * arr[..., 1])
        prior = obj.get("prior")
        p = np.full(len(us), 1.0 / len(us)) if prior is None else np.asarray(prior, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad ensemble JSON: {exc}") from None
    return EncodingEnsemble(d, tuple(us), p)
