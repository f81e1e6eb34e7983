"""Channel capacities of noiseless qubit/qudit channels.

Holevo quantity and its maximization over input priors, the closed-form
normal and dense-coding capacities in both directions, and the quantum
mutual information that equals their difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .encodings import EncodingEnsemble, lift_ensemble, weyl_set
from .errors import DimensionMismatch, NoStates
from .qstate import BipartiteState, DensityMatrix, von_neumann_entropy

RELATIVE_ENTROPY_CAP = 50.0
_SUPPORT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CapacityReport:
    """Result of a prior optimization.

    chi_trace records the objective after each fixed-point evaluation;
    the sequence is non-decreasing for this concave objective.
    """

    chi: float
    optimal_prior: np.ndarray
    average_state: DensityMatrix
    iterations: int
    converged: bool
    chi_trace: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "chi": float(self.chi),
            "prior": [float(p) for p in self.optimal_prior],
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
        }


def average_state(e: EncodingEnsemble, rho: DensityMatrix) -> DensityMatrix:
    """Prior-weighted average sum_a pi_a U_a rho U_a^dag."""
    if e.dim != rho.dim:
        raise DimensionMismatch(f"ensemble dim {e.dim} != state dim {rho.dim}")
    stack = np.stack(e.unitaries)
    avg = np.einsum("a,aij,jk,alk->il", e.prior, stack, rho.matrix, stack.conj(), optimize=True)
    return DensityMatrix(avg)


def holevo_chi(e: EncodingEnsemble, rho: DensityMatrix) -> float:
    """Holevo quantity S(avg) - sum_a pi_a S(U_a rho U_a^dag) in bits.

    For a noiseless channel the unitaries preserve entropy, so this
    equals S(avg) - S(rho); the weighted sum is evaluated anyway.
    """
    if e.dim != rho.dim:
        raise DimensionMismatch(f"ensemble dim {e.dim} != state dim {rho.dim}")
    avg = average_state(e, rho)
    signal_entropy = 0.0
    for pi_a, u in zip(e.prior, e.unitaries):
        signal_entropy += pi_a * von_neumann_entropy(u @ rho.matrix @ u.conj().T)
    chi = von_neumann_entropy(avg) - signal_entropy
    return max(chi, 0.0)


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Quantum relative entropy D(rho || sigma) in bits.

    Infinite when supp(rho) is not contained in supp(sigma); capped at
    50 bits as a numerical guard (unreachable from a strictly positive
    prior).
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"dim {rho.dim} != dim {sigma.dim}")
    lam = rho.eigenvalues()
    plus = lam[lam > 0.0]
    first = float(np.sum(plus * np.log2(plus)))
    mu, vecs = np.linalg.eigh(sigma.matrix)
    weights = np.real(np.einsum("ji,jk,ki->i", vecs.conj(), rho.matrix, vecs))
    support = mu > _SUPPORT_TOL
    if float(np.sum(np.abs(weights[~support]))) > 1e-9:
        return RELATIVE_ENTROPY_CAP
    second = float(np.sum(weights[support] * np.log2(mu[support])))
    return min(first - second, RELATIVE_ENTROPY_CAP)


def optimize_prior(
    states: list[DensityMatrix], tol: float = 1e-9, max_iter: int = 100_000
) -> CapacityReport:
    """Maximize chi(pi) = S(sum pi_a rho_a) - sum pi_a S(rho_a) over priors.

    Multiplicative fixed point pi'_a ~ pi_a 2^{D(rho_a || avg)} starting
    from the uniform prior.  Stops when the capacity gap
    max_a D(rho_a || avg) - chi drops below tol, which certifies chi
    within tol of the optimum; states leaving the optimal support have
    D below chi and do not block termination.  Non-convergence within
    max_iter is reported via converged=False, never an exception.
    """
    if not states:
        raise NoStates("optimize_prior needs at least one state")
    dim = states[0].dim
    if any(s.dim != dim for s in states):
        raise DimensionMismatch("signal states have mixed dimensions")
    n = len(states)
    mats = np.stack([s.matrix for s in states])
    entropies = np.array([von_neumann_entropy(s) for s in states])

    pi = np.full(n, 1.0 / n)
    trace: list[float] = []
    converged = False
    iterations = 0
    chi = 0.0
    avg = DensityMatrix(np.einsum("a,aij->ij", pi, mats))
    for it in range(1, max_iter + 1):
        iterations = it
        avg = DensityMatrix(np.einsum("a,aij->ij", pi, mats))
        divergences = np.array([relative_entropy(s, avg) for s in states])
        chi = max(von_neumann_entropy(avg) - float(pi @ entropies), 0.0)
        trace.append(chi)
        gap = float(divergences.max()) - chi
        if gap < tol:
            converged = True
            break
        if it == max_iter:
            break
        weights = pi * np.exp2(divergences - divergences.max())
        pi = weights / weights.sum()
    return CapacityReport(chi, pi, avg, iterations, converged, tuple(trace))


def normal_capacity(rho: DensityMatrix) -> float:
    """Capacity log2 d - S(rho) of the noiseless channel without dense coding."""
    return math.log2(rho.dim) - von_neumann_entropy(rho)


def dense_capacity(s: BipartiteState, direction: str = "a2b") -> float:
    """Dense-coding capacity of a noiseless channel over a shared pair.

    a2b: log2 d_A + S(rho_B) - S(rho_AB); b2a swaps the roles.  The two
    directions differ by S(rho_B) - S(rho_A) in general.
    """
    direction = direction.lower()
    if direction == "a2b":
        return math.log2(s.dim_a) + von_neumann_entropy(s.reduced_b) - von_neumann_entropy(s.joint)
    if direction == "b2a":
        return math.log2(s.dim_b) + von_neumann_entropy(s.reduced_a) - von_neumann_entropy(s.joint)
    raise ValueError(f"direction must be 'a2b' or 'b2a', got {direction!r}")


def dense_capacity_via_ensemble(
    s: BipartiteState, direction: str = "a2b", tol: float = 1e-9, max_iter: int = 100_000
) -> CapacityReport:
    """Cross-check route for dense_capacity.

    Builds the d^2 shift/clock signal states on the sender's side and
    runs the prior optimizer on them; the resulting chi reproduces the
    closed form.
    """
    direction = direction.lower()
    if direction == "a2b":
        lifted = lift_ensemble(weyl_set(s.dim_a), s.dim_b, side="a")
    elif direction == "b2a":
        lifted = lift_ensemble(weyl_set(s.dim_b), s.dim_a, side="b")
    else:
        raise ValueError(f"direction must be 'a2b' or 'b2a', got {direction!r}")
    signals = [DensityMatrix(u @ s.joint.matrix @ u.conj().T) for u in lifted.unitaries]
    return optimize_prior(signals, tol=tol, max_iter=max_iter)


def mutual_information(s: BipartiteState) -> float:
    """Quantum mutual information S(rho_A) + S(rho_B) - S(rho_AB) in bits."""
    mi = (
        von_neumann_entropy(s.reduced_a)
        + von_neumann_entropy(s.reduced_b)
        - von_neumann_entropy(s.joint)
    )
    return max(mi, 0.0)
