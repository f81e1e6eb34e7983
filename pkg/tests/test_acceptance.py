"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Every tolerance is pinned here; runtime-bounded criteria are timed with
perf_counter and asserted against their stated budgets.
"""

import time

import numpy as np

from densecap import (
    BellDecoder,
    ClassicalJointState,
    DensityMatrix,
    OrthonormalFrame,
    SingleParticleDecoder,
    antipodal_pair,
    average_state,
    bell_state,
    canonical_qubit_set,
    concurrence_oracle,
    convex_roof,
    dense_capacity,
    from_bloch,
    lift_ensemble,
    mutual_information,
    normal_capacity,
    optimize_prior,
    run_classical_dense,
    run_quantum_dense,
    von_neumann_entropy,
    weyl_set,
    werner_state,
)
from densecap.sampling import (
    random_bipartite_state,
    random_density_matrix,
    random_orthonormal_frame,
)
from densecap.qstate import PAULIS


def report(number: int, ok: bool, detail: str) -> None:
    print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {number} failed: {detail}"


def _ginibre_batch(rng, count: int, dim: int) -> np.ndarray:
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    m = g @ g.conj().transpose(0, 2, 1)
    traces = np.einsum("sii->s", m).real
    return m / traces[:, None, None]


def test_criterion_01_frame_twirl():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    states = _ginibre_batch(rng, 1000, 2)
    sigma = np.stack(PAULIS)
    target = np.eye(2) / 2.0
    worst = 0.0
    for _ in range(100):
        frame = random_orthonormal_frame(rng)
        u = np.empty((4, 2, 2), dtype=complex)
        u[0] = np.eye(2)
        u[1:] = np.einsum("ka,aij->kij", frame.rows(), sigma)
        avg = np.einsum("uij,sjk,ulk->sil", u, states, u.conj()) / 4.0
        resid = np.sqrt(np.sum(np.abs(avg - target) ** 2, axis=(1, 2)))
        worst = max(worst, float(resid.max()))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and elapsed < 5.0
    report(1, ok, f"1000 states x 100 frames, max twirl residual {worst:.3e} "
                  f"(< 1e-12), {elapsed:.2f}s (< 5s)")


def test_criterion_02_qudit_twirl_and_gram():
    rng = np.random.default_rng(102)
    worst_twirl = 0.0
    worst_gram = 0.0
    for d in (2, 3, 4, 5):
        e = weyl_set(d)
        stack = np.stack(e.unitaries)
        gram = np.einsum("ajk,bjk->ab", stack.conj(), stack)
        worst_gram = max(worst_gram, float(np.max(np.abs(gram - d * np.eye(d * d)))))
        states = _ginibre_batch(rng, 200, d)
        avg = np.einsum("aij,sjk,alk->sil", stack, states, stack.conj()) / (d * d)
        resid = np.sqrt(np.sum(np.abs(avg - np.eye(d) / d) ** 2, axis=(1, 2)))
        worst_twirl = max(worst_twirl, float(resid.max()))
    ok = worst_twirl < 1e-10 and worst_gram < 1e-12
    report(2, ok, f"d in 2..5, 200 states each: twirl residual {worst_twirl:.3e} "
                  f"(< 1e-10), Gram residual {worst_gram:.3e} (< 1e-12)")


def test_criterion_03_paper_capacity_values():
    c_dense = dense_capacity(bell_state(), "a2b")
    c_normal = normal_capacity(DensityMatrix(np.eye(2) / 2.0))
    ok = abs(c_dense - 2.0) < 1e-9 and abs(c_normal) < 1e-9
    report(3, ok, f"Bell C_dense(A->B) = {c_dense:.12f} (2 +- 1e-9), "
                  f"C_normal(1/2) = {c_normal:.2e} (0 +- 1e-9)")


def test_criterion_04_difference_identity():
    rng = np.random.default_rng(104)
    worst_identity = 0.0
    worst_asym = 0.0
    for _ in range(1000):
        s = random_bipartite_state((2, 2), rng, rank=int(rng.integers(1, 5)))
        mi = mutual_information(s)
        for direction, sender in (("a2b", s.reduced_a), ("b2a", s.reduced_b)):
            gap = dense_capacity(s, direction) - normal_capacity(sender)
            worst_identity = max(worst_identity, abs(gap - mi))
        asym = dense_capacity(s, "a2b") - dense_capacity(s, "b2a")
        expected = von_neumann_entropy(s.reduced_b) - von_neumann_entropy(s.reduced_a)
        worst_asym = max(worst_asym, abs(asym - expected))
    ok = worst_identity < 1e-9 and worst_asym < 1e-9
    report(4, ok, f"1000 random two-qubit states, both directions: identity residual "
                  f"{worst_identity:.3e}, asymmetry residual {worst_asym:.3e} (< 1e-9)")


def _simplex_grid(ticks: int) -> np.ndarray:
    rows = [
        (i, j, k, ticks - i - j - k)
        for i in range(ticks + 1)
        for j in range(ticks + 1 - i)
        for k in range(ticks + 1 - i - j)
    ]
    return np.asarray(rows, dtype=float) / ticks


def _grid_chi_max(signals: np.ndarray, grid: np.ndarray) -> float:
    """Vectorized chi over the prior grid using closed-form 2x2 eigenvalues."""
    flat = signals.reshape(4, 4)
    avg = (grid @ flat).reshape(-1, 2, 2)
    a = avg[:, 0, 0].real
    d = avg[:, 1, 1].real
    mid = (a + d) / 2.0
    rad = np.sqrt(((a - d) / 2.0) ** 2 + np.abs(avg[:, 0, 1]) ** 2)
    eigs = np.stack([np.clip(mid - rad, 0.0, 1.0), np.clip(mid + rad, 0.0, 1.0)], axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(eigs > 0.0, eigs * np.log2(np.maximum(eigs, 1e-300)), 0.0)
    avg_entropy = -terms.sum(axis=1)
    signal_entropies = np.array(
        [von_neumann_entropy(DensityMatrix(signals[i])) for i in range(4)]
    )
    chi = avg_entropy - grid @ signal_entropies
    return float(chi.max())


def test_criterion_05_prior_optimizer():
    rng = np.random.default_rng(105)
    grid = _simplex_grid(100)  # step 0.01 over the 3-simplex
    worst_prior = 0.0
    worst_chi = 0.0
    worst_grid = 0.0
    max_iters = 0
    monotone = True
    for _ in range(100):
        e = canonical_qubit_set(random_orthonormal_frame(rng))
        rho = random_density_matrix(2, rng, rank=int(rng.integers(1, 3)))
        signals = np.stack([u @ rho.matrix @ u.conj().T for u in e.unitaries])
        states = [DensityMatrix(m) for m in signals]
        rep = optimize_prior(states, tol=1e-9, max_iter=10_000)
        worst_prior = max(worst_prior, float(np.max(np.abs(rep.optimal_prior - 0.25))))
        worst_chi = max(worst_chi, abs(rep.chi - (1.0 - von_neumann_entropy(rho))))
        max_iters = max(max_iters, rep.iterations)
        monotone = monotone and bool(np.all(np.diff(rep.chi_trace) > -1e-12))
        worst_grid = max(worst_grid, abs(rep.chi - _grid_chi_max(signals, grid)))
    worst_pair = 0.0
    for _ in range(20):
        v = rng.uniform(-1, 1, 3)
        v /= np.linalg.norm(v)
        pair = antipodal_pair(tuple(v))
        rho = from_bloch(tuple(v))
        states = [DensityMatrix(u @ rho.matrix @ u.conj().T) for u in pair.unitaries]
        rep = optimize_prior(states, tol=1e-9, max_iter=10_000)
        worst_pair = max(worst_pair, float(np.max(np.abs(rep.optimal_prior - 0.5))))
    ok = (
        worst_prior < 1e-6
        and worst_chi < 1e-8
        and max_iters < 10_000
        and monotone
        and worst_grid < 1e-4
        and worst_pair < 1e-6
    )
    report(5, ok, f"100 random states: prior off uniform {worst_prior:.2e} (< 1e-6), "
                  f"chi error {worst_chi:.2e} (< 1e-8), iters <= {max_iters} (< 1e4), "
                  f"monotone {monotone}, grid gap {worst_grid:.2e} (< 1e-4), "
                  f"antipodal prior off 1/2 {worst_pair:.2e} (< 1e-6)")


def test_criterion_06_averaged_dense_coding_state():
    rng = np.random.default_rng(106)
    worst = 0.0
    for _ in range(500):
        s = random_bipartite_state((2, 2), rng, rank=int(rng.integers(1, 5)))
        lifted = lift_ensemble(canonical_qubit_set(random_orthonormal_frame(rng)), 2, "a")
        avg = average_state(lifted, s.joint)
        expected = np.kron(np.eye(2) / 2.0, s.reduced_b.matrix)
        worst = max(worst, float(np.linalg.norm(avg.matrix - expected)))
    ok = worst < 1e-10
    report(6, ok, f"500 random two-qubit states: max |avg - (1/2) x rho_B| = "
                  f"{worst:.3e} (< 1e-10)")


def test_criterion_07_protocol_simulation():
    start = time.perf_counter()
    canonical = canonical_qubit_set(OrthonormalFrame.standard())
    bell = bell_state()

    quantum = run_quantum_dense(bell, canonical, BellDecoder(), 100_000, 707)
    errors = int(quantum.joint_counts.sum() - np.trace(quantum.joint_counts))
    single = run_quantum_dense(bell, canonical, SingleParticleDecoder("z"), 100_000, 707)
    keyed = run_classical_dense(ClassicalJointState.maximally_correlated(), True, 100_000, 707)
    keyless = run_classical_dense(ClassicalJointState.maximally_correlated(), False, 100_000, 707)
    elapsed = time.perf_counter() - start

    ok = (
        abs(quantum.empirical_mi - 2.0) < 0.02
        and errors == 0
        and single.empirical_mi < 0.01
        and abs(keyed.empirical_mi - 1.0) < 0.01
        and keyless.empirical_mi < 0.01
        and elapsed < 10.0
    )
    report(7, ok, f"Bell decoder MI {quantum.empirical_mi:.4f} (2 +- 0.02, {errors} errors), "
                  f"single-particle MI {single.empirical_mi:.2e} (< 0.01), classical keyed "
                  f"{keyed.empirical_mi:.4f} (1 +- 0.01), keyless {keyless.empirical_mi:.2e} "
                  f"(< 0.01), {elapsed:.2f}s (< 10s)")


def test_criterion_08_convex_roof_vs_oracle():
    start = time.perf_counter()
    worst_gap = 0.0
    worst_separable = 0.0
    for p in (0.0, 0.25, 0.4, 0.6, 0.8, 1.0):
        s = werner_state(p)
        res = convex_roof(s, restarts=32, tol=1e-6, seed=808)
        _, ef = concurrence_oracle(s)
        gap = abs(res.value - 2.0 * ef)
        worst_gap = max(worst_gap, gap)
        if p <= 1.0 / 3.0:
            worst_separable = max(worst_separable, res.value)
    elapsed = time.perf_counter() - start
    ok = worst_gap < 5e-3 and worst_separable < 1e-3 and elapsed < 60.0
    report(8, ok, f"Werner sweep: max |roof - 2 E_F| = {worst_gap:.2e} (< 5e-3), "
                  f"separable values <= {worst_separable:.2e} (< 1e-3), "
                  f"{elapsed:.1f}s (< 60s)")


def test_criterion_09_entanglement_witness():
    rng = np.random.default_rng(109)
    hits = 0
    counterexamples = 0
    for _ in range(10_000):
        s = random_bipartite_state((2, 2), rng, rank=int(rng.integers(1, 5)))
        if dense_capacity(s, "a2b") > 1.0:
            hits += 1
            if von_neumann_entropy(s.reduced_b) <= von_neumann_entropy(s.joint):
                counterexamples += 1
    ok = counterexamples == 0 and hits > 0
    report(9, ok, f"10^4 random two-qubit states: {hits} with C_dense > 1, "
                  f"{counterexamples} counterexamples to S(rho_B) > S(rho_AB)")


def test_criterion_10_werner_spot_values():
    s = werner_state(0.5)
    entropy = von_neumann_entropy(s.joint)
    c_dense = dense_capacity(s, "a2b")
    mi = mutual_information(s)
    ok = (
        abs(entropy - 1.548795) < 1e-6
        and abs(c_dense - 0.451205) < 1e-6
        and abs(mi - 0.451205) < 1e-6
    )
    report(10, ok, f"Werner p=0.5: S = {entropy:.6f} (1.548795), C_dense = {c_dense:.6f} "
                   f"(0.451205), MI = {mi:.6f} (0.451205), all +- 1e-6")
