import math

import numpy as np
import pytest

from densecap import (
    BellDecoder,
    BipartiteState,
    ClassicalJointState,
    DimensionMismatch,
    InvalidTrials,
    OrthonormalFrame,
    SingleParticleDecoder,
    antipodal_pair,
    bell_state,
    canonical_qubit_set,
    empirical_mutual_information,
    from_bloch,
    holevo_chi,
    partial_trace,
    run_classical_dense,
    run_quantum_dense,
    weyl_set,
    werner_state,
)
from densecap.qstate import DensityMatrix


CANONICAL = canonical_qubit_set(OrthonormalFrame.standard())


def z_product_state(v_a=(0, 0, 1), v_b=(0, 0, 1)) -> BipartiteState:
    return BipartiteState.from_product(from_bloch(v_a), from_bloch(v_b))


class TestQuantumProtocol:
    def test_bell_pair_bell_decoder_two_bits(self):
        trace = run_quantum_dense(bell_state(), CANONICAL, BellDecoder(), 100_000, 7)
        assert abs(trace.empirical_mi - 2.0) < 0.02
        # the four signal states are orthogonal: decoding is error-free
        off_diagonal = trace.joint_counts - np.diag(np.diag(trace.joint_counts))
        assert off_diagonal.sum() == 0

    def test_bell_pair_single_particle_no_information(self):
        trace = run_quantum_dense(bell_state(), CANONICAL, SingleParticleDecoder("z"), 100_000, 7)
        assert trace.empirical_mi < 0.01

    def test_product_state_antipodal_single_particle_one_bit(self):
        s = z_product_state()
        trace = run_quantum_dense(s, antipodal_pair((0, 0, 1)), SingleParticleDecoder("z"), 100_000, 7)
        assert abs(trace.empirical_mi - 1.0) < 0.02

    def test_x_axis_state_measured_in_x_basis(self):
        s = z_product_state(v_a=(1, 0, 0))
        trace = run_quantum_dense(s, antipodal_pair((1, 0, 0)), SingleParticleDecoder("x"), 50_000, 3)
        assert abs(trace.empirical_mi - 1.0) < 0.02

    def test_y_axis_state_measured_in_y_basis(self):
        s = z_product_state(v_a=(0, 1, 0))
        trace = run_quantum_dense(s, antipodal_pair((0, 1, 0)), SingleParticleDecoder("y"), 50_000, 3)
        assert abs(trace.empirical_mi - 1.0) < 0.02

    def test_qudit_protocol_with_weyl_encoding(self):
        from densecap import max_entangled_state

        s = max_entangled_state(3)
        # single-particle readout of the maximally mixed sender carries nothing
        trace = run_quantum_dense(s, weyl_set(3), SingleParticleDecoder("z"), 30_000, 5)
        assert trace.empirical_mi < 0.01

    def test_counts_shape_and_total(self):
        trace = run_quantum_dense(bell_state(), CANONICAL, BellDecoder(), 5_000, 1)
        assert trace.joint_counts.shape == (4, 4)
        assert trace.joint_counts.sum() == 5_000
        assert trace.trials == 5_000
        assert trace.seed == 1

    def test_mi_bounded_by_holevo_plus_sampling(self):
        tolerance = 3.0 / math.sqrt(50_000)
        cases = [
            (bell_state(), CANONICAL, BellDecoder()),
            (z_product_state(), antipodal_pair((0, 0, 1)), SingleParticleDecoder("z")),
            (werner_state(0.6), CANONICAL, BellDecoder()),
            (z_product_state(v_a=(0.6, 0, 0)), antipodal_pair((0.6, 0, 0)), SingleParticleDecoder("z")),
        ]
        for s, e, decoder in cases:
            from densecap import lift_ensemble

            lifted = lift_ensemble(e, s.dim_b, "a")
            chi = holevo_chi(lifted, s.joint)
            trace = run_quantum_dense(s, e, decoder, 50_000, 11)
            assert trace.empirical_mi <= chi + tolerance

    def test_seed_determinism(self):
        a = run_quantum_dense(bell_state(), CANONICAL, BellDecoder(), 2_000, 42)
        b = run_quantum_dense(bell_state(), CANONICAL, BellDecoder(), 2_000, 42)
        assert np.array_equal(a.joint_counts, b.joint_counts)
        assert a.empirical_mi == b.empirical_mi
        c = run_quantum_dense(bell_state(), CANONICAL, BellDecoder(), 2_000, 43)
        assert not np.array_equal(a.joint_counts, c.joint_counts)

    def test_invalid_trials(self):
        with pytest.raises(InvalidTrials):
            run_quantum_dense(bell_state(), CANONICAL, BellDecoder(), 0, 0)

    def test_dimension_mismatches(self):
        with pytest.raises(DimensionMismatch):
            run_quantum_dense(bell_state(), weyl_set(3), BellDecoder(), 10, 0)
        s23 = BipartiteState.from_product(from_bloch((0, 0, 1)), DensityMatrix(np.eye(3) / 3))
        with pytest.raises(DimensionMismatch):
            run_quantum_dense(s23, CANONICAL, BellDecoder(), 10, 0)
        with pytest.raises(DimensionMismatch):
            run_quantum_dense(
                BipartiteState.from_product(DensityMatrix(np.eye(3) / 3), from_bloch((0, 0, 1))),
                weyl_set(3),
                SingleParticleDecoder("x"),
                10,
                0,
            )

    def test_marginal_of_signals_matches_sampler(self):
        # empirical outcome frequencies approach the Born probabilities
        s = werner_state(0.5)
        trace = run_quantum_dense(s, CANONICAL, BellDecoder(), 200_000, 13)
        freq = trace.joint_counts / trace.joint_counts.sum()
        from densecap import lift_ensemble

        lifted = lift_ensemble(CANONICAL, 2, "a")
        from densecap.qstate import _BELL_VECTORS

        basis = [_BELL_VECTORS[k] for k in ("psi+", "phi+", "phi-", "psi-")]
        for a, u in enumerate(lifted.unitaries):
            sig = u @ s.joint.matrix @ u.conj().T
            born = np.array([np.real(v.conj() @ sig @ v) for v in basis]) * 0.25
            assert np.max(np.abs(freq[a] - born)) < 0.01

    def test_to_json(self):
        trace = run_quantum_dense(bell_state(), CANONICAL, BellDecoder(), 100, 2)
        obj = trace.to_json()
        assert obj["trials"] == 100
        assert sum(sum(row) for row in obj["counts"]) == 100
        assert obj["seed"] == 2


class TestClassicalProtocol:
    def test_key_recovers_one_bit(self):
        trace = run_classical_dense(ClassicalJointState.maximally_correlated(), True, 100_000, 7)
        assert abs(trace.empirical_mi - 1.0) < 0.01
        # decoding is deterministic: outcome equals message in every trial
        assert trace.joint_counts[0, 1] == 0
        assert trace.joint_counts[1, 0] == 0

    def test_without_key_no_information(self):
        trace = run_classical_dense(ClassicalJointState.maximally_correlated(), False, 100_000, 7)
        assert trace.empirical_mi < 0.01

    def test_uncorrelated_key_is_noise(self):
        trace = run_classical_dense(ClassicalJointState.uncorrelated_uniform(), True, 100_000, 7)
        assert trace.empirical_mi < 0.02

    def test_biased_joint_distribution(self):
        # p(00) = 0.9, p(11) = 0.1: still perfectly correlated, still one bit
        state = ClassicalJointState(np.array([[0.9, 0.0], [0.0, 0.1]]))
        trace = run_classical_dense(state, True, 50_000, 3)
        assert abs(trace.empirical_mi - 1.0) < 0.01

    def test_seed_determinism(self):
        a = run_classical_dense(ClassicalJointState.maximally_correlated(), True, 5_000, 0)
        b = run_classical_dense(ClassicalJointState.maximally_correlated(), True, 5_000, 0)
        assert np.array_equal(a.joint_counts, b.joint_counts)

    def test_invalid_trials(self):
        with pytest.raises(InvalidTrials):
            run_classical_dense(ClassicalJointState.maximally_correlated(), True, 0, 0)

    def test_state_validation(self):
        with pytest.raises(ValueError):
            ClassicalJointState(np.array([[0.5, 0.5], [0.5, 0.5]]))
        with pytest.raises(ValueError):
            ClassicalJointState(np.array([[1.5, 0.0], [0.0, -0.5]]))


class TestEmpiricalMi:
    def test_perfect_channel(self):
        counts = np.diag([25, 25, 25, 25])
        assert empirical_mutual_information(counts) == pytest.approx(2.0, abs=1e-12)

    def test_independent_table(self):
        counts = np.full((2, 2), 100)
        assert empirical_mutual_information(counts) == pytest.approx(0.0, abs=1e-12)

    def test_bounded_by_alphabet_sizes(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            counts = rng.integers(0, 50, size=(4, 3))
            if counts.sum() == 0:
                continue
            mi = empirical_mutual_information(counts)
            assert 0.0 <= mi <= min(math.log2(4), math.log2(3)) + 1e-12

    def test_empty_table(self):
        assert empirical_mutual_information(np.zeros((2, 2))) == 0.0


def test_trace_rejects_inconsistent_totals():
    from densecap import ProtocolTrace

    with pytest.raises(ValueError):
        ProtocolTrace(10, np.array([[1, 0], [0, 1]]), 0.0, 0)


def test_single_particle_reduction_matches_partial_trace():
    # decoder sees Tr_B of the encoded state
    s = werner_state(0.3)
    u = CANONICAL.unitaries[2]
    lifted = np.kron(u, np.eye(2))
    sig = lifted @ s.joint.matrix @ lifted.conj().T
    reduced = partial_trace(DensityMatrix(sig), (2, 2), "A")
    expected = u @ s.reduced_a.matrix @ u.conj().T
    assert np.allclose(reduced.matrix, expected, atol=1e-12)
