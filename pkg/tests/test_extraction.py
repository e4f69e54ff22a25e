import numpy as np
import pytest

from aaqpt.catalog import PAULI_X, horodecki, max_entangled, probe_states, sigma_e
from aaqpt.channel import apply, apply_extended, make_channel, propagate, superoperator
from aaqpt.errors import DimensionMismatchError, NotFaithfulError
from aaqpt.extraction import (
    demonstrate_unfaithfulness,
    extract,
    kernel_witness_pair,
    reachable_report,
)
from aaqpt.qstate import bipartite, tensor, trace_distance
from aaqpt.realignment import realign
from aaqpt.sampling import random_bipartite, random_channel, random_unitary

I2 = np.eye(2, dtype=complex)


def bitflip_channel():
    return make_channel([I2 / np.sqrt(2), PAULI_X / np.sqrt(2)])


def faithful_random_state(d, rng):
    # Ginibre states are full realignment rank almost surely; guard anyway.
    while True:
        s = random_bipartite(d, d, rng)
        if np.linalg.svd(realign(s), compute_uv=False).min() > 1e-6:
            return s


class TestExtract:
    def test_bitflip_reproduces_reference_map(self):
        bell = max_entangled(2)
        out = apply_extended(bitflip_channel(), bell)
        result = extract(bell, out, mode="strict")
        expected = (tensor(I2, I2) + tensor(PAULI_X, PAULI_X)) / 2
        assert np.abs(result.m.matrix - expected).max() < 1e-10
        assert result.truncated_count == 0
        assert result.residual < 1e-12

    def test_strict_rejects_rank_deficient_input(self):
        s = sigma_e(0.5)
        with pytest.raises(NotFaithfulError) as excinfo:
            extract(s, s, mode="strict")
        assert excinfo.value.kernel_dimension == 2

    def test_round_trip_random(self):
        rng = np.random.default_rng(71)
        for d in (2, 3):
            for _ in range(5):
                s = faithful_random_state(d, rng)
                ch = random_channel(d, 2, rng)
                out = apply_extended(ch, s)
                result = extract(s, out, mode="strict")
                assert np.abs(result.m.matrix - superoperator(ch).matrix).max() < 1e-9
                assert result.residual < 1e-10
                for probe in probe_states(d):
                    predicted = propagate(result.m, probe.matrix)
                    direct = apply(ch, probe).matrix
                    assert trace_distance(predicted, direct) < 1e-9

    def test_pseudo_equals_strict_on_faithful_inputs(self):
        rng = np.random.default_rng(72)
        s = faithful_random_state(3, rng)
        out = apply_extended(random_channel(3, 2, rng), s)
        strict = extract(s, out, mode="strict")
        pseudo = extract(s, out, mode="pseudo")
        assert np.abs(strict.m.matrix - pseudo.m.matrix).max() < 1e-9
        assert pseudo.truncated_count == 0

    def test_pseudo_on_unfaithful_input(self):
        rng = np.random.default_rng(73)
        s = sigma_e(0.5)
        ch = random_channel(3, 2, rng)
        out = apply_extended(ch, s)
        result = extract(s, out, mode="pseudo")
        assert result.truncated_count == 2
        assert result.residual < 1e-10
        # predictions are exact on probe operators inside the probed
        # subspace: the span of the nonzero-singular-value directions of
        # realign(s), here everything built on |0>, plus |1><1| and |2><2|
        v01 = np.zeros(3, dtype=complex)
        v01[0] = v01[1] = 1 / np.sqrt(2)
        probed = [
            np.diag([1.0, 0.0, 0.0]).astype(complex),
            np.diag([0.0, 1.0, 0.0]).astype(complex),
            np.outer(v01, v01.conj()),
        ]
        for sigma in probed:
            predicted = propagate(result.m, sigma)
            direct = sum(k @ sigma @ k.conj().T for k in ch.kraus)
            assert np.abs(predicted - direct).max() < 1e-10

    def test_extraction_commutes_with_ancilla_rotation(self):
        rng = np.random.default_rng(74)
        d = 3
        s = faithful_random_state(d, rng)
        ch = random_channel(d, 2, rng)
        out = apply_extended(ch, s)
        u = tensor(np.eye(d), random_unitary(d, rng))
        s_rot = bipartite(u @ s.matrix @ u.conj().T, d, d)
        out_rot = bipartite(u @ out.matrix @ u.conj().T, d, d)
        m_plain = extract(s, out, mode="strict").m.matrix
        m_rot = extract(s_rot, out_rot, mode="strict").m.matrix
        assert np.abs(m_plain - m_rot).max() < 1e-9

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(75)
        with pytest.raises(DimensionMismatchError):
            extract(random_bipartite(2, 2, rng), random_bipartite(3, 3, rng))

    def test_unequal_factors_with_full_row_rank(self):
        # a generic 2x3 state has realignment rank 4 = dim_a^2, which is
        # enough for an exact unique solve even though the matrix is 4x9
        rng = np.random.default_rng(78)
        s = random_bipartite(2, 3, rng)
        ch = random_channel(2, 2, rng)
        out = apply_extended(ch, s)
        result = extract(s, out, mode="strict")
        assert result.m.matrix.shape == (4, 4)
        assert result.residual < 1e-10
        assert np.abs(result.m.matrix - superoperator(ch).matrix).max() < 1e-9

    def test_unequal_factors_rank_deficient(self):
        # a pure product 2x3 state probes only one operator direction
        rng = np.random.default_rng(79)
        from aaqpt.sampling import random_product_state

        s = random_product_state(2, 3, rng)
        ch = random_channel(2, 2, rng)
        out = apply_extended(ch, s)
        with pytest.raises(NotFaithfulError):
            extract(s, out, mode="strict")
        result = extract(s, out, mode="pseudo")
        assert result.residual < 1e-10

    def test_invalid_mode(self):
        rng = np.random.default_rng(76)
        s = random_bipartite(2, 2, rng)
        with pytest.raises(ValueError):
            extract(s, s, mode="sloppy")

    def test_choi_eigenvalue_diagnostics(self):
        bell = max_entangled(2)
        out = apply_extended(bitflip_channel(), bell)
        result = extract(bell, out, mode="strict")
        # the reference map is completely positive: Choi eigenvalues {0,0,1,1}
        assert np.allclose(np.sort(result.choi_eigenvalues), [0, 0, 1, 1], atol=1e-10)


class TestReachableReport:
    def test_bell_state_full_rank(self):
        rep = reachable_report(max_entangled(2))
        assert rep.kernel_dimension == 0
        assert rep.kernel_basis == ()

    def test_two_projector_mixture_kernel(self):
        for p in (0.25, 0.5, 0.75):
            rep = reachable_report(sigma_e(p))
            assert rep.kernel_dimension == 2

    def test_bound_entangled_kernel(self):
        rep = reachable_report(horodecki(0.5))
        assert rep.kernel_dimension == 1

    def test_kernel_basis_orthonormal_and_unprobed(self):
        s = sigma_e(0.5)
        rep = reachable_report(s)
        r = realign(s)
        for i, b1 in enumerate(rep.kernel_basis):
            for j, b2 in enumerate(rep.kernel_basis):
                inner = np.trace(b1.conj().T @ b2)
                assert abs(inner - (1.0 if i == j else 0.0)) < 1e-12
            # kernel directions annihilate the realigned data from the left:
            # channels differing only there produce identical outputs
            assert np.abs(b1.reshape(-1).conj() @ r).max() < 1e-12


class TestDemonstrateUnfaithfulness:
    def test_identical_channels(self):
        ch = make_channel([np.eye(3)])
        rep = demonstrate_unfaithfulness(sigma_e(0.5), ch, ch)
        assert rep.output_gap == pytest.approx(0.0, abs=1e-15)
        assert rep.channel_gap == pytest.approx(0.0, abs=1e-15)
        assert not rep.witnessed

    def test_witness_pair_on_two_projector_mixture(self):
        s = sigma_e(0.5)
        ch_a, ch_b = kernel_witness_pair(s)
        rep = demonstrate_unfaithfulness(s, ch_a, ch_b)
        assert rep.output_gap < 1e-9
        assert rep.channel_gap > 0.01
        assert rep.witnessed

    def test_faithful_state_separates_distinct_channels(self):
        rng = np.random.default_rng(77)
        bell = max_entangled(2)
        ch_a = make_channel([I2])
        ch_b = bitflip_channel()
        rep = demonstrate_unfaithfulness(bell, ch_a, ch_b)
        assert rep.output_gap > 0.01
        assert not rep.witnessed

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            demonstrate_unfaithfulness(sigma_e(0.5), make_channel([I2]), make_channel([I2]))


class TestKernelWitnessPair:
    def test_channels_are_genuinely_different(self):
        s = sigma_e(0.5)
        ch_a, ch_b = kernel_witness_pair(s)
        m_a = superoperator(ch_a).matrix
        m_b = superoperator(ch_b).matrix
        assert np.abs(m_a - m_b).max() > 0.01

    def test_difference_is_kernel_supported(self):
        s = sigma_e(0.5)
        ch_a, ch_b = kernel_witness_pair(s)
        delta = superoperator(ch_a).matrix - superoperator(ch_b).matrix
        assert np.abs(delta @ realign(s)).max() < 1e-12

    def test_rejects_faithful_input(self):
        with pytest.raises(ValueError):
            kernel_witness_pair(max_entangled(2))

    def test_rejects_bad_strength(self):
        with pytest.raises(ValueError):
            kernel_witness_pair(sigma_e(0.5), mixing=0.2, strength=0.5)

    def test_works_on_bound_entangled_family(self):
        s = horodecki(0.5)
        ch_a, ch_b = kernel_witness_pair(s)
        rep = demonstrate_unfaithfulness(s, ch_a, ch_b)
        assert rep.output_gap < 1e-9
        assert rep.channel_gap > 0.0
