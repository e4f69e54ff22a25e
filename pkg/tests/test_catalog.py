import numpy as np
import pytest

from aaqpt.catalog import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    horodecki,
    loo_basis,
    max_entangled,
    probe_states,
    sigma_e,
)
from aaqpt.errors import ParameterOutOfRangeError, UnsupportedDimensionError
from aaqpt.qstate import partial_trace, purity, tensor
from aaqpt.realignment import ccnr_sum, is_faithful, ppt_min_eigenvalue
from aaqpt.sampling import random_density


class TestMaxEntangled:
    def test_qubit_projector(self):
        expected = np.zeros((4, 4), dtype=complex)
        for i in (0, 3):
            for j in (0, 3):
                expected[i, j] = 0.5
        assert np.allclose(max_entangled(2).matrix, expected, atol=1e-15)

    def test_qutrit_marginal_is_maximally_mixed(self):
        s = max_entangled(3)
        assert np.allclose(partial_trace(s, "B").matrix, np.eye(3) / 3, atol=1e-12)

    def test_unnormalized_trace(self):
        for d in (2, 3, 4):
            raw = max_entangled(d, normalized=False)
            assert np.trace(raw) == pytest.approx(d)

    def test_faithful(self):
        verdict = is_faithful(max_entangled(2))
        assert verdict.faithful
        assert np.allclose(verdict.spectrum.values, 0.5)

    def test_parameter_validation(self):
        with pytest.raises(ParameterOutOfRangeError):
            max_entangled(1)


class TestSigmaE:
    def test_pure_at_endpoint(self):
        s = sigma_e(1.0)
        assert purity(s.state) == pytest.approx(1.0, abs=1e-12)

    def test_realignment_spectrum_formula(self):
        for p in (0.0, 0.2, 0.5, 0.8, 1.0):
            verdict = is_faithful(sigma_e(p))
            expected = np.sort(
                [0.5, p / 2, (1 - p) / 2, p / 2, p / 2, 0, (1 - p) / 2, 0, (1 - p) / 2]
            )
            assert np.allclose(np.sort(verdict.spectrum.values), expected, atol=1e-12)

    def test_npt_at_half(self):
        assert ppt_min_eigenvalue(sigma_e(0.5)) < -0.01

    def test_entangled_on_grid(self):
        for p in np.linspace(0.0, 1.0, 11):
            s = sigma_e(float(p))
            assert max(ccnr_sum(s) - 1, -ppt_min_eigenvalue(s)) > 0.01

    def test_parameter_validation(self):
        for bad in (-0.1, 1.1):
            with pytest.raises(ParameterOutOfRangeError):
                sigma_e(bad)


class TestHorodecki:
    def test_exact_trace(self):
        for a in (0.1, 0.5, 0.9):
            assert np.trace(horodecki(a).matrix) == pytest.approx(1.0, abs=1e-15)

    def test_ppt(self):
        for a in (0.1, 0.5, 0.9):
            assert ppt_min_eigenvalue(horodecki(a)) >= -1e-10

    def test_unfaithful_with_kernel_one(self):
        for a in (0.1, 0.5, 0.9):
            verdict = is_faithful(horodecki(a))
            assert not verdict.faithful
            assert verdict.kernel_dimension == 1

    def test_entry_structure(self):
        a = 0.3
        m = horodecki(a).matrix * (8 * a + 1)
        b, c = (1 + a) / 2, np.sqrt(1 - a * a) / 2
        assert m[6, 6] == pytest.approx(b)
        assert m[8, 8] == pytest.approx(b)
        assert m[6, 8] == pytest.approx(c)
        assert m[0, 4] == pytest.approx(a)
        assert m[0, 8] == pytest.approx(a)
        assert m[7, 7] == pytest.approx(a)

    def test_parameter_validation(self):
        for bad in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ParameterOutOfRangeError):
                horodecki(bad)


class TestProbeStates:
    def test_qubit_frame_order(self):
        probes = probe_states(2)
        assert len(probes) == 6
        plus = np.ones((2, 2)) / 2
        assert np.allclose(probes[2].matrix, plus, atol=1e-15)
        l_state = (PAULI_I + PAULI_Y) / 2
        assert np.allclose(probes[4].matrix, l_state, atol=1e-15)
        r_state = (PAULI_I - PAULI_Y) / 2
        assert np.allclose(probes[5].matrix, r_state, atol=1e-15)

    def test_all_pure(self):
        for d in (2, 3):
            for probe in probe_states(d):
                assert purity(probe) == pytest.approx(1.0, abs=1e-12)

    def test_qutrit_frame_unbiased(self):
        probes = probe_states(3)
        assert len(probes) == 12
        for i in range(12):
            for j in range(12):
                overlap = float(np.real(np.trace(probes[i].matrix @ probes[j].matrix)))
                if i // 3 == j // 3:
                    assert overlap == pytest.approx(1.0 if i == j else 0.0, abs=1e-12)
                else:
                    assert overlap == pytest.approx(1 / 3, abs=1e-12)

    def test_qutrit_frame_informationally_complete(self):
        vecs = np.array([p.matrix.reshape(-1) for p in probe_states(3)])
        assert np.linalg.matrix_rank(vecs) == 9

    def test_unsupported_dimension(self):
        with pytest.raises(UnsupportedDimensionError):
            probe_states(4)


class TestLooBasis:
    def test_qubit_basis_is_normalized_paulis(self):
        ops = loo_basis(2)
        expected = [p / np.sqrt(2) for p in (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)]
        assert len(ops) == 4
        for got, want in zip(ops, expected):
            assert np.allclose(got, want, atol=1e-15)

    def test_orthonormal(self):
        for d in (2, 3, 4):
            ops = loo_basis(d)
            assert len(ops) == d * d
            for i, g1 in enumerate(ops):
                for j, g2 in enumerate(ops):
                    inner = np.trace(g1 @ g2)
                    assert abs(inner - (1.0 if i == j else 0.0)) < 1e-12

    def test_hermitian(self):
        for d in (2, 3):
            for g in loo_basis(d):
                assert np.abs(g - g.conj().T).max() < 1e-15

    def test_product_basis_reconstructs_states(self):
        rng = np.random.default_rng(61)
        for d in (2, 3):
            ops = loo_basis(d)
            rho = random_density(d * d, rng).matrix
            rebuilt = np.zeros_like(rho)
            for ga in ops:
                for gb in ops:
                    coeff = np.trace(tensor(ga, gb) @ rho)
                    rebuilt = rebuilt + coeff * tensor(ga, gb)
            assert np.abs(rebuilt - rho).max() < 1e-10
