"""Acceptance gate: one test per criterion, each printing a pass/fail line
with its runtime (run with ``pytest tests/test_acceptance.py -v -s``).

Every tolerance below is part of the contract; none is tunable.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from aaqpt.catalog import PAULI_X, horodecki, max_entangled, probe_states, sigma_e
from aaqpt.channel import (
    apply,
    apply_extended,
    apply_via_choi,
    choi_state,
    make_channel,
    propagate,
    superoperator,
)
from aaqpt.errors import NotFaithfulError
from aaqpt.extraction import demonstrate_unfaithfulness, extract, kernel_witness_pair
from aaqpt.qstate import tensor, trace_distance, validate_density
from aaqpt.realignment import (
    ccnr_sum,
    realign,
    realign_check,
    singular_spectrum,
)
from aaqpt.sampling import (
    random_bipartite,
    random_channel,
    random_density,
    random_separable,
)
from aaqpt.serialize import report_to_json
from aaqpt.tomography import run_experiment

I2 = np.eye(2, dtype=complex)


@contextmanager
def criterion(number: int, limit_s: float, description: str):
    start = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"[FAIL] criterion {number:02d}: {description}")
        raise
    elapsed = time.perf_counter() - start
    line = f"[PASS] criterion {number:02d} ({elapsed:.2f}s / limit {limit_s:g}s): {description}"
    assert elapsed < limit_s, f"criterion {number} overran its runtime limit: {line}"
    print(line)


def test_criterion_01_two_projector_mixture_spectrum_regression():
    with criterion(1, 1.0, "realignment spectrum of the two-projector qutrit mixture"):
        for p in (0.0, 0.25, 0.5, 0.75, 1.0):
            values = np.sort(singular_spectrum(realign(sigma_e(p))).values)
            expected = np.sort(
                [0.5, p / 2, (1 - p) / 2, p / 2, p / 2, 0.0, (1 - p) / 2, 0.0, (1 - p) / 2]
            )
            assert np.abs(values - expected).max() < 1e-12


def test_criterion_02_bound_entangled_sweep():
    with criterion(2, 1.0, "bound entangled family: PSD, unit trace, PPT, single kernel direction"):
        from aaqpt.realignment import ppt_min_eigenvalue

        for a in np.arange(0.1, 0.95, 0.1):
            state = horodecki(float(a))
            assert np.linalg.eigvalsh(state.matrix).min() >= -1e-12
            assert abs(np.trace(state.matrix) - 1) <= 1e-12
            assert ppt_min_eigenvalue(state) >= -1e-10
            spectrum = singular_spectrum(realign(state))
            below = np.count_nonzero(spectrum.values <= spectrum.threshold)
            assert below == 1


def test_criterion_03_bitflip_extraction():
    with criterion(3, 1.0, "extraction from the bit-flip pair reproduces (II + XX)/2"):
        bell = max_entangled(2)
        ch = make_channel([I2 / np.sqrt(2), PAULI_X / np.sqrt(2)])
        result = extract(bell, apply_extended(ch, bell), mode="strict")
        expected = (tensor(I2, I2) + tensor(PAULI_X, PAULI_X)) / 2
        assert np.abs(result.m.matrix - expected).max() < 1e-10


def test_criterion_04_realignment_variants_share_spectrum():
    with criterion(4, 10.0, "swap-composed and plain realignment: equal spectra, exact transpose"):
        rng = np.random.default_rng(2024)
        for d in (2, 3):
            for _ in range(100):
                s = random_bipartite(d, d, rng)
                r = realign(s)
                rc = realign_check(s)
                assert np.array_equal(rc.T, r)
                sv_r = np.sort(np.linalg.svd(r, compute_uv=False))
                sv_c = np.sort(np.linalg.svd(rc, compute_uv=False))
                assert np.abs(sv_r - sv_c).max() < 1e-10


def test_criterion_05_choi_round_trip():
    with criterion(5, 10.0, "Choi round trip equals direct Kraus action"):
        rng = np.random.default_rng(2025)
        for d in (2, 3):
            for _ in range(50):
                ch = random_channel(d, int(rng.integers(1, 4)), rng)
                choi = choi_state(ch)
                for _ in range(5):
                    rho = random_density(d, rng)
                    diff = apply_via_choi(choi, rho).matrix - apply(ch, rho).matrix
                    assert np.abs(diff).max() < 1e-10


def test_criterion_06_extraction_round_trip():
    with criterion(6, 30.0, "extraction recovers the channel map from faithful inputs"):
        rng = np.random.default_rng(2026)
        for d in (2, 3):
            probes = probe_states(d)
            for _ in range(50):
                state = random_bipartite(d, d, rng)
                ch = random_channel(d, 2, rng)
                out = apply_extended(ch, state)
                result = extract(state, out, mode="strict")
                assert np.abs(result.m.matrix - superoperator(ch).matrix).max() < 1e-9
                for probe in probes:
                    predicted = propagate(result.m, probe.matrix)
                    direct = apply(ch, probe).matrix
                    assert trace_distance(predicted, direct) < 1e-9


def test_criterion_07_indistinguishable_channel_witness():
    with criterion(7, 5.0, "unfaithful state hides a genuine channel difference"):
        state = sigma_e(0.5)
        ch_base, ch_perturbed = kernel_witness_pair(state)
        report = demonstrate_unfaithfulness(state, ch_base, ch_perturbed)
        assert report.output_gap < 1e-9
        assert report.channel_gap > 0.01
        assert report.witnessed
        with pytest.raises(NotFaithfulError):
            extract(state, apply_extended(ch_base, state), mode="strict")


def test_criterion_08_ccnr_soundness():
    with criterion(8, 10.0, "CCNR sum bounded by one on separable mixtures, equals two on the references"):
        rng = np.random.default_rng(2027)
        for d in (2, 3):
            for _ in range(200):
                s = random_separable(d, d, terms=int(rng.integers(1, 9)), seed=rng)
                assert ccnr_sum(s) <= 1 + 1e-9
        for p in (0.0, 0.25, 0.5, 0.75, 1.0):
            assert abs(ccnr_sum(sigma_e(p)) - 2.0) <= 1e-10
        assert abs(ccnr_sum(max_entangled(2)) - 2.0) <= 1e-10


def test_criterion_09_experiment_pipeline():
    with criterion(9, 60.0, "experiment pipeline: exact run is perfect, seeded run is reproducible"):
        exact = run_experiment(shots=0, batches=1, seed=7, exact=True)
        assert abs(exact.fidelity_in.mean - 1.0) <= 1e-9
        assert abs(exact.fidelity_out.mean - 1.0) <= 1e-9
        for band in exact.probe_fidelities.values():
            assert abs(band.mean - 1.0) <= 1e-9
        first = run_experiment(shots=10240, batches=10, seed=7)
        assert first.fidelity_in.mean >= 0.99
        assert first.fidelity_out.mean >= 0.99
        second = run_experiment(shots=10240, batches=10, seed=7)
        assert report_to_json(first) == report_to_json(second)


def test_criterion_10_product_state_realignment_rank_one():
    with criterion(10, 5.0, "realignment of product states is the rank-one vectorization outer product"):
        rng = np.random.default_rng(2028)
        for _ in range(50):
            d_a, d_b = int(rng.integers(2, 4)), int(rng.integers(2, 4))
            a = random_density(d_a, rng).matrix
            b = random_density(d_b, rng).matrix
            state = validate_density(tensor(a, b))
            from aaqpt.qstate import BipartiteState

            r = realign(BipartiteState(d_a, d_b, state))
            outer = np.outer(a.reshape(-1), b.reshape(-1))
            assert np.abs(r - outer).max() < 1e-12
