"""Recovering complete channel information from an input/output state pair.

If ``rho_out = (channel (x) id)(rho_in)``, the realigned matrices satisfy
``realign(rho_out) = M @ realign(rho_in)`` with ``M = sum_n K_n (x) K_n*``,
so M follows from a linear solve whenever ``realign(rho_in)`` is invertible,
i.e. whenever the input is faithful.  The solve goes through the SVD of
``realign(rho_in)`` rather than an explicit inverse: near-unfaithful inputs
have tiny singular values that would otherwise amplify tomography noise
catastrophically.

For unfaithful inputs, strict mode refuses; pseudo mode truncates the small
singular values and returns the Moore-Penrose solution, which still predicts
outputs correctly for probe operators inside the *probed subspace* -- the
span of the de-vectorized left singular vectors with nonzero singular value.
The orthogonal complement of that span (:func:`reachable_report`) holds the
directions of channel action the state cannot reveal, and
:func:`kernel_witness_pair` turns it into two genuinely different channels
with identical outputs on the state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (
    KrausChannel,
    Superoperator,
    apply,
    apply_extended,
    kraus_from_choi,
    superop_to_choi,
)
from .errors import DimensionMismatchError, NotFaithfulError
from .catalog import max_entangled, probe_states
from .qstate import BipartiteState, trace_distance, _frozen
from .realignment import SingularSpectrum, default_threshold, realign, _svd


@dataclass(frozen=True)
class ExtractionResult:
    """Extracted superoperator plus diagnostics.

    ``residual`` is ``max|realign(out) - m @ realign(in)|`` -- how well the
    data is explained; ``truncated_count`` is the number of singular values
    dropped by the pseudo-inverse (always 0 in strict mode).  The eigenvalues
    of the reshuffled Choi matrix quantify how far the raw map is from a
    completely positive one; the map is reported raw, not projected.
    """

    m: Superoperator
    mode: str
    input_spectrum: SingularSpectrum
    residual: float
    truncated_count: int
    choi_eigenvalues: np.ndarray


@dataclass(frozen=True)
class ReachableReport:
    """What a given input state can and cannot reveal about a channel.

    ``kernel_basis`` contains dim_a x dim_a matrices, orthonormal in the
    Hilbert-Schmidt inner product, spanning the unprobed operator subspace.
    """

    spectrum: SingularSpectrum
    kernel_dimension: int
    kernel_basis: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class UnfaithfulnessReport:
    """Distances produced by :func:`demonstrate_unfaithfulness`.

    ``witnessed`` holds when the outputs agree to 1e-9 while the channels
    differ by more than 0.01 on some probe state: two operationally distinct
    channels the input state cannot tell apart.
    """

    output_gap: float
    channel_gap: float
    witnessed: bool


def _check_dims(input_state: BipartiteState, output_state: BipartiteState) -> None:
    if (input_state.dim_a, input_state.dim_b) != (output_state.dim_a, output_state.dim_b):
        raise DimensionMismatchError(
            f"input is {input_state.dim_a} x {input_state.dim_b}, "
            f"output is {output_state.dim_a} x {output_state.dim_b}"
        )


def extract(
    input_state: BipartiteState,
    output_state: BipartiteState,
    mode: str = "strict",
    threshold: float | None = None,
) -> ExtractionResult:
    """Solve ``realign(out) = M @ realign(in)`` for M.

    ``mode="strict"`` demands a full-rank (faithful) input and raises
    :class:`NotFaithfulError` otherwise; ``mode="pseudo"`` truncates singular
    values at the threshold (the realignment module's default policy unless
    overridden) and reports how many were dropped.
    """
    if mode not in ("strict", "pseudo"):
        raise ValueError(f"mode must be 'strict' or 'pseudo', got {mode!r}")
    _check_dims(input_state, output_state)
    r_in = realign(input_state)
    r_out = realign(output_state)
    u, s, vh = _svd(r_in, compute_uv=True, full_matrices=False)
    tau = default_threshold(float(s[0]) if s.size else 0.0, r_in.shape[0]) \
        if threshold is None else float(threshold)
    rank = int(np.count_nonzero(s > tau))
    spectrum = SingularSpectrum(
        values=_frozen(s.copy()), sum=float(s.sum()), rank=rank, threshold=tau
    )
    # rank d_a^2 makes the solve exact and unique even for d_a != d_b:
    # the realigned input then has a right inverse
    required = input_state.dim_a ** 2
    if mode == "strict" and rank < required:
        raise NotFaithfulError(required - rank)
    inv_s = 1.0 / np.where(s > tau, s, np.inf)
    m = (r_out @ (vh.conj().T * inv_s)) @ u.conj().T
    residual = float(np.abs(r_out - m @ r_in).max())
    m_op = Superoperator(dim=input_state.dim_a, matrix=_frozen(m))
    choi = superop_to_choi(m_op)
    choi_eigs = np.linalg.eigvalsh((choi + choi.conj().T) / 2)
    return ExtractionResult(
        m=m_op,
        mode=mode,
        input_spectrum=spectrum,
        residual=residual,
        truncated_count=int(s.size - rank),
        choi_eigenvalues=_frozen(choi_eigs),
    )


def reachable_report(
    input_state: BipartiteState, threshold: float | None = None
) -> ReachableReport:
    """Spectrum, kernel dimension, and an orthonormal basis of the unprobed
    operator subspace of the A factor.

    The basis de-vectorizes the left singular vectors of ``realign(input)``
    whose singular values vanish: exactly the operator directions on which
    two channels may differ while producing the same output on this state.
    """
    r_in = realign(input_state)
    u, s, _ = _svd(r_in, compute_uv=True)
    tau = default_threshold(float(s[0]) if s.size else 0.0, r_in.shape[0]) \
        if threshold is None else float(threshold)
    rank = int(np.count_nonzero(s > tau))
    spectrum = SingularSpectrum(
        values=_frozen(s.copy()), sum=float(s.sum()), rank=rank, threshold=tau
    )
    d_a = input_state.dim_a
    kernel_cols = [k for k in range(u.shape[1]) if k >= s.size or s[k] <= tau]
    basis = tuple(
        _frozen(u[:, k].reshape(d_a, d_a).copy()) for k in kernel_cols
    )
    return ReachableReport(
        spectrum=spectrum,
        kernel_dimension=len(basis),
        kernel_basis=basis,
    )


def demonstrate_unfaithfulness(
    input_state: BipartiteState, ch_a: KrausChannel, ch_b: KrausChannel
) -> UnfaithfulnessReport:
    """Compare two channels through a shared input state and head-on.

    Reports ``max|(ch_a (x) id)(rho) - (ch_b (x) id)(rho)|`` (can the state
    tell the channels apart?) and the maximum trace distance between channel
    outputs over the probe frame (are the channels actually different?).
    """
    if ch_a.dim != input_state.dim_a or ch_b.dim != input_state.dim_a:
        raise DimensionMismatchError(
            f"channels of dim {ch_a.dim}, {ch_b.dim} do not act on dim_a = {input_state.dim_a}"
        )
    out_a = apply_extended(ch_a, input_state)
    out_b = apply_extended(ch_b, input_state)
    output_gap = float(np.abs(out_a.matrix - out_b.matrix).max())
    channel_gap = max(
        trace_distance(apply(ch_a, probe).matrix, apply(ch_b, probe).matrix)
        for probe in probe_states(input_state.dim_a)
    )
    return UnfaithfulnessReport(
        output_gap=output_gap,
        channel_gap=float(channel_gap),
        witnessed=bool(output_gap < 1e-9 and channel_gap > 1e-2),
    )


def kernel_witness_pair(
    input_state: BipartiteState, mixing: float = 0.2, strength: float | None = None
) -> tuple[KrausChannel, KrausChannel]:
    """Construct two distinct channels the input state cannot distinguish.

    The base channel mixes the identity with ``mixing`` worth of complete
    depolarization; its partner additionally damps the unprobed operator
    directions by ``strength``.  The base cannot be the identity channel
    itself: the identity is an extreme point of the channel set, so *no*
    distinct channel agrees with it on the probed subspace -- depolarizing
    admixture opens exactly the slack (``strength <= mixing / d``) that the
    kernel-supported perturbation needs to stay completely positive.

    Raises ``ValueError`` for faithful inputs, which distinguish every pair.
    """
    report = reachable_report(input_state)
    if report.kernel_dimension == 0:
        raise ValueError(
            "input state is faithful: every pair of distinct channels is distinguishable"
        )
    d = input_state.dim_a
    if not 0.0 < mixing <= 1.0:
        raise ValueError(f"need 0 < mixing <= 1, got {mixing}")
    if strength is None:
        strength = 0.9 * mixing / d
    if not 0.0 < strength <= mixing / d:
        raise ValueError(f"need 0 < strength <= mixing/d = {mixing / d:.4g}, got {strength}")
    phi = max_entangled(d, normalized=False)
    choi_base = (1 - mixing) * phi + (mixing / d) * np.eye(d * d)
    # sum_m B (x) B* is invariant under unitary remixes of the kernel basis
    # and Hermitian because the kernel span is closed under dagger.
    perturbation = sum(np.kron(b, b.conj()) for b in report.kernel_basis)
    ch_a = kraus_from_choi(choi_base)
    ch_b = kraus_from_choi(choi_base - strength * perturbation)
    return ch_a, ch_b
