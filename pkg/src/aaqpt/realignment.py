"""The realignment map, its swap-composed variant, and everything derived
from their singular spectra: the faithfulness verdict, the operator Schmidt
decomposition and the CCNR/PPT entanglement tests.

Writing a bipartite matrix as ``rho = sum rho_{ij,kl} |i><j| (x) |k><l|``
(indices i, j on A and k, l on B), the two reshuffles implemented here are

* ``realign``:        ``R[(i,j),(k,l)] = rho_{ij,kl}``, shape dA^2 x dB^2;
* ``realign_check``:  ``Rc[(k,l),(i,j)] = rho_{ij,kl}``, defined for
  dA == dB, equal to ``(rho^{T_B} E)^{T_A}`` with E the swap operator.

``Rc`` is the full transpose of ``R`` entrywise, so both carry the same
singular values.  A state is *faithful* -- its output under any channel on A
determines that channel completely -- iff none of those singular values
vanish, i.e. R is invertible.  The singular values are invariant under local
unitaries, and their sum exceeding 1 certifies entanglement (CCNR).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SvdFailureError, UnequalDimensionsError
from .qstate import (
    BipartiteState,
    as_matrix,
    partial_transpose,
    _frozen,
    _split,
)


@dataclass(frozen=True)
class SingularSpectrum:
    """Full singular value list of a matrix, sorted descending.

    ``rank`` counts the values strictly above ``threshold``; ``sum`` is the
    trace norm (the CCNR quantity when the matrix is a realignment).
    """

    values: np.ndarray
    sum: float
    rank: int
    threshold: float


@dataclass(frozen=True)
class FaithfulnessVerdict:
    """Outcome of the faithfulness test.

    ``faithful`` holds iff the factors have equal dimension and the realigned
    matrix has full rank ``dim_a**2``.  ``kernel_dimension`` counts the
    missing rank: the dimension of the operator subspace on A whose image
    under a channel the state cannot reveal.  ``dims_equal`` flags the
    dA != dB case, for which no criterion is asserted and the verdict is
    conservatively negative.
    """

    faithful: bool
    spectrum: SingularSpectrum
    required_rank: int
    kernel_dimension: int
    dims_equal: bool


@dataclass(frozen=True)
class OperatorSchmidtDecomposition:
    """Expansion ``rho = sum_k c_k A_k (x) B_k`` with Hilbert-Schmidt
    orthonormal operator factors and nonnegative coefficients (descending).

    The coefficients are exactly the singular values of ``realign(rho)``.
    Within degenerate coefficient groups the factors are only fixed up to a
    joint unitary remix, so the contractual properties are orthonormality
    and reconstruction, not specific factor matrices.
    """

    coefficients: np.ndarray
    ops_a: tuple[np.ndarray, ...]
    ops_b: tuple[np.ndarray, ...]


def default_threshold(max_singular_value: float, rows: int) -> float:
    """Scale-aware rank cutoff: ``max(s_max * rows * 1e-12, 1e-12)``."""
    return max(float(max_singular_value) * rows * 1e-12, 1e-12)


def _svd(m: np.ndarray, compute_uv: bool, full_matrices: bool = True):
    try:
        if compute_uv:
            return np.linalg.svd(m, full_matrices=full_matrices)
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SvdFailureError(f"SVD did not converge: {exc}") from exc


def singular_spectrum(m, threshold: float | None = None) -> SingularSpectrum:
    """All singular values of ``m``, with a rank decision.

    ``threshold`` overrides the default scale-aware cutoff; pass an explicit
    value when working with data whose noise floor is known.
    """
    a = as_matrix(m)
    values = _svd(a, compute_uv=False)
    smax = float(values[0]) if values.size else 0.0
    tau = default_threshold(smax, a.shape[0]) if threshold is None else float(threshold)
    rank = int(np.count_nonzero(values > tau))
    return SingularSpectrum(
        values=_frozen(values),
        sum=float(values.sum()),
        rank=rank,
        threshold=tau,
    )


def realign_matrix(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Reshuffle a bare bipartite matrix: out[(i,j),(k,l)] = in[(i,k),(j,l)].

    Accepts unnormalized input; the result has shape dA^2 x dB^2.
    """
    t = _split(as_matrix(m), dim_a, dim_b)
    return t.transpose(0, 2, 1, 3).reshape(dim_a * dim_a, dim_b * dim_b).copy()


def realign(s: BipartiteState) -> np.ndarray:
    return realign_matrix(s.matrix, s.dim_a, s.dim_b)


def realign_check_matrix(m, dim: int) -> np.ndarray:
    """Swap-composed reshuffle: out[(k,l),(i,j)] = in[(i,k),(j,l)].

    Equals ``(m^{T_B} E)^{T_A}`` and the full transpose of
    :func:`realign_matrix`; needs equal factor dimensions because the swap
    operator does.
    """
    t = _split(as_matrix(m), dim, dim)
    return t.transpose(1, 3, 0, 2).reshape(dim * dim, dim * dim).copy()


def realign_check(s: BipartiteState) -> np.ndarray:
    if s.dim_a != s.dim_b:
        raise UnequalDimensionsError(
            f"swap-composed realignment needs dim_a == dim_b, got {s.dim_a} x {s.dim_b}"
        )
    return realign_check_matrix(s.matrix, s.dim_a)


def swap_operator(d: int) -> np.ndarray:
    """The d^2 x d^2 permutation E with E (|a> (x) |b>) = |b> (x) |a>."""
    e = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            e[a * d + b, b * d + a] = 1.0
    return e


def operator_schmidt(s: BipartiteState) -> OperatorSchmidtDecomposition:
    """Operator Schmidt decomposition via the SVD of the realigned matrix.

    The A factors devectorize the left singular vectors, the B factors the
    conjugated right singular vectors, so that
    ``sum_k c_k A_k (x) B_k`` reconstructs the state.
    """
    r = realign(s)
    u, values, vh = _svd(r, compute_uv=True)
    k = min(r.shape)
    ops_a = tuple(_frozen(u[:, i].reshape(s.dim_a, s.dim_a).copy()) for i in range(k))
    ops_b = tuple(
        _frozen(vh[i, :].reshape(s.dim_b, s.dim_b).copy()) for i in range(k)
    )
    return OperatorSchmidtDecomposition(
        coefficients=_frozen(values.copy()), ops_a=ops_a, ops_b=ops_b
    )


def is_faithful(s: BipartiteState, threshold: float | None = None) -> FaithfulnessVerdict:
    """Decide whether the state pins down channels on A completely.

    For dA != dB the criterion is not asserted; the verdict is negative with
    ``dims_equal`` set to False.
    """
    spectrum = singular_spectrum(realign(s), threshold=threshold)
    required = s.dim_a * s.dim_a
    dims_equal = s.dim_a == s.dim_b
    return FaithfulnessVerdict(
        faithful=bool(dims_equal and spectrum.rank == required),
        spectrum=spectrum,
        required_rank=required,
        kernel_dimension=max(required - spectrum.rank, 0),
        dims_equal=dims_equal,
    )


def ccnr_sum(s: BipartiteState) -> float:
    """Sum of the realignment singular values.

    A value above 1 certifies entanglement; at or below 1 the test is
    inconclusive.  Only meaningful for unit-trace states, which the
    :class:`BipartiteState` type guarantees.
    """
    values = _svd(realign(s), compute_uv=False)
    return float(values.sum())


def ppt_min_eigenvalue(s: BipartiteState) -> float:
    """Minimum eigenvalue of the partial transpose over B.

    Negative certifies entanglement; nonnegative states (PPT) may still be
    bound entangled.
    """
    pt = partial_transpose(s, "B")
    return float(np.linalg.eigvalsh((pt + pt.conj().T) / 2).min())
