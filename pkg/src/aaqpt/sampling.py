"""Seeded random states, unitaries and channels for property tests."""

from __future__ import annotations

import numpy as np

from .channel import KrausChannel, make_channel
from .qstate import BipartiteState, DensityMatrix, bipartite, tensor, validate_density


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-ish unitary: QR of a Ginibre matrix with the phase ambiguity fixed."""
    rng = _rng(seed)
    q, r = np.linalg.qr(_ginibre(d, d, rng))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(d: int, seed=None, rank: int | None = None) -> DensityMatrix:
    """Full-rank (or given-rank) random density matrix rho = G G^dag / tr."""
    rng = _rng(seed)
    g = _ginibre(d, rank or d, rng)
    m = g @ g.conj().T
    return validate_density(m / np.trace(m))


def random_pure(d: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    v = _ginibre(d, 1, rng).ravel()
    return v / np.linalg.norm(v)


def random_bipartite(dim_a: int, dim_b: int, seed=None) -> BipartiteState:
    rho = random_density(dim_a * dim_b, seed)
    return BipartiteState(dim_a=dim_a, dim_b=dim_b, state=rho)


def random_product_state(dim_a: int, dim_b: int, seed=None) -> BipartiteState:
    """Tensor product of two independent random density matrices."""
    rng = _rng(seed)
    a = random_density(dim_a, rng)
    b = random_density(dim_b, rng)
    return bipartite(tensor(a.matrix, b.matrix), dim_a, dim_b)


def random_separable(dim_a: int, dim_b: int, terms: int, seed=None) -> BipartiteState:
    """Convex combination of random pure product states."""
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    m = np.zeros((dim_a * dim_b, dim_a * dim_b), dtype=complex)
    for w in weights:
        v = np.kron(random_pure(dim_a, rng), random_pure(dim_b, rng))
        m += w * np.outer(v, v.conj())
    return bipartite(m, dim_a, dim_b)


def random_channel(d: int, kraus_count: int = 2, seed=None) -> KrausChannel:
    """Random trace-preserving channel from a random isometry.

    Orthonormalizing a Ginibre (d*k) x d matrix gives an exact isometry;
    slicing it into k blocks yields Kraus operators with
    sum K^dag K = I to machine precision.
    """
    rng = _rng(seed)
    q, _ = np.linalg.qr(_ginibre(d * kraus_count, d, rng))
    return make_channel([q[i * d : (i + 1) * d, :] for i in range(kraus_count)])
