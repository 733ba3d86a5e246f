"""Shared construction helpers for the test suite."""

from __future__ import annotations

import numpy as np

from cvqec.fock import FockVector


def random_state(rng: np.random.Generator, dim: int) -> FockVector:
    """Dense random normalized state; full support, so always a valid primitive."""
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return FockVector(dim, amps / np.linalg.norm(amps))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish unitary via QR with a fixed diagonal phase convention."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def hermitian_pair_with_shared(
    rng: np.random.Generator, dim: int, n_shared: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Two Hermitian matrices engineered to share exactly n_shared eigenvalues.

    Eigenvalues are spaced at least ~0.5 apart so both spectra clear the
    non-degeneracy gap, the shared values match to float precision, and the
    unshared values of one matrix sit strictly between the other's grid
    points, far beyond any sane match tolerance.
    """
    base = np.cumsum(rng.uniform(0.5, 1.5, size=dim))
    shared_idx = rng.choice(dim, size=n_shared, replace=False)
    vals_y = base.copy()
    unshared = np.setdiff1d(np.arange(dim), shared_idx)
    vals_y[unshared] += 0.25
    ux = random_unitary(rng, dim)
    uy = random_unitary(rng, dim)
    X = ux @ np.diag(base) @ ux.conj().T
    Y = uy @ np.diag(vals_y) @ uy.conj().T
    X = (X + X.conj().T) / 2
    Y = (Y + Y.conj().T) / 2
    return X, Y, np.sort(base[shared_idx])


def block_basis_semis(k: int, d: int) -> list[np.ndarray]:
    """k integer semi-unitaries d -> k*d whose images tile the big space."""
    out = []
    for i in range(k):
        S = np.zeros((k * d, d), dtype=np.int64)
        for r in range(d):
            S[i * d + r, r] = 1
        out.append(S)
    return out
