"""Randomized truncated SVD for sparse doc-term matrices.

Range finder: Gaussian sketch with oversampling, then QR-stabilized
subspace (power) iterations until the leading singular value estimates
stagnate. At least two power iterations always run; slowly decaying
spectra get more, which is what buys oracle-grade accuracy on the top-k
triplets. The final factorization happens on the small projected matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, RankTooLarge
from .features import SparseVector
from .randomness import stream


@dataclass(eq=False)
class SvdProjection:
    """Top-k right-singular basis (k x V) and singular values."""

    components: np.ndarray
    singular_values: np.ndarray

    @property
    def k(self) -> int:
        return self.components.shape[0]

    @property
    def dim(self) -> int:
        return self.components.shape[1]

    def to_dict(self) -> dict:
        return {
            "components": self.components.tolist(),
            "singular_values": self.singular_values.tolist(),
        }

    @staticmethod
    def from_dict(d: dict) -> "SvdProjection":
        return SvdProjection(
            components=np.asarray(d["components"], dtype=np.float64),
            singular_values=np.asarray(d["singular_values"], dtype=np.float64),
        )


def fit_truncated_svd(
    matrix,
    k: int,
    seed: int = 0,
    oversampling: int = 10,
    min_power_iters: int = 2,
    max_power_iters: int = 200,
    tol: float = 1e-13,
) -> SvdProjection:
    """Fit the top-k singular triplets of a (docs x V) matrix.

    Deterministic per seed. Raises RankTooLarge unless
    1 <= k <= min(rows, V).
    """
    if sp.issparse(matrix):
        A = matrix.tocsr().astype(np.float64)
    else:
        A = np.asarray(matrix, dtype=np.float64)
    n, v = A.shape
    if not 1 <= k <= min(n, v):
        raise RankTooLarge(f"k={k} outside 1..min{(n, v)}")

    ell = min(k + oversampling, n, v)
    rng = stream(seed, 31)
    omega = rng.standard_normal((v, ell))
    Q, _ = np.linalg.qr(A @ omega)

    prev = None
    for it in range(max_power_iters):
        Z, _ = np.linalg.qr(A.T @ Q)
        Y = A @ Z
        Q, R = np.linalg.qr(Y)
        est = np.linalg.svd(R, compute_uv=False)[:k]
        if it + 1 >= min_power_iters and prev is not None:
            # stagnation relative to the spectral scale: tiny trailing
            # values cannot (and need not) be resolved relatively
            scale = max(float(est[0]), np.finfo(float).tiny)
            if np.max(np.abs(est - prev)) < tol * scale:
                break
        prev = est

    B = (A.T @ Q).T  # ell x V, dense
    _, s, vt = np.linalg.svd(B, full_matrices=False)
    return SvdProjection(components=vt[:k].copy(), singular_values=s[:k].copy())


def project_svd(vector, proj: SvdProjection) -> np.ndarray:
    """Linear map onto the k-dimensional basis: components @ x."""
    if isinstance(vector, SparseVector):
        if vector.dim != proj.dim:
            raise DimensionMismatch(f"vector dim {vector.dim} != projection dim {proj.dim}")
        if vector.indices.size == 0:
            return np.zeros(proj.k)
        return proj.components[:, vector.indices] @ vector.values
    x = np.asarray(vector, dtype=np.float64)
    if x.shape[-1] != proj.dim:
        raise DimensionMismatch(f"vector dim {x.shape[-1]} != projection dim {proj.dim}")
    return x @ proj.components.T
