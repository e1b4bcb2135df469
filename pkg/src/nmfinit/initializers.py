"""Nonnegative starting factors (W0, H0) for multiplicative NMF solvers.

Four strategies are provided:

* ``svd_nmf_init``  -- W0 = |U'|, H0 = |sigma' V^T| from a single SVD.
* ``nndsvd_init``   -- per singular pair, keep the dominant positive or
  negated-negative section of the vectors (plain variant, zeros kept).
* ``nndsvd_abs_init`` -- absolute singular vectors with sqrt(sigma)
  column scaling, also from a single SVD.
* ``random_init``   -- seeded uniform (0, 1) entries.

Each SVD-based strategy accepts precomputed factors so a caller that
already decomposed the input (e.g. for rank selection) pays for exactly
one SVD overall.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import DenseMatrix
from .decomposition import SvdFactors, svd, truncate
from .errors import ShapeError

__all__ = [
    "NmfFactors",
    "svd_nmf_init",
    "nndsvd_init",
    "nndsvd_abs_init",
    "random_init",
]


@dataclass(frozen=True)
class NmfFactors:
    """A (W, H) pair with its factorization rank p.

    W is m x p, H is p x n, and every entry of both is >= 0.
    """

    w: DenseMatrix
    h: DenseMatrix
    p: int

    def __post_init__(self):
        if self.w.cols != self.p or self.h.rows != self.p:
            raise ShapeError(
                f"factor shapes {self.w.shape} x {self.h.shape} disagree with rank {self.p}"
            )
        if (self.w.array < 0.0).any() or (self.h.array < 0.0).any():
            raise ValueError("NMF factors must be entrywise nonnegative")


def _resolve_factors(z: DenseMatrix, p: int, factors: SvdFactors | None) -> SvdFactors:
    if not 1 <= p <= min(z.rows, z.cols):
        raise ShapeError(f"rank {p} out of range [1, {min(z.rows, z.cols)}] for {z.shape}")
    if (z.array < 0.0).any():
        raise ValueError("input matrix must be nonnegative")
    return factors if factors is not None else svd(z)


def svd_nmf_init(
    z: DenseMatrix, p: int, factors: SvdFactors | None = None
) -> NmfFactors:
    """W0 = |U'|, H0 = |sigma' V^T| from the leading p singular triplets.

    Exactly one SVD is computed (none if ``factors`` is supplied).
    """
    f = _resolve_factors(z, p, factors)
    trunc = truncate(f, p)
    w = np.abs(trunc.u_prime.array)
    h = np.abs(trunc.sigma_prime_vt.array)
    return NmfFactors(w=DenseMatrix(w), h=DenseMatrix(h), p=p)


def nndsvd_init(
    z: DenseMatrix, p: int, factors: SvdFactors | None = None
) -> NmfFactors:
    """Nonnegative Double SVD initialization (plain variant).

    The leading triplet contributes sqrt(sigma_1)|u_1| and
    sqrt(sigma_1)|v_1|. For j >= 2 the singular vectors are split into
    positive and negative sections; the section pair with the larger
    norm product mu is kept (ties go to the positive section), its
    vectors are normalized, and both factors are scaled by
    sqrt(sigma_j * mu). Discarded-section entries stay exactly zero.
    """
    f = _resolve_factors(z, p, factors)
    m, n = z.shape
    u, sig, v = f.u.array, f.sigma, f.v.array
    w = np.zeros((m, p))
    h = np.zeros((p, n))

    w[:, 0] = np.sqrt(sig[0]) * np.abs(u[:, 0])
    h[0, :] = np.sqrt(sig[0]) * np.abs(v[:, 0])

    for j in range(1, p):
        x, y = u[:, j], v[:, j]
        x_pos, x_neg = np.maximum(x, 0.0), np.maximum(-x, 0.0)
        y_pos, y_neg = np.maximum(y, 0.0), np.maximum(-y, 0.0)
        nxp, nxn = np.linalg.norm(x_pos), np.linalg.norm(x_neg)
        nyp, nyn = np.linalg.norm(y_pos), np.linalg.norm(y_neg)
        mu_pos = nxp * nyp
        mu_neg = nxn * nyn
        if mu_pos == 0.0 and mu_neg == 0.0:
            continue  # degenerate pair: leave the column/row all-zero
        if mu_pos >= mu_neg:
            scale = np.sqrt(sig[j] * mu_pos)
            w[:, j] = scale * (x_pos / nxp)
            h[j, :] = scale * (y_pos / nyp)
        else:
            scale = np.sqrt(sig[j] * mu_neg)
            w[:, j] = scale * (x_neg / nxn)
            h[j, :] = scale * (y_neg / nyn)

    return NmfFactors(w=DenseMatrix(w), h=DenseMatrix(h), p=p)


def nndsvd_abs_init(
    z: DenseMatrix, p: int, factors: SvdFactors | None = None
) -> NmfFactors:
    """NNDSVD with negative vector entries replaced by absolute values:
    column j of W is sqrt(sigma_j)|u_j| and row j of H is
    sqrt(sigma_j)|v_j^T|, for every j <= p."""
    f = _resolve_factors(z, p, factors)
    scale = np.sqrt(f.sigma[:p])
    w = scale[None, :] * np.abs(f.u.array[:, :p])
    h = scale[:, None] * np.abs(f.v.array[:, :p].T)
    return NmfFactors(w=DenseMatrix(w), h=DenseMatrix(h), p=p)


def random_init(m: int, n: int, p: int, seed: int) -> NmfFactors:
    """Uniform (0, 1) factors from a seeded PCG64 generator.

    Identical seed gives bitwise-identical factors. The generator family
    is numpy's ``default_rng`` (PCG64), fixed here for reproducibility of
    traces across platforms.
    """
    if m <= 0 or n <= 0 or p <= 0:
        raise ShapeError(f"dimensions must be positive, got m={m}, n={n}, p={p}")
    rng = np.random.default_rng(seed)
    w = rng.random((m, p))
    h = rng.random((p, n))
    # rng.random draws from [0, 1); nudge any exact zero into the open interval
    tiny = np.nextafter(0.0, 1.0)
    w[w == 0.0] = tiny
    h[h == 0.0] = tiny
    return NmfFactors(w=DenseMatrix(w), h=DenseMatrix(h), p=p)
