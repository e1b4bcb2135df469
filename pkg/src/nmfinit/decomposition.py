"""Full singular value decomposition and rank-p truncation.

The decomposition is a cyclic one-sided Jacobi iteration: columns of a
working copy are rotated pairwise until every off-diagonal dot product
|a_p . a_q| falls below ``1e-12 * ||a_p|| * ||a_q||``. The method is slow
compared to blocked LAPACK drivers but is simple, accurate to high
relative precision, and bit-for-bit deterministic for a fixed input,
which the downstream initializers and traces rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import DenseMatrix
from .errors import ShapeError, SvdConvergenceError

__all__ = ["SvdFactors", "TruncatedFactors", "svd", "truncate"]

_TOL = 1e-12
_MAX_SWEEPS = 60


@dataclass(frozen=True)
class SvdFactors:
    """Full SVD triplet: ``u`` is m x m, ``v`` is n x n, both with singular
    vectors by column; ``sigma`` holds the min(m, n) singular values in
    descending order."""

    u: DenseMatrix
    sigma: np.ndarray
    v: DenseMatrix

    def __post_init__(self):
        sig = np.asarray(self.sigma, dtype=np.float64)
        sig.setflags(write=False)
        object.__setattr__(self, "sigma", sig)


@dataclass(frozen=True)
class TruncatedFactors:
    """Rank-p pieces: ``u_prime`` (m x p, leading columns of U) and
    ``sigma_prime_vt`` (p x n, row j equal to sigma_j * v_j^T)."""

    u_prime: DenseMatrix
    sigma_prime_vt: DenseMatrix


def svd(z: DenseMatrix) -> SvdFactors:
    """Compute the full SVD of ``z`` by cyclic one-sided Jacobi sweeps.

    Returns factors with ``u @ diag(sigma) @ v.T`` reconstructing ``z``;
    columns of ``u`` beyond the numerical rank are filled by a
    deterministic orthonormal completion so that ``u`` is square.

    Raises
    ------
    SvdConvergenceError
        If the off-diagonal criterion is not met within 60 sweeps. The
        error carries the largest remaining normalized dot product.
    """
    arr = z.array
    m, n = arr.shape
    if m < n:
        flipped = svd(DenseMatrix(arr.T))
        return SvdFactors(u=flipped.v, sigma=flipped.sigma, v=flipped.u)

    a = arr.copy()
    v = np.eye(n)
    schedule = _round_robin_schedule(n)
    converged = n == 1
    for _ in range(_MAX_SWEEPS):
        if converged:
            break
        rotated = False
        for idx_p, idx_q in schedule:
            rotated |= _rotate_round(a, v, idx_p, idx_q)
        converged = not rotated
    if not converged:
        raise SvdConvergenceError(_offdiag_residual(a), _MAX_SWEEPS)

    sigma_all = np.sqrt(np.einsum("ij,ij->j", a, a))
    order = np.argsort(-sigma_all, kind="stable")
    sigma = sigma_all[order]

    u = np.zeros((m, m))
    filled = 0
    for j, src in enumerate(order):
        if sigma[j] > 0.0:
            u[:, j] = a[:, src] / sigma[j]
            filled = j + 1
    _complete_orthonormal(u, filled)

    return SvdFactors(u=DenseMatrix(u), sigma=sigma, v=DenseMatrix(v[:, order]))


def truncate(f: SvdFactors, p: int) -> TruncatedFactors:
    """Leading-p truncation of an SVD: U' and the p x n matrix sigma' V^T."""
    r = len(f.sigma)
    if not 1 <= p <= r:
        raise ShapeError(f"truncation rank {p} out of range [1, {r}]")
    u_prime = f.u.array[:, :p]
    sigma_prime_vt = f.sigma[:p, None] * f.v.array[:, :p].T
    return TruncatedFactors(
        u_prime=DenseMatrix(u_prime),
        sigma_prime_vt=DenseMatrix(sigma_prime_vt),
    )


def _round_robin_schedule(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Fixed tournament schedule covering every column pair once per sweep.

    Each round holds mutually disjoint pairs, so all of a round's
    rotations commute and can be applied in one vectorized step without
    changing the result.
    """
    players = list(range(n)) + ([None] if n % 2 else [])
    k = len(players)
    rounds = []
    for _ in range(k - 1):
        ps, qs = [], []
        for i in range(k // 2):
            lhs, rhs = players[i], players[k - 1 - i]
            if lhs is None or rhs is None:
                continue
            ps.append(min(lhs, rhs))
            qs.append(max(lhs, rhs))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _rotate_round(a, v, idx_p, idx_q) -> bool:
    """Jacobi-rotate the disjoint column pairs that fail the criterion."""
    cols_p = a[:, idx_p]
    cols_q = a[:, idx_q]
    app = np.einsum("ij,ij->j", cols_p, cols_p)
    aqq = np.einsum("ij,ij->j", cols_q, cols_q)
    apq = np.einsum("ij,ij->j", cols_p, cols_q)
    # <= would treat exactly-zero columns as orthogonal; strict > selects work
    need = apq * apq > _TOL * _TOL * app * aqq
    if not need.any():
        return False
    sel_p = idx_p[need]
    sel_q = idx_q[need]
    apq = apq[need]
    tau = (aqq[need] - app[need]) / (2.0 * apq)
    t = np.copysign(1.0, tau) / (np.abs(tau) + np.hypot(1.0, tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    for mat in (a, v):
        old_p = mat[:, sel_p]
        old_q = mat[:, sel_q]
        mat[:, sel_p] = c * old_p - s * old_q
        mat[:, sel_q] = s * old_p + c * old_q
    return True


def _offdiag_residual(a: np.ndarray) -> float:
    gram = a.T @ a
    norms = np.sqrt(np.diag(gram))
    scale = np.outer(norms, norms)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(scale > 0.0, np.abs(gram) / scale, 0.0)
    np.fill_diagonal(ratios, 0.0)
    return float(ratios.max())


def _complete_orthonormal(u: np.ndarray, k: int) -> None:
    """Fill columns k..m-1 of ``u`` in place with an orthonormal complement.

    Greedy pick of the standard-basis residual with the largest norm keeps
    the completion deterministic regardless of the input's rank profile.
    """
    m = u.shape[0]
    if k >= m:
        return
    basis = u[:, :k]
    resid = np.eye(m) - basis @ basis.T
    for j in range(k, m):
        pick = int(np.argmax(np.einsum("ij,ij->j", resid, resid)))
        vec = resid[:, pick].copy()
        vec -= u[:, :j] @ (u[:, :j].T @ vec)  # re-orthogonalize once
        vec /= np.linalg.norm(vec)
        u[:, j] = vec
        resid -= np.outer(vec, vec @ resid)
