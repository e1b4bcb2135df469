"""Multiplicative-update NMF solvers with per-iteration error traces.

Two update schemes are implemented, both updating H before W:

* MM:    H <- H .* (W^T A) ./ (W^T W H + eps)
         W <- W .* (A H^T) ./ (W H H^T + eps)
* LNMF:  H <- sqrt(H .* (W^T (A ./ (W H + eps))))
         W <- same multiplicative rule as MM, using the new H

``eps`` is added to every division denominator only, so entries that
start at exactly zero stay exactly zero (multiplicative zero-locking).
The recorded metric is the relative Frobenius error ||Z - WH||_F / ||Z||_F.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .dense import DenseMatrix
from .decomposition import svd
from .errors import DegenerateInputError, ShapeError
from .initializers import (
    NmfFactors,
    nndsvd_abs_init,
    nndsvd_init,
    random_init,
    svd_nmf_init,
)
from .rank import choose_rank

__all__ = [
    "ALGORITHMS",
    "INITIALIZERS",
    "RankPolicy",
    "RunConfig",
    "TraceRecord",
    "ConvergenceTrace",
    "mm_step",
    "lnmf_step",
    "rel_error",
    "kl_divergence",
    "run",
]

ALGORITHMS = ("mm", "lnmf")
INITIALIZERS = ("svdnmf", "nndsvd", "nndsvd-abs", "random")


@dataclass(frozen=True)
class RankPolicy:
    """Either ``auto`` (choose from the singular spectrum at a threshold)
    or ``fixed`` (use a caller-supplied p)."""

    kind: str
    threshold: float = 0.90
    p: int | None = None

    @classmethod
    def auto(cls, threshold: float = 0.90) -> "RankPolicy":
        return cls(kind="auto", threshold=threshold)

    @classmethod
    def fixed(cls, p: int) -> "RankPolicy":
        if p < 1:
            raise ValueError(f"fixed rank must be >= 1, got {p}")
        return cls(kind="fixed", p=p)


@dataclass(frozen=True)
class RunConfig:
    algorithm: str = "mm"
    initializer: str = "svdnmf"
    rank_policy: RankPolicy = field(default_factory=RankPolicy.auto)
    iterations: int = 100
    seed: int = 0
    epsilon: float = 1e-9
    trace_every: int = 1
    perturb: float = 0.0
    # non-default early stop: halt once the per-iteration error decrease
    # falls below this; None runs the exact budget
    stop_tolerance: float | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.initializer not in INITIALIZERS:
            raise ValueError(
                f"initializer must be one of {INITIALIZERS}, got {self.initializer!r}"
            )
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.trace_every < 1:
            raise ValueError("trace_every must be >= 1")
        if self.perturb < 0.0:
            raise ValueError("perturb must be >= 0")
        if self.stop_tolerance is not None and self.stop_tolerance <= 0.0:
            raise ValueError("stop_tolerance must be positive when set")


class TraceRecord(NamedTuple):
    iteration: int
    error: float
    elapsed_ms: float


@dataclass(frozen=True)
class ConvergenceTrace:
    records: tuple[TraceRecord, ...]
    final_factors: NmfFactors

    def __post_init__(self):
        iterations = [r.iteration for r in self.records]
        if any(b <= a for a, b in zip(iterations, iterations[1:])):
            raise ValueError("trace iteration indices must be strictly increasing")
        if any(r.error < 0.0 for r in self.records):
            raise ValueError("trace errors must be nonnegative")


def _check_triple(a: DenseMatrix, w: DenseMatrix, h: DenseMatrix) -> None:
    if w.rows != a.rows or h.cols != a.cols or w.cols != h.rows:
        raise ShapeError(
            f"incompatible shapes: a={a.shape}, w={w.shape}, h={h.shape}"
        )


def _mm_arrays(a, w, h, epsilon):
    h2 = h * (w.T @ a) / (w.T @ w @ h + epsilon)
    w2 = w * (a @ h2.T) / (w @ h2 @ h2.T + epsilon)
    return w2, h2


def _lnmf_arrays(a, w, h, epsilon):
    h2 = np.sqrt(h * (w.T @ (a / (w @ h + epsilon))))
    w2 = w * (a @ h2.T) / (w @ h2 @ h2.T + epsilon)
    return w2, h2


_STEPS = {"mm": _mm_arrays, "lnmf": _lnmf_arrays}


def mm_step(
    a: DenseMatrix, w: DenseMatrix, h: DenseMatrix, epsilon: float
) -> tuple[DenseMatrix, DenseMatrix]:
    """One MM update: new H from (W, H), then new W from (W, new H).

    ``epsilon`` is added entrywise to both denominators; pass 0 only for
    strictly positive data.
    """
    _check_triple(a, w, h)
    with np.errstate(divide="ignore", invalid="ignore"):
        w2, h2 = _mm_arrays(a.array, w.array, h.array, epsilon)
    return DenseMatrix(w2), DenseMatrix(h2)


def lnmf_step(
    a: DenseMatrix, w: DenseMatrix, h: DenseMatrix, epsilon: float
) -> tuple[DenseMatrix, DenseMatrix]:
    """One LNMF update: square-root H rule, then the MM W rule."""
    _check_triple(a, w, h)
    with np.errstate(divide="ignore", invalid="ignore"):
        w2, h2 = _lnmf_arrays(a.array, w.array, h.array, epsilon)
    return DenseMatrix(w2), DenseMatrix(h2)


def rel_error(z: DenseMatrix, w: DenseMatrix, h: DenseMatrix) -> float:
    """||Z - WH||_F / ||Z||_F."""
    _check_triple(z, w, h)
    z_norm = np.linalg.norm(z.array, "fro")
    if z_norm == 0.0:
        raise DegenerateInputError("relative error undefined for an all-zero matrix")
    return float(np.linalg.norm(z.array - w.array @ h.array, "fro") / z_norm)


def kl_divergence(
    z: DenseMatrix, w: DenseMatrix, h: DenseMatrix, epsilon: float = 1e-9
) -> float:
    """Kullback-Leibler divergence D(Z || WH) with 0*log(0) taken as 0."""
    _check_triple(z, w, h)
    zz = z.array
    wh = w.array @ h.array
    guarded = wh + epsilon
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(zz > 0.0, zz * np.log(np.where(zz > 0.0, zz / guarded, 1.0)), 0.0)
    return float(np.sum(logs - zz + wh))


def _initial_factors(z: DenseMatrix, p: int, config: RunConfig, factors) -> NmfFactors:
    if config.initializer == "svdnmf":
        return svd_nmf_init(z, p, factors)
    if config.initializer == "nndsvd":
        return nndsvd_init(z, p, factors)
    if config.initializer == "nndsvd-abs":
        return nndsvd_abs_init(z, p, factors)
    return random_init(z.rows, z.cols, p, config.seed)


def run(z: DenseMatrix, config: RunConfig, factors=None) -> ConvergenceTrace:
    """Initialize, iterate the configured update rule, and trace errors.

    The relative error is recorded at iteration 0 (the initialization
    quality), every ``trace_every`` iterations, and at the final
    iteration. By default the iteration budget is exact; setting
    ``config.stop_tolerance`` opts into an early stop. ``factors`` may
    carry a precomputed SVD of ``z`` so that batch drivers pay for the
    decomposition once.
    """
    zz = z.array
    if (zz < 0.0).any():
        raise ValueError("input matrix must be nonnegative")
    z_norm = np.linalg.norm(zz, "fro")
    if z_norm == 0.0:
        raise DegenerateInputError("cannot factorize an all-zero matrix")

    t0 = time.perf_counter()
    needs_svd = config.rank_policy.kind == "auto" or config.initializer != "random"
    if needs_svd and factors is None:
        factors = svd(z)

    if config.rank_policy.kind == "auto":
        p = choose_rank(factors.sigma, config.rank_policy.threshold).p
    else:
        p = config.rank_policy.p
        if not 1 <= p <= min(z.rows, z.cols):
            raise ShapeError(
                f"rank {p} out of range [1, {min(z.rows, z.cols)}] for {z.shape}"
            )

    init = _initial_factors(z, p, config, factors)
    w = init.w.array.copy()
    h = init.h.array.copy()
    if config.perturb > 0.0:
        w[w == 0.0] = config.perturb
        h[h == 0.0] = config.perturb

    def error_now():
        return float(np.linalg.norm(zz - w @ h, "fro") / z_norm)

    def elapsed_ms():
        return (time.perf_counter() - t0) * 1000.0

    step = _STEPS[config.algorithm]
    records = [TraceRecord(0, error_now(), elapsed_ms())]
    previous_error = records[0].error
    with np.errstate(divide="ignore", invalid="ignore"):
        for i in range(1, config.iterations + 1):
            w, h = step(zz, w, h, config.epsilon)
            current = None
            stop = False
            if config.stop_tolerance is not None:
                current = error_now()
                stop = previous_error - current < config.stop_tolerance
                previous_error = current
            if i % config.trace_every == 0 or i == config.iterations or stop:
                if current is None:
                    current = error_now()
                records.append(TraceRecord(i, current, elapsed_ms()))
            if stop:
                break
    if not np.isfinite(w).all() or not np.isfinite(h).all():
        raise ArithmeticError("solver produced non-finite factors (guard failed)")

    final = NmfFactors(w=DenseMatrix(w), h=DenseMatrix(h), p=p)
    return ConvergenceTrace(records=tuple(records), final_factors=final)
