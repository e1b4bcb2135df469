"""Factorization-rank selection from the singular spectrum.

``choose_rank`` walks the descending singular values and returns the
first count whose cumulative share of the total reaches the threshold
(0.90 by default). ``basic_rule_check`` tests the storage-compression
condition (m + n) * p < m * n that a useful rank should satisfy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError

__all__ = ["RankChoice", "choose_rank", "basic_rule_check"]


@dataclass(frozen=True)
class RankChoice:
    """Chosen rank with the cumulative-energy ratio it achieves.

    ``satisfies_basic_rule`` is None when the matrix shape was not
    supplied to :func:`choose_rank`.
    """

    p: int
    energy_ratio: float
    satisfies_basic_rule: bool | None


def choose_rank(
    sigma,
    threshold: float = 0.90,
    *,
    shape: tuple[int, int] | None = None,
) -> RankChoice:
    """Smallest p with (sigma_1 + ... + sigma_p) / sum(sigma) >= threshold.

    The denominator sums every entry of ``sigma``, numerically-zero tail
    included. ``sigma`` must be non-empty, descending, and contain at
    least one positive value.
    """
    sig = np.asarray(sigma, dtype=np.float64)
    if sig.ndim != 1 or sig.size == 0:
        raise ValueError("sigma must be a non-empty 1-D sequence")
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    if (sig < 0.0).any():
        raise ValueError("singular values must be nonnegative")
    if (np.diff(sig) > 0.0).any():
        raise ValueError("sigma must be sorted in descending order")
    # sequential accumulation, matching the cumulative scan below so the
    # boundary behavior cannot depend on summation order
    total = 0.0
    for value in sig:
        total += float(value)
    if total == 0.0:
        raise DegenerateInputError("all-zero spectrum: energy ratio undefined")

    p = 0
    extract = 0.0
    while extract / total < threshold and p < sig.size:
        extract += float(sig[p])
        p += 1

    choice_ok = None
    if shape is not None:
        m, n = shape
        choice_ok = basic_rule_check(m, n, p)
    return RankChoice(p=p, energy_ratio=extract / total, satisfies_basic_rule=choice_ok)


def basic_rule_check(m: int, n: int, p: int) -> bool:
    """True iff (m + n) * p < m * n."""
    if m <= 0 or n <= 0 or p <= 0:
        raise ValueError(f"dimensions must be positive, got m={m}, n={n}, p={p}")
    return (m + n) * p < m * n
