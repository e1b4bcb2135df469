"""Dense real matrix value type and elementwise/multiplicative kernels.

``DenseMatrix`` is an immutable wrapper around a row-major float64 array.
Every operation returns a new matrix and validates that the result is
finite, so a NaN or Inf can never propagate silently.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError

__all__ = [
    "DenseMatrix",
    "matmul",
    "elementwise",
    "transpose",
    "frobenius_norm",
]

_ELEMENTWISE_MODES = ("mul", "div", "sqrt", "abs")


class DenseMatrix:
    """Immutable dense real matrix with row-major float64 storage.

    Parameters
    ----------
    data : array_like
        Nested sequence or 2-D ndarray of real numbers. The input is
        copied; the stored array is marked read-only.

    Raises
    ------
    ShapeError
        If the input is not two-dimensional or has a zero dimension.
    ValueError
        If any entry is NaN or infinite.
    """

    __slots__ = ("_array",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, order="C")
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-D matrix, got {arr.ndim}-D data")
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ShapeError(f"matrix dimensions must be positive, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("matrix entries must be finite (no NaN/Inf)")
        arr.setflags(write=False)
        self._array = arr

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "DenseMatrix":
        return cls(np.zeros((rows, cols)))

    @classmethod
    def identity(cls, n: int) -> "DenseMatrix":
        return cls(np.eye(n))

    @property
    def array(self) -> np.ndarray:
        """Read-only ndarray view of the entries (copy before mutating)."""
        return self._array

    @property
    def rows(self) -> int:
        return self._array.shape[0]

    @property
    def cols(self) -> int:
        return self._array.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._array.shape

    def tolist(self) -> list[list[float]]:
        return self._array.tolist()

    def __getitem__(self, key):
        return self._array[key]

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        return matmul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(
            self._array, other._array
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"DenseMatrix({self.rows}x{self.cols})"


def matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Matrix product ``a @ b``.

    Raises :class:`ShapeError` naming both shapes when the inner
    dimensions disagree.
    """
    if a.cols != b.rows:
        raise ShapeError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    return DenseMatrix(a.array @ b.array)


def elementwise(a: DenseMatrix, b: DenseMatrix | None, mode: str) -> DenseMatrix:
    """Entrywise operation on matrices.

    ``mul`` and ``div`` are binary and require identical shapes (no
    broadcasting); ``sqrt`` and ``abs`` are unary (``b`` must be None).
    ``div`` assumes the caller supplies a denominator bounded away from
    zero; a division producing a non-finite entry is rejected.
    """
    if mode not in _ELEMENTWISE_MODES:
        raise ValueError(f"unknown mode {mode!r}, expected one of {_ELEMENTWISE_MODES}")
    if mode in ("mul", "div"):
        if b is None:
            raise ValueError(f"mode {mode!r} needs a second operand")
        if a.shape != b.shape:
            raise ShapeError(f"elementwise {mode} shape mismatch: {a.shape} vs {b.shape}")
        if mode == "mul":
            return DenseMatrix(a.array * b.array)
        with np.errstate(divide="ignore", invalid="ignore"):
            return DenseMatrix(a.array / b.array)
    if b is not None:
        raise ValueError(f"mode {mode!r} is unary, second operand must be None")
    if mode == "abs":
        return DenseMatrix(np.abs(a.array))
    if (a.array < 0.0).any():
        i, j = (int(k) for k in np.argwhere(a.array < 0.0)[0])
        raise ValueError(
            f"sqrt of negative entry {float(a.array[i, j])} at ({i}, {j}); "
            "nonnegativity invariant broken upstream"
        )
    return DenseMatrix(np.sqrt(a.array))


def transpose(a: DenseMatrix) -> DenseMatrix:
    return DenseMatrix(a.array.T)


def frobenius_norm(a: DenseMatrix) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(a.array, "fro"))
