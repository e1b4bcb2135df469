"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Operands have incompatible dimensions."""


class DegenerateInputError(ValueError):
    """Input is degenerate for the requested operation (e.g. all-zero)."""


class SvdConvergenceError(ArithmeticError):
    """Jacobi sweeps exhausted before the off-diagonal criterion was met.

    Attributes
    ----------
    residual : float
        Largest remaining |a_p . a_q| / (||a_p|| ||a_q||) over column pairs.
    """

    def __init__(self, residual, sweeps):
        self.residual = residual
        self.sweeps = sweeps
        super().__init__(
            f"SVD did not converge after {sweeps} sweeps "
            f"(off-diagonal residual {residual:.3e})"
        )


class PgmError(ValueError):
    """Malformed PGM stream.

    Attributes
    ----------
    offset : int
        Byte offset at which parsing failed.
    """

    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")
