"""Exception types shared across the package."""


class PotentialSyntaxError(SyntaxError):
    """Malformed potential expression.

    :param position: character offset of the failure in the source text.
    :param expected: short description of what the parser wanted there.
    """

    def __init__(self, position, expected, src=""):
        self.position = position
        self.expected = expected
        marker = f" at offset {position}" if position is not None else ""
        super().__init__(f"expected {expected}{marker}" + (f" in {src!r}" if src else ""))


class ExponentCapError(OverflowError):
    """Integer exponent above the configured cap."""

    def __init__(self, exponent, cap):
        self.exponent = exponent
        self.cap = cap
        super().__init__(f"exponent {exponent} exceeds cap {cap}")


class EvalError(ArithmeticError):
    """Potential evaluation produced non-finite values."""


class GridMismatch(ValueError):
    """Operands live on different grids."""


class ZeroVector(ValueError):
    """Operation undefined for the zero wavefunction."""


class NonRealDiagonal(ArithmeticError):
    """Diagonal indefinite form came out with a non-negligible imaginary part."""


class NotPTSymmetric(ValueError):
    """Potential fails the V*(-x) = V(x) check on the grid."""


class ConvergenceFailure(RuntimeError):
    """Matrix eigensolver failed to converge a requested pair.

    :param index: index of the offending pair, or None when the whole solve failed.
    """

    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class NoConvergence(RuntimeError):
    """Newton iteration on the shooting mismatch did not converge."""


class BasinEscape(RuntimeError):
    """Shooting refinement wandered outside the trust radius of its seed."""


class NeutralEigenvector(ValueError):
    """Eigenvector has (psi|psi) ~ 0 and cannot be scaled to +-1."""


class NeutralState(ValueError):
    """State is numerically neutral; amplitude/average denominator vanishes."""


class ComplexEigenvalue(ValueError):
    """Operation requires a real eigenvalue but |Im E| is above tolerance."""


class NonInvariantOperator(ValueError):
    """Operator is not theta-invariant where the contract requires it."""


class SingularSolve(RuntimeError):
    """Tridiagonal Crank-Nicolson solve broke down.

    :param dt: time step at which the factorization or solution failed.
    """

    def __init__(self, message, dt=None):
        self.dt = dt
        super().__init__(message)


class ConfigError(ValueError):
    """Invalid or missing configuration value.

    :param key: dotted path of the offending key.
    :param reason: human-readable explanation.
    """

    def __init__(self, key, reason):
        self.key = key
        self.reason = reason
        super().__init__(f"config key {key!r}: {reason}")
