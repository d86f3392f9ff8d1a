"""Exception types raised by the package."""


class InsufficientCoefficients(ValueError):
    """Not enough series coefficients (or cached orders) for the request."""


class InsufficientMoments(ValueError):
    """Not enough moments for the requested Hankel determinant."""


class SignViolation(ValueError):
    """A coefficient breaks the expected sign alternation."""

    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"sign alternation broken at index {index}")


class ZeroConstantTerm(ZeroDivisionError):
    """Division by a truncated series whose constant term vanishes."""


class ZeroDenominator(ZeroDivisionError):
    """A denominator of the first-prediction recursion vanished."""

    def __init__(self, n, k):
        self.n = n
        self.k = k
        super().__init__(f"zero denominator in prediction recursion at n={n}, k={k}")


class SingularSystem(ArithmeticError):
    """The linear system defining a Pade approximant is singular."""


class ChecksumMismatch(ValueError):
    """A coefficient cache file failed its integrity check."""
