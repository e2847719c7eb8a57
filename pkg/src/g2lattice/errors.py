"""Exception types shared across the package."""


class ScalarSyntaxError(ValueError):
    """Malformed scalar text. ``position`` is the 0-based offset of the problem."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NeedsEtaleExtension(ArithmeticError):
    """A step needs a root or isotropic vector that only exists over an extension of k."""

    def __init__(self, message: str, degree: int = 2):
        super().__init__(f"{message}; needs an extension of degree {degree}")
        self.degree = degree


class PrecisionExhausted(ArithmeticError):
    """Verification stayed inconclusive up to the maximal jet precision."""


class PreconditionError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """Reached a case that cannot occur for lattices in the split algebra."""
