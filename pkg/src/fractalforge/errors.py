"""Exception taxonomy.

Every failure mode callers are expected to branch on gets its own class;
the CLI maps them to exit codes (user/semantic errors -> 2, requests that
are provably unsatisfiable -> 3, resource caps -> 4).
"""


class FractalForgeError(Exception):
    """Base class for all package errors."""


class OutOfRange(FractalForgeError):
    """A parameter violates its documented domain (e.g. beta >= 1/(s+1))."""


class Infeasible(FractalForgeError):
    """No set with the requested (dimension, measure, ambient) exists."""


class CapExceeded(FractalForgeError):
    """A stage cover or grid would exceed the configured box/cell budget."""


class NoClosedForm(FractalForgeError):
    """An explicit removing sequence lacks the rule needed for a closed form."""


class ConditionUnverified(FractalForgeError):
    """A hypothesis of a formula could not be certified on the checked prefix."""


class RuleInapplicable(FractalForgeError):
    """No sound calculus rule covers the requested combination of nodes."""


class DisjointnessUnverified(FractalForgeError):
    """A union's summands could not be certified interior-disjoint."""


class OverlapDetected(FractalForgeError):
    """Two boxes that must have disjoint interiors overlap."""


class IndexSetFinite(FractalForgeError):
    """An index set that must be infinite has an all-zero tail pattern."""


class WrongDimension(FractalForgeError):
    """Operands have incompatible ambient dimensions."""


class FrxSyntaxError(FractalForgeError):
    """Tokenizer/parser failure, carrying a 1-based source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class FrxSemanticError(FractalForgeError):
    """Well-formed syntax denoting an invalid construction."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        if line is not None:
            super().__init__(f"{line}:{col}: {message}")
        else:
            super().__init__(message)
        self.line = line
        self.col = col
