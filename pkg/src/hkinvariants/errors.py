"""Exception hierarchy.  Every library error derives from HKError so the CLI
can map it to an exit code in one place."""


class HKError(Exception):
    """Base class for library errors."""


class InvalidInput(HKError, ValueError):
    """A precondition on an argument is violated."""


class Unsupported(HKError):
    """The request lies outside the supported range."""


class VanishingDeterminant(HKError, ZeroDivisionError):
    pass


class NotRational(HKError, ValueError):
    pass


class SingularSystem(HKError, ZeroDivisionError):
    pass


class MissingMonomial(HKError, KeyError):
    def __init__(self, monomial):
        super().__init__(monomial)
        self.monomial = monomial

    def __str__(self):
        return f"missing Chern monomial {self.monomial}"


class DegreeOverflow(HKError, ValueError):
    pass


class InequalityViolated(HKError, ValueError):
    pass


class AllRootsEqual(HKError, ValueError):
    pass


class IrrationalC2(HKError, ValueError):
    pass


class UnknownEntry(HKError, KeyError):
    pass


class SolveFailure(HKError):
    pass


class UnreducibleGraph(HKError):
    pass


class UnknownGamma(HKError, KeyError):
    pass


class FixtureError(HKError):
    """A data file is malformed or fails schema validation."""
