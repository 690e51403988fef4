"""Exception hierarchy. Every error carries a CLI exit code."""

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_NO_CONVERGENCE = 4


class TomoError(Exception):
    exit_code = EXIT_DOMAIN

    @property
    def code(self) -> str:
        return type(self).__name__


class ParseError(TomoError):
    exit_code = EXIT_PARSE


class DomainError(TomoError, ValueError):
    pass


class NonHermitian(DomainError):
    pass


class NegativeEigenvalue(DomainError):
    pass


class NonPhysicalState(DomainError):
    pass


class SingularSet(DomainError):
    pass


class NegativeRate(DomainError):
    pass


class DegenerateInput(DomainError):
    pass


class DegenerateMinor(DomainError):
    pass


class ZeroParams(DomainError):
    pass


class ZeroTotal(DomainError):
    pass


class ZeroSingles(DomainError):
    pass


class PatternMismatch(DomainError):
    pass


class MissingCombination(DomainError):
    pass


class NoConvergence(TomoError):
    exit_code = EXIT_NO_CONVERGENCE
