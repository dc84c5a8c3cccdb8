"""Exception taxonomy shared by all modules.

The CLI maps each class to a distinct exit code so batch drivers can tell
a violated parameter regime apart from an exhausted enumeration budget.
"""


class NearsqError(Exception):
    """Base class for all package-specific failures."""


class InvalidArgumentError(NearsqError, ValueError):
    """An argument violates a basic precondition (wrong sign, wrong range)."""


class RangeError(NearsqError, ValueError):
    """A closed-form formula was queried outside its validity range."""


class RegimeError(NearsqError, ValueError):
    """The parameter regime hypothesis behind a formula does not hold."""


class CoverageError(NearsqError, LookupError):
    """A prime table is too small for the requested factorization or product."""


class BudgetError(NearsqError, RuntimeError):
    """An enumeration would exceed the configured work budget."""


class AccuracyError(NearsqError, RuntimeError):
    """A numerical routine cannot reach the requested tolerance."""


EXIT_USAGE = 2
EXIT_CODES = {
    InvalidArgumentError: 2,
    RegimeError: 3,
    BudgetError: 4,
    AccuracyError: 5,
    CoverageError: 6,
    RangeError: 7,
}


def exit_code_for(exc: NearsqError) -> int:
    for cls, code in EXIT_CODES.items():
        if isinstance(exc, cls):
            return code
    return 1
