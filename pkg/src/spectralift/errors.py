"""Exception taxonomy shared by all modules.

The CLI maps these onto exit codes: InputError -> 2, BudgetExceededError -> 3,
verification failures -> 1.  Everything else is a bug.
"""


class SpectraliftError(Exception):
    pass


class InputError(SpectraliftError):
    """Malformed user input: wrong shape, non-finite entries, bad JSON."""


class DomainError(SpectraliftError):
    """A point lies outside the domain of the function being queried."""


class AmbiguousProjectionError(SpectraliftError):
    """The vector-level metric projection has several minimizers within
    tolerance, so no single aligned matrix projection can be returned."""


class EnumerationCapError(SpectraliftError):
    """A symmetry-group enumeration would exceed the configured cap."""


class BudgetExceededError(SpectraliftError):
    """An LP pivot budget or a stratification enumeration budget ran out."""
