"""Exception taxonomy shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the mathematical domain of an operation."""


class ValidationError(ValueError):
    """Structured input (weight vectors, configs) violates a declared bound."""


class CapacityError(RuntimeError):
    """A request exceeds the capacity of a prebuilt table or sieve."""


class NotInvertibleError(DomainError):
    """Modular inverse requested for a residue that is not a unit."""
