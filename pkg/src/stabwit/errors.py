"""Exception types shared across the package."""


class StabwitError(ValueError):
    """Base class for all errors raised by this package."""


class DimensionError(StabwitError):
    """Operands act on different numbers of qubits."""


class DomainError(StabwitError):
    """An argument lies outside its documented domain."""


class NumericError(StabwitError):
    """A numerical tolerance or consistency check failed."""


class ContractError(StabwitError):
    """Supplied data does not match the structure the operation requires."""
