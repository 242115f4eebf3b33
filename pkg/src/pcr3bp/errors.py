"""Exception types shared across the package."""

__all__ = [
    "PCR3BPError",
    "DomainError",
    "SingularityError",
    "IntegrationError",
    "HorizonError",
    "TangencyError",
    "EnclosureError",
    "RegistryError",
    "StructureError",
    "SearchError",
]


class PCR3BPError(Exception):
    """Base class for library-specific failures."""


class DomainError(PCR3BPError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """A state came within the guard radius of one of the primaries."""


class IntegrationError(PCR3BPError, RuntimeError):
    """The integrator could not complete a requested flow."""


class HorizonError(IntegrationError):
    """No qualifying section crossing within the configured time horizon."""


class TangencyError(IntegrationError):
    """Section crossing too close to tangential to localize reliably."""


class EnclosureError(IntegrationError):
    """A rigorous enclosure could not be validated (step or event)."""


class RegistryError(PCR3BPError, KeyError):
    """A named h-set required by an operation is not registered."""


class StructureError(PCR3BPError, ValueError):
    """A geometric object violates a structural precondition."""


class SearchError(PCR3BPError, RuntimeError):
    """A root/orbit search failed to bracket or converge."""
