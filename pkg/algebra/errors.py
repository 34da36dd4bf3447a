class DeltaError(Exception):
    """Base error of the toolkit."""


class FieldConfigurationError(DeltaError, ValueError):
    """Modulus is not a primitive degree-6 polynomial over GF(2)."""


class ConventionError(DeltaError):
    """Generators or relations do not match any supported composition convention."""


class GroupOrderExceeded(DeltaError):
    def __init__(self, cap: int, name: str = ""):
        self.cap = cap
        self.name = name
        label = f" {name}" if name else ""
        super().__init__(f"closure{label} exceeded order cap {cap}")


class ConstructionError(DeltaError):
    """A hard self-check of the construction failed."""


class CacheMismatchError(DeltaError):
    """Cached graph does not match the running build (version, modulus or group hash)."""
