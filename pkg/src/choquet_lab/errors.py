"""Exception types shared across the library."""


class StructuralError(ValueError):
    """Malformed input object: overlapping intervals, mismatched shapes, bad schema."""


class DegenerateSetError(ValueError):
    """An operation required a set of positive Lebesgue measure."""


class UnsupportedFamilyError(ValueError):
    """The section family does not support the requested construction."""


class InvalidPriceError(ValueError):
    """Price vector is zero or has negative components."""


class ConfigError(ValueError):
    """Bad CLI / JSON configuration (unknown keys, missing fields, bad values)."""
