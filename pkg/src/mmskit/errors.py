"""Exception types shared across the package."""


class CapacityError(Exception):
    """An exhaustive enumeration would exceed the configured budget."""


class ParseError(ValueError):
    """An instance or result document is malformed.

    The message always carries enough location detail (line/column for JSON
    syntax, agent/function/entry path for semantic problems) to find the
    offending spot.
    """
