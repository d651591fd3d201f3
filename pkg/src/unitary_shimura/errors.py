class InvalidDiscriminantError(ValueError):
    """The integer is not a negative odd fundamental discriminant."""


class ConsistencyError(RuntimeError):
    """An identity that must hold by construction failed.

    Raised when a computed quantity contradicts a counting formula or a
    structural identity; it always indicates a bug, never bad input.
    """
