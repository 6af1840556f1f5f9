class InputError(ValueError):
    """Malformed input data (missing table entry, bad permutation, ...)."""


class ParameterError(ValueError):
    """A parameter outside its allowed range."""


class TruncationError(RuntimeError):
    """A computation needed data outside the finite truncation."""


class NoPathError(RuntimeError):
    pass
