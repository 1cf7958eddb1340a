"""Exception types raised across the package."""


class ParameterError(ValueError):
    """A parameter lies outside its admissible range."""


class DimensionError(ValueError):
    """Matrix or subsystem dimensions are inconsistent."""


class NetworkError(ValueError):
    """A network description is malformed."""


class NoCrossoverError(RuntimeError):
    """The two bound families never change order on the scanned interval."""

    def __init__(self, message, dominant=None):
        super().__init__(message)
        self.dominant = dominant
