"""Exception types raised across the package."""


class PanelError(ValueError):
    """Malformed panel input or an invalid request against a panel."""


class CollinearityError(PanelError):
    """Design matrix is rank deficient beyond the numerical tolerance."""

    def __init__(self, message, columns=()):
        super().__init__(message)
        self.columns = tuple(columns)


class InsufficientDataError(PanelError):
    """Too few observations (or units) left to estimate the requested model."""
