"""Exception hierarchy.

Domain errors derive from :class:`HHLError`; malformed input files raise
:class:`FormatError`.  The CLI maps the first family to exit status 1 and
the second to exit status 2.
"""


class HHLError(Exception):
    """Base class for numerical/domain failures."""


class EmbeddingRequiredError(HHLError):
    """A Hermitian matrix was required; use :func:`hermitian_embed` first."""


class NormBoundError(HHLError):
    """Spectral norm exceeds 1."""

    def __init__(self, norm: float):
        super().__init__(f"spectral norm {norm:.12g} exceeds 1")
        self.norm = norm


class SingularMatrixError(HHLError):
    def __init__(self, sigma_min: float, message: str | None = None):
        super().__init__(message or f"matrix is singular (smallest singular value {sigma_min:.3e})")
        self.sigma_min = sigma_min


class ZeroProbabilityError(HHLError):
    def __init__(self, probability: float, what: str = "outcome"):
        super().__init__(f"{what} has probability {probability:.3e}")
        self.probability = probability


class FilterSpecError(HHLError):
    pass


class NoStableStateError(HHLError):
    def __init__(self, spectral_radius: float):
        super().__init__(f"spectral radius {spectral_radius:.12g} >= 1; no stable state")
        self.spectral_radius = spectral_radius


class LayoutError(HHLError):
    pass


class FormatError(ValueError):
    """Malformed input file; carries the 1-based line number when known."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
            where += " "
        super().__init__(where + message)
        self.path = path
        self.line = line
