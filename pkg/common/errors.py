"""
Exception hierarchy shared by all modules.

Every error raised on purpose derives from KleinianError so the command line
front end can turn it into exit code 1 and a JSON error document.
"""


class KleinianError(ValueError):
    """
    Base class for domain errors
    """

    def toDict(self):
        return {"error": type(self).__name__, "message": str(self)}


class DegenerateParameterError(KleinianError):
    """Parameters for which the requested object does not exist (gamma = 0, beta_f*beta_g = 0, ...)"""


class UnsupportedParameterError(KleinianError):
    """Inputs outside what is implemented or tabulated"""


class WordSyntaxError(KleinianError):

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = "{0} (at position {1})".format(message, position)
        super().__init__(message)

    def toDict(self):
        d = super().toDict()
        d["position"] = self.position
        return d


class PolynomialRecoveryError(KleinianError):
    """Interpolated trace polynomial failed integer rounding or re-verification"""


class ReduciblePolynomialError(KleinianError):

    def __init__(self, message, factors=None):
        self.factors = factors or []
        super().__init__(message)

    def toDict(self):
        d = super().toDict()
        d["factors"] = [str(f) for f in self.factors]
        return d


class RootCertificationError(KleinianError):
    """Roots could not be separated by the inclusion disks"""


class EnumerationBoundError(KleinianError):
    """Coefficient box larger than the configured guard"""


class HolonomyBoundError(KleinianError):

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)

    def toDict(self):
        d = super().toDict()
        d["diagnostics"] = self.diagnostics
        return d


class TriangleError(KleinianError):
    """Invalid triangle data or a degenerate trigonometric formula"""


class ConvergenceError(KleinianError):
    """Numeric optimiser did not converge within its budget"""
