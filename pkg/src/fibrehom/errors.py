"""Exception hierarchy shared by all fibrehom modules."""


class FibrehomError(Exception):
    """Base class for all errors raised by this package."""


class EndpointMismatch(FibrehomError):
    """Words or matrices composed along non-matching objects."""


class UnknownGenerator(FibrehomError):
    """A word references a generator the category does not declare."""


class NoNormalForm(FibrehomError):
    """The word problem is unavailable (completion failed, no hom tables)."""


class CapExceeded(FibrehomError):
    """A bounded enumeration ran past its cap.

    The partial count seen so far is stored in ``partial_count``.
    """

    def __init__(self, message, partial_count=None):
        super().__init__(message)
        self.partial_count = partial_count


class AnchorMissing(FibrehomError):
    """A free-module anchor is not an object of the base category."""


class InconsistentBoundary(FibrehomError):
    """Stored attaching data fails an endpoint check."""


class NotAComplex(FibrehomError):
    """d_out . d_in is nonzero."""


class NotAChainMap(FibrehomError):
    """Alleged chain map does not commute with the differentials."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class NotContractible(FibrehomError):
    """No chain contraction exists; carries the first homology obstruction."""

    def __init__(self, message, degree=None, obj=None, group=None):
        super().__init__(message)
        self.degree = degree
        self.obj = obj
        self.group = group


class ContractionInvalid(FibrehomError):
    """Supplied contraction fails ds + sd = 1."""


class NotADomination(FibrehomError):
    """Supplied homotopy does not witness gf ~ 1."""


class InfiniteFundamentalCategory(FibrehomError):
    """Operation requires a finite fundamental category."""


class UndecidableWithinBounds(FibrehomError):
    """Question cannot be settled inside the configured caps."""


class ParseError(FibrehomError):
    """Malformed input file."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.path = path
        self.line = line
