class ProxigraphError(Exception):
    """Base class for all errors raised by proxigraph."""


class DegeneratePairError(ProxigraphError, ValueError):
    """A predicate was asked about a pair of coincident points."""


class DuplicatePointError(ProxigraphError, ValueError):
    pass


class TooFewPointsError(ProxigraphError, ValueError):
    pass


class SizeCapError(ProxigraphError, ValueError):
    """Exact enumeration was requested beyond its supported size."""


class EdgeNotInCycleError(ProxigraphError, ValueError):
    pass


class DimensionError(ProxigraphError, ValueError):
    pass


class ParseError(ProxigraphError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
