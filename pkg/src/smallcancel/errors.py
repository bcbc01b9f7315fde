"""Exception types raised by smallcancel.

Violations of the small cancellation conditions are *data* (see
:class:`smallcancel.cancellation.ViolationReport`); only malformed input,
exhausted budgets and undefined quantities raise.
"""


class SmallCancelError(Exception):
    """Base class for all package errors."""


class GraphFormatError(SmallCancelError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class ConfigError(GraphFormatError):
    pass


class UnlabelledEdgeError(SmallCancelError):
    def __init__(self, edge, graph_id=None):
        self.edge = edge
        self.graph_id = graph_id
        super().__init__(f"edge {edge} of graph {graph_id} is not labelled")


class InadmissibleSpecError(SmallCancelError):
    pass


class ThresholdError(InadmissibleSpecError):
    """A window length gamma <= 1 was requested."""


class ParityError(ValueError, SmallCancelError):
    pass


class BudgetExhaustedError(SmallCancelError):
    def __init__(self, message, stats=None):
        self.stats = stats
        super().__init__(message)


class InfeasibleError(SmallCancelError):
    pass


class PreconditionError(ValueError, SmallCancelError):
    pass


class UndefinedRatioError(ZeroDivisionError, SmallCancelError):
    pass
