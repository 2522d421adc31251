"""Exception hierarchy shared by every module of the package."""


class NonblockError(Exception):
    """Base class for all errors raised by nonblock."""


class AutomatonError(NonblockError, ValueError):
    """An automaton violates one of its structural invariants."""


class InvalidEvent(AutomatonError):
    pass


class EmptyInitialSet(AutomatonError):
    pass


class UnknownEvent(AutomatonError):
    pass


class NondeterministicTransition(AutomatonError):
    pass


class BadStateId(AutomatonError):
    pass


class EventNotInAlphabet(AutomatonError):
    pass


class EmptyComposition(NonblockError, ValueError):
    pass


class BoundTooLarge(NonblockError, ValueError):
    pass


class StateBudgetExceeded(NonblockError):
    """Subset construction would materialize more states than allowed."""


class LimitExceeded(NonblockError):
    """A search ran out of its state or time budget.

    The partial statistics of the aborted search are kept on the exception so
    callers can still report how far it got.
    """

    def __init__(self, message, explored=0, frontier_peak=0, elapsed=0.0):
        super().__init__(message)
        self.explored = explored
        self.frontier_peak = frontier_peak
        self.elapsed = elapsed


class SharedAlphabetViolation(NonblockError, ValueError):
    pass


class CountOverflow(NonblockError, ArithmeticError):
    pass


class ReductionError(NonblockError, ValueError):
    pass


class RepeatedVariableInClause(ReductionError):
    pass


class FewerThanTwoComponents(ReductionError):
    pass


class AlphabetMismatch(ReductionError):
    pass


class ReservedEventName(ReductionError):
    pass


class InstanceTooLarge(NonblockError):
    pass


class ParseError(NonblockError, ValueError):
    """Malformed input text; carries the source name and line number."""

    def __init__(self, message, source="<string>", line=None):
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line
