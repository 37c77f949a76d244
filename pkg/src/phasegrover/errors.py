"""Exception types shared across the library."""


class PhaseGroverError(Exception):
    """Base class for all library-specific errors."""


class InvalidCount(PhaseGroverError):
    """Marked-state count outside the domain an operation requires."""


class InfeasibleSingleQuery(PhaseGroverError):
    """No oracle phase can finish in one query: needs t >= N/4."""


class DimensionMismatch(PhaseGroverError):
    """Operands refer to registers of different sizes."""


class NotCollapsible(PhaseGroverError):
    """Amplitudes are not uniform within the marked and unmarked classes."""


class ParseError(PhaseGroverError):
    """Malformed oracle document or config file."""


class RangeError(PhaseGroverError):
    """Marked index outside the register range."""


class CountError(PhaseGroverError):
    """Invalid register size or marked-state count in an oracle spec."""


class EngineMismatch(PhaseGroverError):
    """The dense and reduced engines disagree beyond tolerance."""
