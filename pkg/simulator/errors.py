"""
Exception types shared by the simulator and the braiding layer.
"""


class SimulationError(Exception):
    """Base class for simulator failures."""


class ZeroProbabilityError(SimulationError):
    """A forced outcome or projection has probability at or below the zero tolerance."""


class DimensionError(SimulationError, ValueError):
    """Qubit counts or lengths do not match, or an index is out of range."""


class UnknownGateError(SimulationError, KeyError):
    """Gate name not present in the gate table."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown gate"


class CodespaceError(SimulationError):
    """A protocol input lies outside the encoding's codespace."""


class FrameDerivationError(SimulationError):
    """No frame correction maps the conditional action onto the ideal gate."""


class QasmParseError(SimulationError):
    """OpenQASM text could not be parsed; carries the 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
