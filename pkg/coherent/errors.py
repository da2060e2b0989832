"""Errors raised by the coherent library

InputError subclasses mean "fix your input" (CLI exit code 1);
ComputationError subclasses mean "valid input, but no answer" (exit code 2).
"""
import typing as T


class InputError(ValueError):
    """malformed or inconsistent input"""


class DimensionError(InputError):
    """vector length or component index does not fit the structure"""


class SchemaError(InputError):
    """a definition file violates its schema"""

    def __init__(self, where: str, message: str) -> None:
        super().__init__(f"{where}: {message}")
        self.where = where


class ModularityError(InputError):
    """the requested component set is not a module of the structure"""

    def __init__(self, message: str, witness: T.Tuple[tuple, tuple]) -> None:
        lhs, rhs = witness
        super().__init__(f"{message}; witness states {lhs} vs. {rhs}")
        self.witness = witness


class ComputationError(ArithmeticError):
    """well-formed input that cannot be evaluated as requested"""


class CapacityError(ComputationError):
    """2^n enumeration requested beyond the configured cap"""


class QuadratureError(ComputationError):
    """numerical integration failed to reach the hard error floor"""

    def __init__(self, message: str, estimate: float) -> None:
        super().__init__(f"{message} (achieved error estimate {estimate:.3g})")
        self.estimate = estimate


class DegenerateError(ComputationError):
    """a ratio with zero probability mass in its denominator"""


class DifferentiabilityError(ComputationError):
    """a density requested where the survival curve has a kink"""


class EquilibriumError(ComputationError):
    """a stage game without any pure Nash profile"""

    def __init__(self, stage: int, state: int) -> None:
        super().__init__(f"no pure equilibrium at stage {stage}, state {state}")
        self.stage = stage
        self.state = state


class NormalizationError(ComputationError):
    """voting game values that cannot be normalized into shares"""

    def __init__(self, message: str, raw: T.Sequence[float]) -> None:
        super().__init__(f"{message}; raw values {list(raw)}")
        self.raw = tuple(raw)
