from typing import Optional, Sequence


class OrliczLabError(Exception):
    """Base class of every error raised by the package."""

    exit_code = 3


class SamplingError(OrliczLabError):
    def __init__(self, node: float, value: float):
        self.node = node
        self.value = value
        super().__init__(f"non-finite sample {value!r} at log-radius s={node:.12g}")


class ExponentOverflowError(OrliczLabError):
    def __init__(self, node: Optional[float], exponent: float):
        self.node = node
        self.exponent = exponent
        where = "" if node is None else f" at s={node:.12g}"
        super().__init__(f"exponent {exponent:.6g} exceeds the overflow cap{where}")


class NonConvergenceError(OrliczLabError):
    pass


class PreconditionError(OrliczLabError, ValueError):
    exit_code = 2


class ConfigurationError(OrliczLabError, ValueError):
    exit_code = 2


class StagnationError(OrliczLabError):
    def __init__(self, level: int, amplitudes: Sequence[float]):
        self.level = level
        self.amplitudes = list(amplitudes)
        super().__init__(
            f"remainder did not decrease at level {level}: amplitudes {self.amplitudes}"
        )


class BlowUpError(OrliczLabError):
    exit_code = 4

    def __init__(self, time: float, node: int, value: float):
        self.time = time
        self.node = node
        self.value = value
        super().__init__(
            f"nonlinearity overflow at t={time:.12g}, node {node}, u={value:.6g}"
        )
