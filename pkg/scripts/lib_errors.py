"""Error hierarchy shared by the witness toolkit."""
from __future__ import annotations
from typing import Sequence


class WitnessError(Exception):
    """Base class for every error raised by the toolkit."""


class DimensionError(WitnessError):
    """Vector/matrix/chain sizes do not match the qubit count."""


class BipartitionError(WitnessError):
    """Empty, full or out-of-range qubit subset."""


class ResourceError(WitnessError):
    """Problem size exceeds the configured qubit cap."""


class ParameterError(WitnessError):
    """Out-of-range parameter (named-state params, witness parameter b, ...)."""
    def __init__(self, msg: str, b_upper: float | None = None):
        super().__init__(msg if b_upper is None else f"{msg} (b_upper={b_upper:.12g})")
        self.b_upper = b_upper


class NotGenuinelyEntangledError(WitnessError):
    """Construction needs a genuinely entangled state."""


class SeparableStateError(NotGenuinelyEntangledError):
    """Input factors across a cut; carries the factorization."""
    def __init__(self, qubits: Sequence[int], factor, rest):
        super().__init__(f"state factors across qubits {tuple(qubits)} | rest")
        self.qubits, self.factor, self.rest = tuple(qubits), factor, rest


class InconclusiveError(WitnessError):
    """Search exhausted without an SMQ chain or a separability proof."""


class NotDetectedError(WitnessError):
    """Witness expectation on the target is not negative."""
    def __init__(self, msg: str, expectation: float):
        super().__init__(f"{msg} (Tr(W rho)={expectation:.6g})")
        self.expectation = expectation


class NotInvertibleError(WitnessError):
    """A local operator in a chain is singular."""


class SchemeError(WitnessError):
    """Decomposition scheme does not fit the witness."""


class StateFileError(WitnessError):
    """Malformed input file; carries path and line when known."""
    def __init__(self, path, msg: str, line: int | None = None):
        super().__init__(f"{path}{f':{line}' if line else ''}: {msg}")
        self.path, self.line = path, line
