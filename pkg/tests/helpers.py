"""Shared states for the test suite."""
import numpy as np
from scripts.lib_states import PureState

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex)/np.sqrt(2)

def basis_state(bits: str) -> PureState:
    a = np.zeros(2**len(bits), dtype=complex); a[int(bits, 2)] = 1; return PureState(len(bits), a)

def phi_plus_pair() -> PureState:
    return PureState(4, np.kron(PHI_PLUS, PHI_PLUS))

def phi_plus_and_zero() -> PureState:
    return PureState(3, np.kron(PHI_PLUS, [1, 0]))

def odd_weight_state() -> PureState:
    """(|100> + |010> + |001> + |111>)/2"""
    a = np.zeros(8, dtype=complex); a[[1, 2, 4, 7]] = 0.5; return PureState(3, a)


def zero_and_phi_plus() -> PureState:
    return PureState(3, np.kron([1, 0], PHI_PLUS))
