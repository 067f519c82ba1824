"""Permutation-symmetric states: Dicke expansions, the product-or-entangled dichotomy, mixed examples."""
from __future__ import annotations
import logging,math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence
import numpy as np
from scipy.special import comb
from scripts.lib_errors import DimensionError, ParameterError
from scripts.lib_states import DensityOperator, PureState, dicke

log = logging.getLogger(__name__)
FIT_TOL = 1e-8

class PsmqVerdict(str, Enum):
    fully_entangled = "fully_entangled"
    fully_separable = "fully_separable"

@dataclass(frozen=True)
class PsmqCoefficients:
    """Dicke-basis coefficients c_0..c_N."""
    n_qubits: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).ravel()
        if self.n_qubits < 1 or c.size != self.n_qubits + 1: raise DimensionError(f"{c.size} Dicke coefficients for N={self.n_qubits}")
        c.setflags(write=False); object.__setattr__(self, "coeffs", c)

    @classmethod
    def of(cls, coeffs: Sequence[complex]) -> PsmqCoefficients: return cls(len(coeffs) - 1, np.asarray(coeffs))

    def normalized(self) -> PsmqCoefficients:
        nrm = np.linalg.norm(self.coeffs)
        if nrm == 0: raise ParameterError("all Dicke coefficients are zero")
        return PsmqCoefficients(self.n_qubits, self.coeffs/nrm)

@dataclass(frozen=True)
class PsmqClassification:
    verdict: PsmqVerdict
    a: complex | None = None
    b: complex | None = None

    @property
    def ratio(self) -> complex | None: return None if self.a in (None, 0) else self.b/self.a

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value}
        if self.verdict is PsmqVerdict.fully_separable: out |= {"a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag]}
        return out

def binomial_coeffs(a: complex, b: complex, n: int) -> np.ndarray:
    """Dicke coefficients of (a|0> + b|1>)^N."""
    return np.array([math.sqrt(comb(n, m, exact=True))*a**(n - m)*b**m for m in range(n + 1)], dtype=complex)

def psmq_state(coeffs: PsmqCoefficients) -> PureState:
    n = coeffs.n_qubits
    return PureState(n, sum(c*dicke(m, n).amplitudes for m, c in enumerate(coeffs.coeffs)))

def psmq_classify(coeffs: PsmqCoefficients, tol: float = FIT_TOL) -> PsmqClassification:
    """Product iff c_m follows sqrt(C(N,m)) a^{N-m} b^m; works on the N+1 coefficients only."""
    c = coeffs.normalized().coeffs; n = coeffs.n_qubits; mag = np.abs(c)
    nz = np.flatnonzero(mag > tol)
    if nz.size == 1:
        m = int(nz[0]); ph = c[m]/mag[m]
        if m == 0: return PsmqClassification(PsmqVerdict.fully_separable, ph, 0j)
        if m == n: return PsmqClassification(PsmqVerdict.fully_separable, 0j, ph)
        return PsmqClassification(PsmqVerdict.fully_entangled)
    m = int(np.argmax(mag)); nb = [k for k in (m - 1, m + 1) if 0 <= k <= n]
    k = max(nb, key=lambda j: mag[j]); lo = min(m, k)
    if mag[lo] <= tol or mag[lo + 1] <= tol: return PsmqClassification(PsmqVerdict.fully_entangled)
    r = c[lo + 1]/c[lo]*math.sqrt((lo + 1)/(n - lo))  # b/a
    a = 1/math.sqrt(1 + abs(r)**2); fit = binomial_coeffs(a, r*a, n)
    ph = np.vdot(fit, c); ph = ph/abs(ph) if abs(ph) > 0 else 1
    if np.abs(c - ph*fit).max() <= tol*10:
        log.debug("binomial fit b/a=%s", r)
        return PsmqClassification(PsmqVerdict.fully_separable, complex(ph*a), complex(ph*r*a))
    return PsmqClassification(PsmqVerdict.fully_entangled)

def _swap_adjacent(m: np.ndarray, n: int, i: int) -> np.ndarray:
    ax = list(range(2*n)); ax[i], ax[i + 1] = ax[i + 1], ax[i]; ax[n + i], ax[n + i + 1] = ax[n + i + 1], ax[n + i]
    return m.reshape((2,)*(2*n)).transpose(ax).reshape(2**n, 2**n)

def is_permutation_symmetric(rho: DensityOperator | PureState, tol: float = 1e-12) -> bool:
    """SWAP_{i,i+1} rho SWAP_{i,i+1} == rho for all adjacent pairs (these generate S_N)."""
    if isinstance(rho, PureState): rho = rho.density()
    n, m = rho.n_qubits, rho.matrix
    return all(np.abs(_swap_adjacent(m, n, i) - m).max() <= tol for i in range(n - 1))

def _ket(bits: str) -> np.ndarray:
    v = np.zeros(2**len(bits), dtype=complex); v[int(bits, 2)] = 1; return v

def _proj(v: np.ndarray) -> np.ndarray: return np.outer(v, v.conj())

def msmq_examples() -> tuple[DensityOperator, DensityOperator, DensityOperator]:
    """rho1 NPT everywhere, rho2 separable mixture, rho3 symmetric PPT edge state."""
    g = _ket("000") + _ket("111")
    rho1 = _proj(g)/3 + _proj(_ket("111"))/3
    rho2 = (_proj(_ket("000")) + _proj(_ket("111")))/2
    rho3 = 2/19*(_proj(g) + 2*sum(_proj(_ket(b)) for b in ("001", "010", "100"))
                 + sum(_proj(_ket(b)) for b in ("011", "101", "110"))/2)
    return DensityOperator(3, rho1), DensityOperator(3, rho2), DensityOperator(3, rho3)
