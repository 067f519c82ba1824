"""SMQ-form classification, the SMQ-inequality for b, and W_SMQ construction."""
from __future__ import annotations
import logging,math
from dataclasses import dataclass
from enum import Enum
import numpy as np
from scipy import optimize
from scripts.lib_errors import ParameterError
from scripts.lib_states import PureState, LocalOperatorChain, bits, excitation, weight
from scripts.lib_witness import Provenance, Witness, conjugate_witness, w_n_witness

log = logging.getLogger(__name__)
EPS_ZERO = 1e-9
BISECT_XTOL = 1e-12
LHS_TOL = 1e-13
NEWTON_STEPS = 8

@dataclass(frozen=True)
class SmqCoefficients:
    """Normalized amplitudes keyed by excitation pattern (int index, qubit 0 = MSB)."""
    n_qubits: int
    by_pattern: dict[int, complex]

    def a1(self, k: int) -> complex: return self.by_pattern[excitation(k, self.n_qubits)]
    @property
    def weight1(self) -> np.ndarray: return np.array([self.a1(k) for k in range(self.n_qubits)])
    @property
    def higher(self) -> dict[int, complex]: return {p: a for p, a in self.by_pattern.items() if weight(p) >= 2}
    @property
    def is_pseudo_w(self) -> bool: return not self.higher

    def state(self) -> PureState:
        a = np.zeros(2**self.n_qubits, dtype=complex)
        for p, v in self.by_pattern.items(): a[p] = v
        return PureState(self.n_qubits, a)

    def to_json(self) -> dict:
        return {bits(p, self.n_qubits): [v.real, v.imag] for p, v in sorted(self.by_pattern.items())}

@dataclass(frozen=True)
class SmqRejection:
    reason: str
    zero_term: float
    vanishing: tuple[int, ...]

    def __bool__(self) -> bool: return False

class BoundMethod(str, Enum):
    exact_bisection = "exact_bisection"
    simplified_bound = "simplified_bound"
    pseudo_w_unbounded = "pseudo_w_unbounded"

@dataclass(frozen=True)
class SmqInequalityReport:
    b_upper: float
    lhs_polynomial: tuple[tuple[int, float], ...]
    method: BoundMethod

    @property
    def bounded(self) -> bool: return math.isfinite(self.b_upper)

    def default_b(self, n: int) -> float:
        return self.b_upper/2 if self.bounded else 1/math.sqrt(n*n - n)

    def to_json(self) -> dict:
        return {"b_upper": self.b_upper if self.bounded else "inf", "method": self.method.value,
                "polynomial": [[p, c] for p, c in self.lhs_polynomial]}

def classify_smq(state: PureState, eps: float = EPS_ZERO) -> SmqCoefficients | SmqRejection:
    s = state.normalized(); a = s.amplitudes; n = s.n_qubits
    zero = float(abs(a[0])); vanish = tuple(k for k in range(n) if abs(a[excitation(k, n)]) <= eps)
    if zero > eps or vanish:
        reason = "; ".join(filter(None, [f"|{'0'*n}> term present ({zero:.3g})" if zero > eps else "",
                                         f"vanishing single-excitation amplitudes at qubits {list(vanish)}" if vanish else ""]))
        return SmqRejection(reason, zero, vanish)
    pats = {i: complex(a[i]) for i in range(1, 2**n) if abs(a[i]) > eps}
    return SmqCoefficients(n, pats)

def random_smq_state(n: int, rng: np.random.Generator) -> PureState:
    """Gaussian amplitudes with the |0...0> term removed (weight-1 terms nonzero almost surely)."""
    a = rng.normal(size=2**n) + 1j*rng.normal(size=2**n); a[0] = 0
    return PureState(n, a).normalized()

def lhs_polynomial(coeffs: SmqCoefficients) -> tuple[tuple[int, float], ...]:
    """(power of b, coefficient) pairs of the SMQ-inequality left-hand side; powers are 2m-2."""
    n, inv = coeffs.n_qubits, 1/np.abs(coeffs.weight1)**2; terms: dict[int, float] = {}
    for p, a in coeffs.higher.items():
        prod = math.prod(inv[k] for k in range(n) if p >> (n - 1 - k) & 1)
        pw = 2*weight(p) - 2; terms[pw] = terms.get(pw, 0.0) + abs(a)**2*prod
    return tuple(sorted(terms.items()))

def smq_lhs(coeffs: SmqCoefficients, b: float) -> float:
    if not b > 0: raise ParameterError(f"b must be positive, got {b}")
    return float(sum(c*b**p for p, c in lhs_polynomial(coeffs)))

def smq_target(n: int) -> float: return n/(n - 1)

def solve_b_upper(coeffs: SmqCoefficients, method: BoundMethod = BoundMethod.exact_bisection) -> SmqInequalityReport:
    """b_upper by bisection on the lhs polynomial, or the cheaper sufficient bound when method is simplified_bound."""
    poly = lhs_polynomial(coeffs)
    if not poly: return SmqInequalityReport(math.inf, poly, BoundMethod.pseudo_w_unbounded)
    if method is BoundMethod.simplified_bound: return SmqInequalityReport(simplified_b_bound(coeffs), poly, method)
    tgt = smq_target(coeffs.n_qubits); f = lambda b: sum(c*b**p for p, c in poly) - tgt
    df = lambda b: sum(p*c*b**(p - 1) for p, c in poly)
    lo, hi = 0.0, 1.0
    while f(hi) < 0: lo, hi = hi, hi*2
    b = optimize.bisect(f, lo, hi, xtol=BISECT_XTOL, maxiter=500)
    # bisection bounds b, not the lhs; polish on the (monotone) polynomial
    for _ in range(NEWTON_STEPS):
        if abs(fb := f(b)) <= LHS_TOL*tgt: break
        b = min(max(b - fb/df(b), lo), hi)
    log.debug("b_upper=%.12g bracket=(%g, %g) residual=%.1e", b, lo, hi, f(b))
    return SmqInequalityReport(float(b), poly, BoundMethod.exact_bisection)

def simplified_b_bound(coeffs: SmqCoefficients) -> float:
    n, a1 = coeffs.n_qubits, np.abs(coeffs.weight1)**2
    residual = sum(abs(a)**2 for a in coeffs.higher.values())  # 1 - sum |a_1j|^2
    if residual == 0: return 1.0
    return float(min(1.0, math.sqrt(smq_target(n)/(np.prod(1/a1)*residual))))

def smq_diag_chain(coeffs: SmqCoefficients, b: float) -> LocalOperatorChain:
    """D_k = diag(1, b/a_{1,k})."""
    return LocalOperatorChain.from_matrices(np.diag([1, b/a]) for a in coeffs.weight1)

def check_b(coeffs: SmqCoefficients, b: float, report: SmqInequalityReport | None = None) -> SmqInequalityReport:
    rep = report or solve_b_upper(coeffs)
    if not 0 < b < rep.b_upper: raise ParameterError(f"b={b} outside (0, b_upper)", rep.b_upper)
    return rep

def build_w_smq(coeffs: SmqCoefficients, b: float, report: SmqInequalityReport | None = None) -> Witness:
    """W_SMQ = D^dagger W_{W_N} D for 0 < b < b_upper (any b > 0 for pseudo-W)."""
    rep = check_b(coeffs, b, report); d = smq_diag_chain(coeffs, b)
    params = {"b": b, "b_upper": rep.b_upper if rep.bounded else "inf"}
    return conjugate_witness(w_n_witness(coeffs.n_qubits), d.dagger).with_meta(
        Provenance.smq, params, base_chain=d, smq_chain=LocalOperatorChain.identity(coeffs.n_qubits))
