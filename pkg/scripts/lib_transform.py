"""ILO search converting a pure state to SMQ form, separable fallbacks, and unitarization."""
from __future__ import annotations
import itertools,logging,math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence
import numpy as np
from scipy import linalg
from scripts.lib_errors import InconclusiveError, NotInvertibleError, ParameterError, ResourceError
from scripts.lib_smq import EPS_ZERO, SmqCoefficients, classify_smq
from scripts.lib_states import (RANK_TOL, Bipartition, LocalOperatorChain, PureState, all_bipartitions, apply_chain,
                                ghz, psi4, random_local_operator, schmidt_rank)

log = logging.getLogger(__name__)
MAX_TRIES = 64
POWER5_N_CAP = 16
ANGLE_MODULUS = 2**61 - 1  # theta = 2*pi*p/q with q prime

class Verdict(str, Enum):
    smq_found = "smq_found"
    separable = "separable"

@dataclass(frozen=True)
class TransformOutcome:
    verdict: Verdict
    chain: LocalOperatorChain | None = None
    coefficients: SmqCoefficients | None = None
    separating_qubits: tuple[int, ...] = ()
    factors: tuple[np.ndarray, np.ndarray] | None = None
    diagnostics: tuple[tuple[float, float], ...] = ()
    strategy: str = ""
    tries: int = 0

    @property
    def separating_qubit(self) -> int | None:
        return self.separating_qubits[0] if len(self.separating_qubits) == 1 else None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value, "strategy": self.strategy, "tries": self.tries,
               "diagnostics": [{"f": f, "g": g} for f, g in self.diagnostics]}
        if self.chain is not None: out["chain"] = chain_to_json(self.chain)
        if self.verdict is Verdict.separable:
            out["separating_qubits"] = list(self.separating_qubits)
            out["factors"] = [[[z.real, z.imag] for z in v] for v in self.factors]
        return out

@dataclass(frozen=True)
class UnitarizationResult:
    prime_chain: LocalOperatorChain
    normalizers: tuple[float, ...]
    unitary_chain: LocalOperatorChain

    @property
    def unitarity_error(self) -> float: return max(u.unitarity_error() for u in self.unitary_chain)

def chain_to_json(chain: LocalOperatorChain) -> list:
    return [[[[z.real, z.imag] for z in row] for row in op.entries] for op in chain]

def chain_from_json(data: list) -> LocalOperatorChain:
    return LocalOperatorChain.from_matrices(np.array([[complex(*z) for z in row] for row in op]) for op in data)

# --- Contractions ---
def _contract_all_but(psi: np.ndarray, rows: Sequence[np.ndarray | None]) -> np.ndarray:
    """c^T (x_k rows[k]) over every qubit whose row is given; remaining axes kept (bilinear, no conjugation)."""
    t = psi
    for k in reversed(range(len(rows))):
        if rows[k] is not None: t = np.tensordot(t, rows[k], axes=([k], [0]))
    return t

def zeroing_alpha0(state: PureState, tail: Sequence[Sequence[complex]], eps: float = EPS_ZERO) -> tuple[complex, complex]:
    """(alpha_00, alpha_01) cancelling the |0...0> coefficient for the given tail top rows (qubits 1..N-1).

    Both contractions vanishing (f0 = g0 = 0) leaves no valid first row and raises InconclusiveError.
    """
    if state.n_qubits < 2: raise ParameterError("zeroing needs N >= 2")
    if len(tail) != state.n_qubits - 1: raise ParameterError(f"need {state.n_qubits - 1} tail rows, got {len(tail)}")
    v = _contract_all_but(state.tensor, [None] + [np.asarray(r, dtype=complex) for r in tail])
    if max(abs(v[0]), abs(v[1])) <= eps:
        raise InconclusiveError(f"zeroing row degenerate: both contractions vanish for tail {[list(map(complex, r)) for r in tail]}")
    return complex(-v[1]), complex(v[0])

def _zeroing_row(psi: np.ndarray, r: int, tops: Sequence[np.ndarray]) -> np.ndarray:
    rows = list(tops); rows[r] = None
    v = _contract_all_but(psi, rows); return np.array([-v[1], v[0]])

def _completion(top: np.ndarray, fg: np.ndarray, eps: float) -> np.ndarray:
    """Unit row orthogonal to conj(top); mixed with top when it would kill the weight-1 coefficient."""
    comp = np.array([-np.conj(top[1]), np.conj(top[0])])/np.linalg.norm(top)
    scale = max(float(np.linalg.norm(fg)), 1e-300)
    for t in (0, 1, -1, 1j, -1j):
        row = comp + t*top/np.linalg.norm(top)
        if abs(row@fg) > eps*scale*10: return row/np.linalg.norm(row)
    return comp

def _attempt(state: PureState, r: int, tops: list[np.ndarray], eps: float) -> tuple[LocalOperatorChain, tuple] | None:
    """Build the chain for given top rows with qubit r carrying the zeroing role; None if it fails."""
    psi = state.tensor; n = state.n_qubits; tops = [np.asarray(t, dtype=complex) for t in tops]
    z = _zeroing_row(psi, r, tops)
    if np.linalg.norm(z) <= eps: return None
    tops[r] = z/np.linalg.norm(z); mats, diag = [], []
    for l in range(n):
        rows = list(tops); rows[l] = None
        fg = _contract_all_but(psi, rows); diag.append((float(abs(fg[0])), float(abs(fg[1]))))
        if np.linalg.norm(fg) <= eps: return None
        t = tops[l]/np.linalg.norm(tops[l]); mats.append(np.array([t, _completion(t, fg, eps)]))
    chain = LocalOperatorChain.from_matrices(mats)
    if not chain.is_ilo: return None
    return chain, tuple(diag)

# --- Powers-of-5 angles ---
def power5_angle(k: int, p: int, q: int = ANGLE_MODULUS) -> float:
    """5^k * (2*pi*p/q) reduced mod 2*pi, by iterative multiply-and-reduce on integers."""
    r = p % q
    for _ in range(k): r = (5*r) % q
    return 2*math.pi*r/q

def power5_reference(k: int, p: int, q: int = ANGLE_MODULUS) -> float:
    return float(2*math.pi*(Fraction(p*5**k, q) % 1))

def power5_tails(n: int, p: int, q: int = ANGLE_MODULUS) -> list[np.ndarray]:
    """Top rows (x^{5^k}, x^{5^{k+N-1}}) for k = 1..N-1 with x = e^{i theta}."""
    if n > POWER5_N_CAP: raise ResourceError(f"powers-of-5 construction capped at N={POWER5_N_CAP}")
    return [np.exp(1j*np.array([power5_angle(k, p, q), power5_angle(k + n - 1, p, q)])) for k in range(1, n)]

# --- Separability ---
def check_separability_pattern(state: PureState, qubit: int, tol: float = RANK_TOL) -> bool:
    """True iff the state factors as (qubit) x (rest)."""
    if state.n_qubits < 2: raise ParameterError("separability pattern needs N >= 2")
    return schmidt_rank(state, Bipartition(state.n_qubits, (qubit,)), tol) == 1

def factorize(state: PureState, cut: Bipartition) -> tuple[np.ndarray, np.ndarray]:
    """(side factor, rest factor) of a rank-one cut; their outer product rebuilds the state."""
    m = np.transpose(state.tensor, cut.subset + cut.complement).reshape(2**len(cut.subset), -1)
    u, s, vh = linalg.svd(m, full_matrices=False)
    return u[:, 0]*s[0], vh[0]

def find_product_cut(state: PureState, tol: float = RANK_TOL) -> Bipartition | None:
    """Smallest side of a cut across which the state factors, single qubits first."""
    n = state.n_qubits
    for q in range(n):
        if check_separability_pattern(state, q, tol): return Bipartition(n, (q,))
    for cut in all_bipartitions(n):
        if schmidt_rank(state, cut, tol) < 2:
            side = cut.subset if len(cut.subset) <= len(cut.complement) else cut.complement
            return Bipartition(n, side)
    return None

def _separable(state: PureState, cut: Bipartition) -> TransformOutcome:
    f, rest = factorize(state, cut)
    log.info("state factors across %s", cut.label)
    return TransformOutcome(Verdict.separable, separating_qubits=cut.subset, factors=(f, rest), strategy="rank_one_reshape")

# --- Search ladder ---
def _tentative(n: int) -> Iterator[tuple[str, int, list[np.ndarray]]]:
    for r in range(n): yield "tentative", r, [np.array([0, 1], dtype=complex)]*n

def _powers_of_five(n: int, rng: np.random.Generator, tries: int) -> Iterator[tuple[str, int, list[np.ndarray]]]:
    for _ in range(tries):
        p = int(rng.integers(1, ANGLE_MODULUS)); yield "powers_of_5", 0, [np.ones(2, dtype=complex)] + power5_tails(n, p)

def _random_tails(n: int, rng: np.random.Generator, tries: int) -> Iterator[tuple[str, int, list[np.ndarray]]]:
    for _ in range(tries): yield "random", 0, [random_local_operator(rng).entries[0] for _ in range(n)]

def find_ilo_to_smq(state: PureState, seed: int = 0, max_tries: int = MAX_TRIES, eps: float = EPS_ZERO,
                    tol: float = RANK_TOL) -> TransformOutcome:
    s = state.normalized(); n = s.n_qubits
    if n < 2: raise ParameterError("transform needs N >= 2")
    if (cut := find_product_cut(s, tol)) is not None: return _separable(s, cut)
    if coeffs := classify_smq(s, eps):
        return TransformOutcome(Verdict.smq_found, LocalOperatorChain.identity(n), coeffs, strategy="already_smq")
    rng = np.random.default_rng([seed, n])
    ladder = itertools.chain(_tentative(n), _powers_of_five(n, rng, max_tries) if n <= POWER5_N_CAP else (),
                             _random_tails(n, rng, max_tries))
    i = 0
    for i, (name, r, tops) in enumerate(ladder, 1):
        got = _attempt(s, r, tops, eps)
        if got is None: log.debug("%s try %d (zeroing qubit %d) failed", name, i, r); continue
        chain, diag = got
        if coeffs := classify_smq(apply_chain(s, chain), eps):
            log.info("SMQ chain found by %s after %d tries", name, i)
            return TransformOutcome(Verdict.smq_found, chain, coeffs, diagnostics=diag, strategy=name, tries=i)
    raise InconclusiveError(f"no SMQ chain after {i} tries and no product cut found")

def unitarize(chain: LocalOperatorChain) -> UnitarizationResult:
    """V' with members [[x, 0], [y, 1]] such that (V'V)_k / a_k is unitary and SMQ form is kept."""
    primes, norms, units = [], [], []
    for k, op in enumerate(chain):
        if not op.is_invertible: raise NotInvertibleError(f"chain member {k} is singular")
        (a0, a1), (a2, a3) = op.entries; nrm = abs(a0)**2 + abs(a1)**2
        x = (a1*a2 - a0*a3)/nrm; y = (-np.conj(a0)*a2 - np.conj(a1)*a3)/nrm
        vp = np.array([[x, 0], [y, 1]]); prod = vp@op.entries
        a = abs(op.det)/math.sqrt(nrm)
        primes.append(vp); norms.append(float(a)); units.append(prod/a)
    return UnitarizationResult(LocalOperatorChain.from_matrices(primes), tuple(norms), LocalOperatorChain.from_matrices(units))

def exponent_injectivity_selftest(a_base: int, max_terms: int, max_exponent: int = 12, max_digit: int | None = None) -> bool:
    """Exhaustively check sum p_i a^{m_i} (distinct m_i, digits 1..max_digit) never collides across sequences."""
    max_digit = a_base - 1 if max_digit is None else max_digit
    if not 2 <= a_base <= 7 or max_exponent > 12 or not 1 <= max_digit < a_base:
        raise ParameterError("selftest supports a_base in [2, 7], exponents <= 12, digits in [1, a_base-1]")
    seen: dict[int, tuple] = {}
    for t in range(1, max_terms + 1):
        for exps in itertools.combinations(range(max_exponent + 1), t):
            for digits in itertools.product(range(1, max_digit + 1), repeat=t):
                v = sum(d*a_base**m for d, m in zip(digits, exps)); key = tuple(zip(exps, digits))
                if seen.setdefault(v, key) != key: log.warning("collision at %d: %s vs %s", v, seen[v], key); return False
    return True

# --- Explicit chains for recognized inputs ---
def ghz_chain(n: int) -> LocalOperatorChain:
    """Unitary chain sending |GHZ_N> to an SMQ state (odd-weight patterns only)."""
    w = np.exp(1j*math.pi*(n - 1)/n); h = math.sqrt(2)/2
    return LocalOperatorChain.uniform(np.array([[h, -h*w], [h, h*w]]), n)

def two_qubit_chain(theta: float) -> LocalOperatorChain:
    """V = [[1, i sqrt(cot theta)], [0, 1]] on both qubits of cos(t)|00> + sin(t)|11>."""
    v = np.array([[1, 1j*math.sqrt(1/math.tan(theta))], [0, 1]])
    return LocalOperatorChain.uniform(v, 2)

def psi4_chain() -> LocalOperatorChain:
    r2, r5 = math.sqrt(2), math.sqrt(5)
    return LocalOperatorChain.from_matrices([np.array([[1, 1], [1, -1]])/r2, np.array([[1, 2], [2, -1]])/r5,
                                             np.array([[3, 4], [4, -3]])/5, np.eye(2)])

def _matches(state: PureState, ref: PureState, tol: float = 1e-10) -> bool:
    return state.n_qubits == ref.n_qubits and abs(abs(state.normalized().overlap(ref)) - 1) <= tol

def known_chain(state: PureState) -> tuple[str, LocalOperatorChain] | None:
    """Explicit chains for GHZ_N, psi4 and two-qubit Schmidt-form inputs, else None."""
    s = state.normalized(); n = s.n_qubits
    if n >= 2 and _matches(s, ghz(n)): return f"ghz{n}", ghz_chain(n)
    if n == 4 and _matches(s, psi4()): return "psi4", psi4_chain()
    a = s.amplitudes
    if n == 2 and abs(a[1]) < 1e-12 and abs(a[2]) < 1e-12 and abs(a[0]) > 0 and abs(a[3]) > 0:
        ph = a[0]/abs(a[0])
        if abs(a[3]/ph - abs(a[3])) < 1e-12 and abs(a[3]) <= abs(a[0]) + 1e-15:
            theta = math.atan2(abs(a[3]), abs(a[0])); return "two_qubit_theta", two_qubit_chain(theta)
    return None
