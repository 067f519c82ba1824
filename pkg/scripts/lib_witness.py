"""Witness operators: named witnesses, ILO conjugation, noise tolerance and validity oracles."""
from __future__ import annotations
import dataclasses,logging,math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence
import numpy as np
from scipy import linalg
from scripts.lib_errors import DimensionError, NotDetectedError, NotGenuinelyEntangledError, ParameterError
from scripts.lib_states import (Bipartition, DensityOperator, LocalOperatorChain, PureState, all_bipartitions,
                                embed, is_genuinely_entangled, kron_all, max_schmidt_coefficient_sq, w)

log = logging.getLogger(__name__)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)
PROJ0 = np.diag([1, 0]).astype(complex)
DICKE24_U = np.array([[1, -1], [1j, 1j]], dtype=complex)/math.sqrt(2)
HERM_TOL = 1e-12
SEESAW_RESTARTS = 50
SEESAW_SWEEPS = 200
SEESAW_TOL = 1e-12
VIOLATION_TOL = 1e-7

class Provenance(str, Enum):
    w_n = "w_n"
    w_c = "w_c"
    smq = "smq"
    conjugated = "conjugated"
    w_prime = "w_prime"
    dicke24 = "dicke24"

@dataclass(frozen=True)
class Witness:
    """Hermitian observable plus construction metadata.

    base_chain C, when present, satisfies W = C^dagger W_{W_N} C; smq_chain maps the
    target state into SMQ form.
    """
    n_qubits: int
    matrix: np.ndarray
    provenance: Provenance
    params: dict[str, Any] = field(default_factory=dict)
    base_chain: LocalOperatorChain | None = None
    smq_chain: LocalOperatorChain | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex); d = 2**self.n_qubits
        if m.shape != (d, d): raise DimensionError(f"witness {m.shape} for {self.n_qubits} qubits")
        if np.abs(m - m.conj().T).max() > HERM_TOL*max(1.0, float(np.abs(m).max())):
            raise ParameterError("witness matrix is not Hermitian")
        m = (m + m.conj().T)/2; m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def with_meta(self, provenance: Provenance | None = None, params: dict | None = None, **chains) -> Witness:
        return dataclasses.replace(self, provenance=provenance or self.provenance,
                                   params={**self.params, **(params or {})}, **chains)

    @property
    def trace(self) -> float: return float(np.trace(self.matrix).real)

    def expectation(self, x: PureState | DensityOperator) -> float:
        if isinstance(x, PureState):
            v = x.normalized().amplitudes; return float(np.vdot(v, self.matrix@v).real)
        return float(np.trace(self.matrix@x.matrix).real)

@dataclass(frozen=True)
class ToleranceReport:
    p_max: float
    trace_on_target: float
    trace_of_witness: float

    def to_json(self) -> dict: return dataclasses.asdict(self)

@dataclass(frozen=True)
class SeeSawResult:
    value: float
    restarts: int
    best: tuple[np.ndarray, ...]
    cut: str | None = None

    @property
    def violated(self) -> bool: return self.value < -VIOLATION_TOL

    def to_json(self) -> dict:
        out = {"value": self.value, "restarts": self.restarts, "cut": self.cut}
        if self.violated: out["best_state"] = [[[z.real, z.imag] for z in v] for v in self.best]
        return out

@dataclass(frozen=True)
class MixtureDetection:
    detected: bool
    expectation: float

    def __bool__(self) -> bool: return self.detected

# --- Construction ---
def w_n_witness(n: int) -> Witness:
    if n < 2: raise ParameterError(f"W witness needs N >= 2, got {n}")
    v = w(n).amplitudes
    return Witness(n, (n - 1)/n*np.eye(2**n) - np.outer(v, v.conj()), Provenance.w_n, {},
                   base_chain=LocalOperatorChain.identity(n), smq_chain=LocalOperatorChain.identity(n))

def projector_witness(state: PureState) -> Witness:
    s = state.normalized()
    if not is_genuinely_entangled(s): raise NotGenuinelyEntangledError("projector witness needs a genuinely entangled state")
    c = max_schmidt_coefficient_sq(s); v = s.amplitudes
    return Witness(s.n_qubits, c*np.eye(2**s.n_qubits) - np.outer(v, v.conj()), Provenance.w_c, {"c": c})

def conjugate_witness(base: Witness, chain: LocalOperatorChain) -> Witness:
    """W' = (x A) W (x A^dagger); detects (x A^-1)^dagger rho (x A^-1) as well as W detects rho."""
    if len(chain) != base.n_qubits: raise DimensionError(f"chain of length {len(chain)} for {base.n_qubits} qubits")
    chain.require_ilo(); a = chain.matrix()
    bc = base.base_chain.compose(chain.dagger) if base.base_chain is not None else None
    sc = base.smq_chain.compose(chain.dagger) if base.smq_chain is not None else None
    return Witness(base.n_qubits, a@base.matrix@a.conj().T, Provenance.conjugated, dict(base.params),
                   base_chain=bc, smq_chain=sc)

def push_state(rho: DensityOperator, chain: LocalOperatorChain) -> DensityOperator:
    """rho' = (x A^-1)^dagger rho (x A^-1), the partner of conjugate_witness."""
    ai = chain.inverse.matrix()
    return DensityOperator.unnormalized(rho.n_qubits, ai.conj().T@rho.matrix@ai)

def w_prime_witness(n: int, b: float) -> Witness:
    if not b > 0: raise ParameterError(f"b must be positive, got {b}")
    e = LocalOperatorChain.uniform(np.diag([1, b*math.sqrt(n)]), n)
    return conjugate_witness(w_n_witness(n), e).with_meta(Provenance.w_prime, {"b": b}, base_chain=e,
                                                          smq_chain=LocalOperatorChain.identity(n))

def dicke24_bracket() -> np.ndarray:
    """2I - sx^4 - (1/4) prod_k (sz_{k-1} sz_k + I) on four qubits."""
    zz = [embed(np.kron(SIGMA_Z, SIGMA_Z), (k - 1, k), 4) + np.eye(16) for k in (1, 2, 3)]
    return 2*np.eye(16) - kron_all([SIGMA_X]*4) - zz[0]@zz[1]@zz[2]/4

def dicke24_witness() -> Witness:
    u = kron_all([DICKE24_U]*4)
    return Witness(4, u.conj().T@dicke24_bracket()@u, Provenance.dicke24, {})

# --- Tolerance ---
def _as_density(x: PureState | DensityOperator) -> DensityOperator:
    return x.density() if isinstance(x, PureState) else x

def white_noise_tolerance(wit: Witness, rho: PureState | DensityOperator) -> ToleranceReport:
    rho = _as_density(rho); t = wit.expectation(rho)
    if t >= 0: raise NotDetectedError("witness does not detect the state", t)
    tw = wit.trace
    return ToleranceReport(-t/(tw/2**wit.n_qubits - t), t, tw)

def noisy(rho: PureState | DensityOperator, p: float) -> DensityOperator:
    rho = _as_density(rho); d = 2**rho.n_qubits
    return DensityOperator(rho.n_qubits, p*np.eye(d)/d + (1 - p)*rho.matrix)

def w_witness_tolerance(n: int) -> float:
    """Closed form of p_max for W_{W_N} on |W_N>."""
    return 1/(n*(1 - 2.0**-n))

def w_prime_tolerance(n: int) -> float:
    """Closed form of p_max for W' at b = 1/sqrt(N^2-N) on |W_N>."""
    return 2**n/(2**n - n + (n - 1)**(2 - n)*n**n)

def two_qubit_tolerance_bound(theta: float) -> float:
    c4, s2 = math.cos(4*theta), math.sin(2*theta)
    return 8*math.cos(theta)**2*math.sin(theta)**2/(2 - c4 + math.sqrt(max(0.0, 2 - c4 - 2*s2)) - s2)

def two_qubit_projector_tolerance(theta: float) -> float: return 4/3*math.sin(theta)**2

# --- Validity oracles ---
def _restart_rngs(seed: int, restarts: int, tag: int = 0):
    return [np.random.default_rng([seed, tag, r]) for r in range(restarts)]

def _random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j*rng.normal(size=d); return v/np.linalg.norm(v)

def _effective(w4: np.ndarray, vecs: list[np.ndarray], j: int) -> np.ndarray:
    """Contract every factor but j on both sides: (x_{i!=j} v_i)^dagger W (x_{i!=j} v_i)."""
    k = len(vecs); rows, cols = [chr(97 + i) for i in range(k)], [chr(65 + i) for i in range(k)]
    subs, ops = ["".join(rows) + "".join(cols)], [w4]
    for i in range(k):
        if i != j: subs += [rows[i], cols[i]]; ops += [vecs[i].conj(), vecs[i]]
    return np.einsum(",".join(subs) + "->" + rows[j] + cols[j], *ops, optimize=True)

def _seesaw(w4: np.ndarray, dims: Sequence[int], rng: np.random.Generator, sweeps: int, tol: float) -> tuple[float, list[np.ndarray]]:
    """Alternating minimal-eigenvector updates over a product of pure factors of the given dims."""
    vecs = [_random_unit(rng, d) for d in dims]; prev = math.inf
    for _ in range(sweeps):
        for j in range(len(dims)):
            e = _effective(w4, vecs, j); evals, evecs = linalg.eigh((e + e.conj().T)/2)
            vecs[j], val = evecs[:, 0], float(evals[0])
        if prev - val < tol: return val, vecs
        prev = val
    return prev, vecs

def _best(runs: list[tuple[float, list[np.ndarray]]]) -> tuple[float, list[np.ndarray]]:
    return min(runs, key=lambda r: r[0])

def min_over_product_states(wit: Witness, restarts: int = SEESAW_RESTARTS, seed: int = 0,
                            sweeps: int = SEESAW_SWEEPS, tol: float = SEESAW_TOL) -> SeeSawResult:
    """Best product-state expectation found by see-saw; an estimate, not a certified minimum."""
    n = wit.n_qubits; w4 = wit.matrix.reshape((2,)*(2*n))
    val, vecs = _best([_seesaw(w4, [2]*n, rng, sweeps, tol) for rng in _restart_rngs(seed, restarts)])
    log.debug("product see-saw min=%.3e over %d restarts", val, restarts)
    return SeeSawResult(val, restarts, tuple(vecs))

def _reorder(matrix: np.ndarray, cut: Bipartition) -> np.ndarray:
    n = cut.n_qubits; order = list(cut.subset + cut.complement)
    return matrix.reshape((2,)*(2*n)).transpose(order + [n + q for q in order])

def min_over_biseparable(wit: Witness, restarts: int = SEESAW_RESTARTS, seed: int = 0,
                         sweeps: int = SEESAW_SWEEPS, tol: float = SEESAW_TOL) -> SeeSawResult:
    """See-saw over |a>|b> for every canonical cut, sides of full local dimension."""
    n = wit.n_qubits
    if n < 2: raise ParameterError("biseparable oracle needs N >= 2")
    best = None
    for t, cut in enumerate(all_bipartitions(n)):
        da, db = 2**len(cut.subset), 2**len(cut.complement)
        w4 = _reorder(wit.matrix, cut).reshape(da, db, da, db)
        val, vecs = _best([_seesaw(w4, [da, db], rng, sweeps, tol) for rng in _restart_rngs(seed, restarts, t + 1)])
        if best is None or val < best.value: best = SeeSawResult(val, restarts, tuple(vecs), cut.label)
    log.debug("biseparable see-saw min=%.3e at cut %s", best.value, best.cut)
    return best

def detect_mixture(wit: Witness, components: Sequence[tuple[float, PureState | DensityOperator]]) -> MixtureDetection:
    if any(wt < 0 for wt, _ in components): raise ParameterError("mixture weights must be nonnegative")
    t = sum(wt*wit.expectation(_as_density(r)) for wt, r in components)
    return MixtureDetection(t < 0, float(t))
