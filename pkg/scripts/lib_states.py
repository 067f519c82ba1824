"""Multiqubit pure/mixed states, local operator chains, cuts and named states.

Amplitude index convention: qubit 0 is the most significant bit, so index i
encodes |i_0 i_1 ... i_{N-1}>.
"""
from __future__ import annotations
import itertools,logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Iterable, Iterator, Sequence
import numpy as np
from scipy import linalg
from scipy.special import comb
from scripts.lib_errors import BipartitionError, DimensionError, NotInvertibleError, ParameterError, ResourceError

log = logging.getLogger(__name__)
NORM_TOL = 1e-12
HERM_TOL = 1e-12
RANK_TOL = 1e-8
INVERTIBLE_TOL = 1e-12
DEFAULT_N_CAP = 12

def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex); a.setflags(write=False); return a

def weight(i: int) -> int: return int(i).bit_count()

def bits(i: int, n: int) -> str: return format(i, f"0{n}b")

def excitation(k: int, n: int) -> int:
    """Index of the weight-1 pattern with qubit k excited."""
    return 1 << (n - 1 - k)

# --- Types ---
@dataclass(frozen=True)
class PureState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).ravel()
        if self.n_qubits < 1 or a.size != 2**self.n_qubits:
            raise DimensionError(f"{a.size} amplitudes for {self.n_qubits} qubits")
        object.__setattr__(self, "amplitudes", _frozen(a))

    @classmethod
    def from_amplitudes(cls, amps: Sequence[complex] | np.ndarray) -> PureState:
        a = np.asarray(amps, dtype=complex).ravel(); n = int(round(np.log2(max(a.size, 1))))
        if 2**n != a.size: raise DimensionError(f"length {a.size} is not a power of two")
        return cls(n, a)

    @property
    def norm(self) -> float: return float(np.linalg.norm(self.amplitudes))
    @property
    def is_normalized(self) -> bool: return abs(self.norm**2 - 1) <= NORM_TOL
    @property
    def tensor(self) -> np.ndarray: return self.amplitudes.reshape((2,)*self.n_qubits)

    def normalized(self) -> PureState:
        if self.norm == 0: raise ParameterError("zero vector cannot be normalized")
        return self if self.is_normalized else PureState(self.n_qubits, self.amplitudes/self.norm)

    def density(self) -> DensityOperator:
        s = self.normalized(); return DensityOperator(self.n_qubits, np.outer(s.amplitudes, s.amplitudes.conj()))

    def overlap(self, other: PureState) -> complex: return complex(np.vdot(self.amplitudes, other.amplitudes))

@dataclass(frozen=True)
class DensityOperator:
    n_qubits: int
    matrix: np.ndarray
    declared_trace: float = 1.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex); d = 2**self.n_qubits
        if m.shape != (d, d): raise DimensionError(f"matrix {m.shape} for {self.n_qubits} qubits")
        scale = max(1.0, float(np.abs(m).max(initial=0)))
        if np.abs(m - m.conj().T).max() > HERM_TOL*scale: raise ParameterError("density operator is not Hermitian")
        if abs(np.trace(m).real - self.declared_trace) > NORM_TOL*max(1.0, abs(self.declared_trace)):
            raise ParameterError(f"trace {np.trace(m).real:.15g} != declared {self.declared_trace}")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def maximally_mixed(cls, n: int) -> DensityOperator: return cls(n, np.eye(2**n)/2**n)

    @classmethod
    def unnormalized(cls, n: int, matrix: np.ndarray) -> DensityOperator:
        m = np.asarray(matrix, dtype=complex); m = (m + m.conj().T)/2
        return cls(n, m, float(np.trace(m).real))

    @property
    def eigenvalues(self) -> np.ndarray: return linalg.eigvalsh(self.matrix)
    @property
    def trace(self) -> float: return float(np.trace(self.matrix).real)

@dataclass(frozen=True)
class LocalOperator:
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (2, 2): raise DimensionError(f"local operator must be 2x2, got {m.shape}")
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def det(self) -> complex: return complex(np.linalg.det(self.entries))
    @property
    def is_invertible(self) -> bool:
        smax = linalg.svdvals(self.entries)[0]
        return abs(self.det) > INVERTIBLE_TOL*smax**2
    @property
    def dagger(self) -> LocalOperator: return LocalOperator(self.entries.conj().T)
    @property
    def inverse(self) -> LocalOperator:
        if not self.is_invertible: raise NotInvertibleError(f"singular local operator, det={self.det:.3g}")
        return LocalOperator(np.linalg.inv(self.entries))

    def unitarity_error(self) -> float: return float(np.abs(self.entries.conj().T@self.entries - np.eye(2)).max())
    def is_unitary(self, tol: float = 1e-10) -> bool: return self.unitarity_error() <= tol

@dataclass(frozen=True)
class LocalOperatorChain:
    ops: tuple[LocalOperator, ...]

    def __post_init__(self): object.__setattr__(self, "ops", tuple(self.ops))

    @classmethod
    def from_matrices(cls, mats: Iterable) -> LocalOperatorChain:
        return cls(tuple(m if isinstance(m, LocalOperator) else LocalOperator(m) for m in mats))
    @classmethod
    def identity(cls, n: int) -> LocalOperatorChain: return cls.from_matrices([np.eye(2)]*n)
    @classmethod
    def uniform(cls, m, n: int) -> LocalOperatorChain: return cls.from_matrices([m]*n)

    def __len__(self) -> int: return len(self.ops)
    def __iter__(self) -> Iterator[LocalOperator]: return iter(self.ops)
    def __getitem__(self, k: int) -> LocalOperator: return self.ops[k]

    @property
    def is_ilo(self) -> bool: return all(o.is_invertible for o in self.ops)
    @property
    def is_unitary(self) -> bool: return all(o.is_unitary() for o in self.ops)
    @property
    def dagger(self) -> LocalOperatorChain: return LocalOperatorChain(tuple(o.dagger for o in self.ops))
    @property
    def inverse(self) -> LocalOperatorChain: return LocalOperatorChain(tuple(o.inverse for o in self.ops))

    def compose(self, other: LocalOperatorChain) -> LocalOperatorChain:
        """Per-qubit product self_k @ other_k (other acts first)."""
        _check_len(other, len(self))
        return LocalOperatorChain.from_matrices(a.entries@b.entries for a, b in zip(self.ops, other.ops))

    def matrix(self) -> np.ndarray: return reduce(np.kron, (o.entries for o in self.ops), np.eye(1, dtype=complex))

    def require_ilo(self) -> LocalOperatorChain:
        for k, o in enumerate(self.ops):
            if not o.is_invertible: raise NotInvertibleError(f"chain member {k} is singular (det={o.det:.3g})")
        return self

@dataclass(frozen=True)
class Bipartition:
    n_qubits: int
    subset: tuple[int, ...] = field(default=())

    def __post_init__(self):
        s = tuple(sorted(set(int(q) for q in self.subset)))
        if not s or len(s) >= self.n_qubits: raise BipartitionError(f"subset {s} must be a nonempty proper subset")
        if s[0] < 0 or s[-1] >= self.n_qubits: raise BipartitionError(f"subset {s} out of range for {self.n_qubits} qubits")
        object.__setattr__(self, "subset", s)

    @property
    def complement(self) -> tuple[int, ...]: return tuple(q for q in range(self.n_qubits) if q not in self.subset)
    @property
    def is_canonical(self) -> bool: return 0 in self.subset
    @property
    def label(self) -> str: return "".join(map(str, self.subset)) + "|" + "".join(map(str, self.complement))

    def canonical(self) -> Bipartition: return self if self.is_canonical else Bipartition(self.n_qubits, self.complement)

def all_bipartitions(n: int) -> list[Bipartition]:
    """Canonical cuts (side containing qubit 0), smallest sides first: 2^{n-1}-1 of them."""
    rest = range(1, n); out = []
    for size in range(0, n - 1):
        out += [Bipartition(n, (0,) + c) for c in itertools.combinations(rest, size)]
    return sorted(out, key=lambda b: (min(len(b.subset), n - len(b.subset)), b.subset))

def _check_len(chain: LocalOperatorChain, n: int) -> None:
    if len(chain) != n: raise DimensionError(f"chain of length {len(chain)} for {n} qubits")

def _as_cut(n: int, cut: Bipartition | Sequence[int]) -> Bipartition:
    b = cut if isinstance(cut, Bipartition) else Bipartition(n, tuple(cut))
    if b.n_qubits != n: raise BipartitionError(f"cut for {b.n_qubits} qubits used on {n}")
    return b

# --- Operations ---
def apply_local(tensor: np.ndarray, op: np.ndarray, k: int) -> np.ndarray:
    """Apply a 2x2 matrix on axis k of a (2,)*N amplitude tensor."""
    return np.moveaxis(np.tensordot(op, tensor, axes=([1], [k])), 0, k)

def apply_chain(state: PureState, chain: LocalOperatorChain) -> PureState:
    _check_len(chain, state.n_qubits); t = state.tensor
    for k, op in enumerate(chain): t = apply_local(t, op.entries, k)
    return PureState(state.n_qubits, t.reshape(-1))

def _bipartite_matrix(state: PureState, cut: Bipartition) -> np.ndarray:
    n = state.n_qubits; cut = _as_cut(n, cut)
    return np.transpose(state.tensor, cut.subset + cut.complement).reshape(2**len(cut.subset), -1)

def reduced_operator(state: PureState, subset: Bipartition | Sequence[int]) -> DensityOperator:
    cut = _as_cut(state.n_qubits, subset); m = _bipartite_matrix(state, cut)
    return DensityOperator(len(cut.subset), m@m.conj().T, float(np.vdot(m, m).real))

def schmidt_coefficients(state: PureState, cut: Bipartition | Sequence[int]) -> np.ndarray:
    """Singular values of the reshaped amplitude matrix, descending."""
    return linalg.svdvals(_bipartite_matrix(state, _as_cut(state.n_qubits, cut)))

def schmidt_rank(state: PureState, cut: Bipartition | Sequence[int], tol: float = RANK_TOL) -> int:
    s = schmidt_coefficients(state, cut)
    return int(np.count_nonzero(s > tol*s[0])) if s[0] > 0 else 0

def _cap(n: int, n_cap: int) -> None:
    if n > n_cap: raise ResourceError(f"{n} qubits exceeds the cap of {n_cap} for exhaustive cut scans")

def is_genuinely_entangled(state: PureState, tol: float = RANK_TOL, n_cap: int = DEFAULT_N_CAP) -> bool:
    if state.n_qubits < 2: raise ParameterError("genuine entanglement needs at least 2 qubits")
    _cap(state.n_qubits, n_cap)
    return all(schmidt_rank(state, b, tol) >= 2 for b in all_bipartitions(state.n_qubits))

def max_schmidt_coefficient_sq(state: PureState, n_cap: int = DEFAULT_N_CAP) -> float:
    s = state.normalized(); _cap(s.n_qubits, n_cap)
    return max(float(schmidt_coefficients(s, b)[0]**2) for b in all_bipartitions(s.n_qubits))

def partial_transpose(rho: DensityOperator, subset: Bipartition | Sequence[int]) -> DensityOperator:
    n = rho.n_qubits; cut = _as_cut(n, subset); t = rho.matrix.reshape((2,)*(2*n))
    axes = list(range(2*n))
    for q in cut.subset: axes[q], axes[n + q] = axes[n + q], axes[q]
    return DensityOperator(n, np.transpose(t, axes).reshape(2**n, 2**n), rho.declared_trace)

def min_pt_eigenvalue(rho: DensityOperator, subset: Bipartition | Sequence[int]) -> float:
    return float(partial_transpose(rho, subset).eigenvalues[0])

def is_ppt(rho: DensityOperator, subset: Bipartition | Sequence[int], tol: float = 1e-12) -> bool:
    return min_pt_eigenvalue(rho, subset) >= -tol

# --- Named states ---
def _basis(n: int, entries: dict[str, complex]) -> PureState:
    a = np.zeros(2**n, dtype=complex)
    for b, v in entries.items(): a[int(b, 2)] = v
    return PureState(n, a).normalized()

def _need_n(n: int) -> int:
    if int(n) != n or n < 2: raise ParameterError(f"need an integer N >= 2, got {n}")
    return int(n)

def ghz(n: int) -> PureState:
    n = _need_n(n); return _basis(n, {"0"*n: 1, "1"*n: 1})

def dicke(m: int, n: int) -> PureState:
    n = _need_n(n)
    if not 0 <= m <= n: raise ParameterError(f"dicke excitation m={m} outside [0, {n}]")
    a = np.array([1.0 if weight(i) == m else 0.0 for i in range(2**n)], dtype=complex)
    return PureState(n, a/np.sqrt(comb(n, m, exact=True)))

def named_dicke(m: int, n: int) -> PureState:
    if not 1 <= m <= n - 1: raise ParameterError(f"dicke(m, N) needs 1 <= m <= N-1, got m={m}, N={n}")
    return dicke(m, n)

def w(n: int) -> PureState: return dicke(1, _need_n(n))

def cluster4() -> PureState: return _basis(4, {"0000": 1, "0011": 1, "1100": 1, "1111": -1})

def psi4() -> PureState:
    h = -0.5
    return _basis(4, {"0011": 1, "1100": 1, "0110": h, "1001": h, "0101": h, "1010": h})

def two_qubit_theta(theta: float) -> PureState:
    if not 0 < theta <= np.pi/4 + 1e-15: raise ParameterError(f"theta={theta} outside (0, pi/4]")
    return _basis(2, {"00": np.cos(theta), "11": np.sin(theta)})

def pseudo_w(coeffs: Sequence[complex]) -> PureState:
    c = np.asarray(coeffs, dtype=complex); n = _need_n(c.size)
    if np.any(np.abs(c) == 0): raise ParameterError("pseudo-W coefficients must all be nonzero")
    a = np.zeros(2**n, dtype=complex)
    for k, v in enumerate(c): a[excitation(k, n)] = v
    return PureState(n, a).normalized()

NAMED: dict[str, Callable[..., PureState]] = {
    "ghz": ghz, "w": w, "dicke": named_dicke, "cluster4": cluster4, "psi4": psi4,
    "two_qubit_theta": two_qubit_theta, "pseudo_w": pseudo_w}

def make_named(name: str, **params) -> PureState:
    if name not in NAMED: raise ParameterError(f"unknown family {name!r}; known: {', '.join(NAMED)}")
    try: return NAMED[name](**params)
    except TypeError as e: raise ParameterError(f"bad params for {name}: {e}") from e

# --- Random helpers (tests, search fallback) ---
def random_state(n: int, rng: np.random.Generator) -> PureState:
    return PureState(n, rng.normal(size=2**n) + 1j*rng.normal(size=2**n)).normalized()

def random_local_operator(rng: np.random.Generator, cond_max: float = 10.0) -> LocalOperator:
    """Random complex 2x2 with condition number <= cond_max."""
    while True:
        m = rng.normal(size=(2, 2)) + 1j*rng.normal(size=(2, 2)); s = linalg.svdvals(m)
        if s[0] <= cond_max*s[1]: return LocalOperator(m/s[0])

def random_chain(n: int, rng: np.random.Generator, cond_max: float = 10.0) -> LocalOperatorChain:
    return LocalOperatorChain(tuple(random_local_operator(rng, cond_max) for _ in range(n)))

def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats, np.eye(1, dtype=complex))

def embed(op: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Full 2^n matrix of `op` (acting on `qubits` in that order) tensored with identity elsewhere."""
    k = len(qubits); rest = [q for q in range(n) if q not in qubits]
    full = np.kron(op, np.eye(2**len(rest))).reshape((2,)*(2*n))
    order = list(qubits) + rest; inv = np.argsort(order)
    return full.transpose(list(inv) + [n + i for i in inv]).reshape(2**n, 2**n)
