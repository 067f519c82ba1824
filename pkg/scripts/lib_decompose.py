"""Local measurement settings: each setting is one product basis with real outcome weights."""
from __future__ import annotations
import itertools,logging
from functools import reduce
from dataclasses import dataclass
from typing import Callable, Sequence
import numpy as np
from scipy import linalg
from scripts.lib_errors import DimensionError, SchemeError
from scripts.lib_states import LocalOperatorChain, kron_all
from scripts.lib_witness import DICKE24_U, IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z, Provenance, Witness

log = logging.getLogger(__name__)
ORTHO_TOL = 1e-12
# eigenbases with outcome 0 <-> eigenvalue +1
BASIS_Z = np.eye(2, dtype=complex)
BASIS_X = np.array([[1, 1], [1, -1]], dtype=complex)/np.sqrt(2)
BASIS_Y = np.array([[1, 1], [1j, -1j]], dtype=complex)/np.sqrt(2)
PAULI_BASES = {"x": (SIGMA_X, BASIS_X), "y": (SIGMA_Y, BASIS_Y), "z": (SIGMA_Z, BASIS_Z)}

@dataclass(frozen=True)
class LocalSetting:
    """bases[k] columns are the measured vectors on qubit k; weights are indexed by joint outcome (qubit 0 = MSB)."""
    bases: tuple[np.ndarray, ...]
    weights: np.ndarray
    observables: tuple[np.ndarray, ...]
    label: str = ""
    realizable: bool = True

    def __post_init__(self):
        n = len(self.bases); w = np.asarray(self.weights, dtype=float).ravel()
        if w.size != 2**n or len(self.observables) != n: raise DimensionError(f"setting on {n} qubits has {w.size} weights")
        object.__setattr__(self, "weights", w)

    @property
    def n_qubits(self) -> int: return len(self.bases)

    def basis_matrix(self) -> np.ndarray: return kron_all(self.bases)

    def operator(self) -> np.ndarray:
        b = self.basis_matrix(); return (b*self.weights)@b.conj().T

    def orthonormality_error(self) -> float:
        return max(float(np.abs(b.conj().T@b - np.eye(2)).max()) for b in self.bases)

    def is_orthonormal(self, tol: float = ORTHO_TOL) -> bool: return self.orthonormality_error() <= tol

    def to_json(self) -> dict:
        cx = lambda m: [[[z.real, z.imag] for z in row] for row in m]
        return {"label": self.label, "realizable": self.realizable, "weights": self.weights.tolist(),
                "qubit_bases": [cx(b) for b in self.bases], "observables": [cx(o) for o in self.observables]}

@dataclass(frozen=True)
class SettingDecomposition:
    settings: tuple[LocalSetting, ...]
    declared_count: int
    scheme: str = ""

    def __post_init__(self):
        if self.declared_count != len(self.settings):
            raise SchemeError(f"declared {self.declared_count} settings, have {len(self.settings)}")

    @property
    def n_qubits(self) -> int: return self.settings[0].n_qubits

    def to_json(self) -> dict:
        return {"scheme": self.scheme, "declared_count": self.declared_count, "settings": [s.to_json() for s in self.settings]}

def _decomposition(settings: Sequence[LocalSetting], scheme: str) -> SettingDecomposition:
    return SettingDecomposition(tuple(settings), len(settings), scheme)

def _outcomes(n: int) -> np.ndarray:
    """Rows of outcome bits for every joint index."""
    return np.array(list(itertools.product((0, 1), repeat=n)))

def _weights(n: int, fn: Callable[[np.ndarray], float]) -> np.ndarray:
    return np.array([fn(s) for s in _outcomes(n)], dtype=float)

def z_setting(n: int, fn: Callable[[np.ndarray], float], label: str = "z") -> LocalSetting:
    return LocalSetting((BASIS_Z,)*n, _weights(n, fn), (SIGMA_Z,)*n, label)

def pair_setting(n: int, i: int, j: int, pauli: str, scale: float) -> LocalSetting:
    """scale * P_i P_j x |0><0| on every other qubit."""
    obs, basis = PAULI_BASES[pauli]; others = [q for q in range(n) if q not in (i, j)]
    fn = lambda s: 0.0 if s[others].any() else scale*(-1)**(s[i] + s[j])
    bases = tuple(basis if q in (i, j) else BASIS_Z for q in range(n))
    return LocalSetting(bases, _weights(n, fn), tuple(obs if q in (i, j) else SIGMA_Z for q in range(n)), f"{pauli}{i}{pauli}{j}")

def product_observable_setting(obs: Sequence[np.ndarray], scale: float, label: str) -> LocalSetting:
    """scale * (x_k obs_k), diagonalized per qubit."""
    eig = [linalg.eigh(o) for o in obs]
    w = scale*_kron_vec([e[0] for e in eig])
    return LocalSetting(tuple(e[1].astype(complex) for e in eig), w, tuple(np.asarray(o, dtype=complex) for o in obs), label)

def _zsign(s: np.ndarray) -> np.ndarray: return 1 - 2*s

def _kron_vec(vs: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, [np.asarray(v, dtype=float) for v in vs])

def universal_w_decomposition(n: int) -> SettingDecomposition:
    """N^2-N+1 settings: all diagonal terms in sigma_z^N, plus xx and yy pairs on the single-excitation block."""
    if n < 2: raise SchemeError("universal decomposition needs N >= 2")
    diag = z_setting(n, lambda s: (n - 1)/n - (1/n if s.sum() == 1 else 0))
    pairs = [pair_setting(n, i, j, p, -1/(2*n)) for i, j in itertools.combinations(range(n), 2) for p in "xy"]
    return _decomposition([diag] + pairs, "universal")

def _w3_diag(s: np.ndarray) -> float:
    z = _zsign(s)
    return (17 + 7*z.prod() + 3*z.sum() + 5*(z[0]*z[1] + z[1]*z[2] + z[0]*z[2]))/24

def _w3_observables() -> list[tuple[str, np.ndarray]]:
    return [(f"(I+z{sg}{p})^3", IDENTITY + SIGMA_Z + (1 if sg == "+" else -1)*m)
            for p, m in (("x", SIGMA_X), ("y", SIGMA_Y)) for sg in "+-"]

def optimal_w3_decomposition() -> SettingDecomposition:
    settings = [z_setting(3, _w3_diag)]
    settings += [product_observable_setting([o]*3, -1/24, lbl) for lbl, o in _w3_observables()]
    return _decomposition(settings, "w3opt")

def improved_w4_decomposition() -> SettingDecomposition:
    """Embedded W3 settings on qubits 0-2 with |0><0| on qubit 3, plus three exchange pairs with qubit 3."""
    def diag(s: np.ndarray) -> float:
        v = 3/4
        if s[3] == 0: v += -1/2 + 3/4*_w3_diag(s[:3])
        if tuple(s) == (0, 0, 0, 1): v -= 1/4
        return v
    settings = [z_setting(4, diag)]
    for lbl, o in _w3_observables():
        vals, vecs = linalg.eigh(o)
        w = 3/4*(-1/24)*np.kron(_kron_vec([vals]*3), [1.0, 0.0])
        settings.append(LocalSetting((vecs.astype(complex),)*3 + (BASIS_Z,), w, (o, o, o, SIGMA_Z), lbl + "|0>"))
    settings += [pair_setting(4, i, 3, p, -1/8) for i in range(3) for p in "xy"]
    return _decomposition(settings, "w4improved")

def dicke24_decomposition() -> SettingDecomposition:
    """Two devices: U^dagger-rotated sigma_z^4 and sigma_x^4 settings."""
    ud = DICKE24_U.conj().T; rot = lambda m: ud@m@DICKE24_U
    zw = _weights(4, lambda s: 2.0 - (2.0 if len(set(s)) == 1 else 0.0))
    xw = _weights(4, lambda s: -float(_zsign(s).prod()))
    z = LocalSetting((ud@BASIS_Z,)*4, zw, (rot(SIGMA_Z),)*4, "U'zU^4")
    x = LocalSetting((ud@BASIS_X,)*4, xw, (rot(SIGMA_X),)*4, "U'xU^4")
    return _decomposition([z, x], "dicke24")

def conjugated_settings(dec: SettingDecomposition, chain: LocalOperatorChain) -> SettingDecomposition:
    """A^dagger M A for every setting, per qubit; non-unitary chains are flagged as not realizable."""
    if len(chain) != dec.n_qubits: raise DimensionError(f"chain of length {len(chain)} for {dec.n_qubits} qubits")
    unitary = chain.is_unitary
    if not unitary: log.warning("conjugating settings by a non-unitary chain: not experimentally realizable")
    a = [op.entries for op in chain]
    out = [LocalSetting(tuple(ak.conj().T@b for ak, b in zip(a, s.bases)), s.weights,
                        tuple(ak.conj().T@o@ak for ak, o in zip(a, s.observables)), s.label, s.realizable and unitary)
           for s in dec.settings]
    return SettingDecomposition(tuple(out), dec.declared_count, dec.scheme)

def reconstruct(dec: SettingDecomposition) -> np.ndarray:
    if not dec.settings: raise SchemeError("empty decomposition")
    return sum(s.operator() for s in dec.settings)

def residual(dec: SettingDecomposition, target: np.ndarray) -> float:
    return float(np.abs(reconstruct(dec) - target).max())

SCHEMES: dict[str, tuple[int | None, Callable[[int], SettingDecomposition]]] = {
    "universal": (None, universal_w_decomposition),
    "w3opt": (3, lambda n: optimal_w3_decomposition()),
    "w4improved": (4, lambda n: improved_w4_decomposition()),
}

def decompose_witness(wit: Witness, scheme: str = "universal") -> tuple[SettingDecomposition, float]:
    """Settings for a witness built by this toolkit, and the max elementwise reconstruction residual."""
    if scheme == "dicke24":
        if wit.provenance is not Provenance.dicke24: raise SchemeError("dicke24 scheme needs the Dicke witness")
        dec = dicke24_decomposition()
    else:
        if scheme not in SCHEMES: raise SchemeError(f"unknown scheme {scheme!r}")
        size, make = SCHEMES[scheme]
        if size is not None and wit.n_qubits != size: raise SchemeError(f"{scheme} requires N={size}, witness has N={wit.n_qubits}")
        if wit.base_chain is None: raise SchemeError(f"{wit.provenance.value} witness carries no W-witness chain")
        dec = make(wit.n_qubits)
        if not np.allclose(wit.base_chain.matrix(), np.eye(2**wit.n_qubits)): dec = conjugated_settings(dec, wit.base_chain)
    return dec, residual(dec, wit.matrix)
