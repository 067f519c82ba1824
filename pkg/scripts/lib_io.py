"""JSON files for states, witnesses, decompositions and PSMQ coefficients.

Complex numbers are written as [re, im]; b_upper = +inf is written as "inf".
Output is deterministic: sorted keys, indent 2, trailing newline.
"""
from __future__ import annotations
import json,logging
from pathlib import Path
from typing import Any, List, Optional, Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator
from scripts.lib_errors import ResourceError, StateFileError
from scripts.lib_states import DEFAULT_N_CAP, LocalOperatorChain, PureState, make_named
from scripts.lib_symmetric import PsmqCoefficients
from scripts.lib_transform import chain_from_json, chain_to_json
from scripts.lib_witness import Provenance, Witness

log = logging.getLogger(__name__)
Cx = Tuple[float, float]

class StateFile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    n: Optional[int] = None; amplitudes: Optional[List[Cx]] = None
    family: Optional[str] = None; params: dict[str, Any] = {}

    @model_validator(mode="after")
    def _one_form(self):
        if (self.amplitudes is None) == (self.family is None): raise ValueError("give either amplitudes or family")
        if self.amplitudes is not None and self.n is None: raise ValueError("amplitude form needs n")
        return self

class WitnessFile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    n: int; matrix: List[List[Cx]]; provenance: Provenance; params: dict[str, Any] = {}
    base_chain: Optional[list] = None; smq_chain: Optional[list] = None

class PsmqFile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    n: int; dicke_coeffs: List[Cx]

def _cx(z: complex) -> list[float]: return [float(z.real), float(z.imag)]

def _from_cx(v) -> complex: return complex(*v) if isinstance(v, (list, tuple)) else complex(v)

def dumps(obj: Any) -> str: return json.dumps(obj, sort_keys=True, indent=2) + "\n"

def write_json(obj: Any, path: Path) -> Path:
    path = Path(path); path.parent.mkdir(parents=True, exist_ok=True); path.write_text(dumps(obj))
    log.debug("wrote %s", path); return path

def read_json(path: Path) -> Any:
    path = Path(path)
    try: return json.loads(path.read_text())
    except FileNotFoundError: raise StateFileError(path, "file not found") from None
    except json.JSONDecodeError as e: raise StateFileError(path, e.msg, e.lineno) from None

def _parse(model: type[BaseModel], path: Path) -> BaseModel:
    try: return model.model_validate(read_json(path))
    except ValidationError as e:
        first = e.errors()[0]
        raise StateFileError(path, f"{'.'.join(map(str, first['loc'])) or 'root'}: {first['msg']}") from None

def _cap(n: int, n_cap: int) -> None:
    if n > n_cap: raise ResourceError(f"N={n} exceeds n_cap={n_cap}")

# --- States ---
def state_to_json(state: PureState) -> dict:
    return {"n": state.n_qubits, "amplitudes": [_cx(z) for z in state.amplitudes]}

def load_state(path: Path, n_cap: int = DEFAULT_N_CAP) -> PureState:
    f = _parse(StateFile, path)
    if f.family is not None:
        params = dict(f.params)
        if "coeffs" in params: params["coeffs"] = [_from_cx(v) for v in params["coeffs"]]
        s = make_named(f.family, **params)
    else:
        if len(f.amplitudes) != 2**f.n: raise StateFileError(path, f"{len(f.amplitudes)} amplitudes for n={f.n}")
        s = PureState(f.n, np.array([complex(*z) for z in f.amplitudes]))
    _cap(s.n_qubits, n_cap)
    if s.norm == 0: raise StateFileError(path, "zero state vector")
    return s

def save_state(state: PureState, path: Path) -> Path: return write_json(state_to_json(state), path)

# --- Witnesses ---
def witness_to_json(wit: Witness) -> dict:
    out = {"n": wit.n_qubits, "matrix": [[_cx(z) for z in row] for row in wit.matrix],
           "provenance": wit.provenance.value, "params": wit.params}
    if wit.base_chain is not None: out["base_chain"] = chain_to_json(wit.base_chain)
    if wit.smq_chain is not None: out["smq_chain"] = chain_to_json(wit.smq_chain)
    return out

def _chain(data: list | None, n: int, path: Path) -> LocalOperatorChain | None:
    if data is None: return None
    c = chain_from_json(data)
    if len(c) != n: raise StateFileError(path, f"chain of length {len(c)} for n={n}")
    return c

def load_witness(path: Path, n_cap: int = DEFAULT_N_CAP) -> Witness:
    f = _parse(WitnessFile, path); _cap(f.n, n_cap)
    m = np.array([[complex(*z) for z in row] for row in f.matrix])
    return Witness(f.n, m, f.provenance, dict(f.params), _chain(f.base_chain, f.n, path), _chain(f.smq_chain, f.n, path))

def save_witness(wit: Witness, path: Path) -> Path: return write_json(witness_to_json(wit), path)

# --- PSMQ ---
def psmq_to_json(coeffs: PsmqCoefficients) -> dict:
    return {"n": coeffs.n_qubits, "dicke_coeffs": [_cx(z) for z in coeffs.coeffs]}

def load_psmq(path: Path) -> PsmqCoefficients:
    f = _parse(PsmqFile, path)
    if len(f.dicke_coeffs) != f.n + 1: raise StateFileError(path, f"{len(f.dicke_coeffs)} Dicke coefficients for n={f.n}")
    return PsmqCoefficients(f.n, np.array([complex(*z) for z in f.dicke_coeffs]))
