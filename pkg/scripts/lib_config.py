"""Run configuration: defaults < config file < environment < CLI flags."""
from __future__ import annotations
import os,json,hashlib,logging
from pathlib import Path
from typing import Any
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scripts.lib_errors import ParameterError

log = logging.getLogger(__name__)
ROOT = Path(__file__).parent.parent
DEFAULT_CONFIG = ROOT/"config"/"run_config.json"
HARD_N_CAP = 16
ENV_KEYS = {"WITNESS_N_CAP": "n_cap", "WITNESS_SEED": "seed"}

class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    seed: int = 0
    eps_zero: float = 1e-9
    tol_rank: float = 1e-8
    tol_reconstruct: float = 1e-10
    restarts: int = Field(50, gt=0)
    sweeps: int = Field(200, gt=0)
    max_tries: int = Field(64, gt=0)
    n_cap: int = Field(12, ge=2)

    @field_validator("eps_zero", "tol_rank", "tol_reconstruct")
    @classmethod
    def _positive(cls, v: float) -> float:
        if not v > 0: raise ValueError("tolerances must be positive")
        return v

    @field_validator("n_cap")
    @classmethod
    def _cap(cls, v: int) -> int:
        if v > HARD_N_CAP: raise ValueError(f"n_cap must be <= {HARD_N_CAP}")
        return v

    def sub_seed(self, label: str) -> int: return derive_seed(self.seed, label)

def derive_seed(seed: int, label: str) -> int:
    """Labeled sub-seed: first 8 bytes of sha256('seed:label')."""
    return int.from_bytes(hashlib.sha256(f"{seed}:{label}".encode()).digest()[:8], "big")

def load_env(path: Path = ROOT/".env") -> None:
    """KEY=VALUE lines; values already present in the environment win."""
    if not path.exists(): return
    for l in path.read_text().splitlines():
        if '=' in l and not l.strip().startswith('#'):
            k,v = l.strip().split('=',1); os.environ.setdefault(k, v.strip('"'))

def load_config(path: Path | None = None, **flags: Any) -> RunConfig:
    """Merge sources; flags whose value is None are treated as not given."""
    vals: dict[str, Any] = {}
    p = Path(path) if path else (DEFAULT_CONFIG if DEFAULT_CONFIG.exists() else None)
    if p is not None:
        vals.update(json.loads(p.read_text()))
        log.debug("config file %s: %s", p, vals)
    for env, key in ENV_KEYS.items():
        if (v := os.getenv(env)) in (None, ""): continue
        try: vals[key] = int(v)
        except ValueError: raise ParameterError(f"{env} must be an integer, got {v!r}") from None
    vals.update({k: v for k, v in flags.items() if v is not None})
    return RunConfig(**vals)
