"""State -> SMQ chain -> unitary chain -> W_SMQ -> witness for the original state."""
from __future__ import annotations
import logging,math
from dataclasses import dataclass
import numpy as np
from scipy import optimize
from scripts.lib_errors import InconclusiveError, NotDetectedError, SeparableStateError
from scripts.lib_smq import SmqCoefficients, SmqInequalityReport, build_w_smq, classify_smq, solve_b_upper
from scripts.lib_states import LocalOperatorChain, PureState, apply_chain
from scripts.lib_transform import EPS_ZERO, MAX_TRIES, Verdict, find_ilo_to_smq, known_chain, unitarize
from scripts.lib_witness import ToleranceReport, Witness, conjugate_witness, white_noise_tolerance

log = logging.getLogger(__name__)
B_SCAN_POINTS = 64
B_XATOL = 1e-10

@dataclass(frozen=True)
class PipelineResult:
    witness: Witness
    coefficients: SmqCoefficients
    report: SmqInequalityReport
    b: float
    unitary_chain: LocalOperatorChain
    strategy: str
    expectation: float

    def summary(self) -> dict:
        return {"b": self.b, "b_upper": self.report.b_upper if self.report.bounded else "inf",
                "strategy": self.strategy, "expectation": self.expectation, "smq": self.report.to_json()}

def smq_chain_for(state: PureState, seed: int = 0, max_tries: int = MAX_TRIES, eps: float = EPS_ZERO) -> tuple[str, LocalOperatorChain]:
    """(strategy, ILO chain) taking the state to SMQ form; explicit chains win for recognized inputs."""
    if (kc := known_chain(state)) is not None: return f"known:{kc[0]}", kc[1]
    out = find_ilo_to_smq(state, seed=seed, max_tries=max_tries, eps=eps)
    if out.verdict is Verdict.separable: raise SeparableStateError(out.separating_qubits, *out.factors)
    return out.strategy, out.chain

def smq_form(state: PureState, chain: LocalOperatorChain, eps: float = EPS_ZERO) -> SmqCoefficients:
    if not (coeffs := classify_smq(apply_chain(state, chain), eps)):
        raise InconclusiveError(f"chain output is not SMQ: {coeffs.reason}")
    return coeffs

def run_pipeline(state: PureState, seed: int = 0, b: float | None = None, max_tries: int = MAX_TRIES,
                 eps: float = EPS_ZERO) -> PipelineResult:
    s = state.normalized()
    strategy, chain = smq_chain_for(s, seed, max_tries, eps)
    u = unitarize(chain).unitary_chain; coeffs = smq_form(s, u, eps)
    rep = solve_b_upper(coeffs); b = rep.default_b(s.n_qubits) if b is None else b
    wit = conjugate_witness(build_w_smq(coeffs, b, rep), u.dagger).with_meta(params={"strategy": strategy})
    t = wit.expectation(s)
    log.info("pipeline %s: b=%.6g b_upper=%s <W>=%.3e", strategy, b, rep.b_upper, t)
    if t >= 0: raise NotDetectedError("pipeline witness does not detect its input", t)
    return PipelineResult(wit, coeffs, rep, b, u, strategy, t)

def build_witness_for_state(state: PureState, seed: int = 0, b: float | None = None) -> Witness:
    return run_pipeline(state, seed, b).witness

def optimize_b_tolerance(coeffs: SmqCoefficients, target: PureState, chain: LocalOperatorChain) -> tuple[float, ToleranceReport]:
    """Maximize white-noise tolerance of chain^dagger W_SMQ(b) chain over b in (0, b_upper)."""
    rep = solve_b_upper(coeffs); n = coeffs.n_qubits; dag = chain.dagger
    ref = rep.b_upper if rep.bounded else 1/math.sqrt(n*n - n)
    lo, hi = math.log(ref*1e-4), math.log(rep.b_upper*(1 - 1e-9) if rep.bounded else ref*1e2)

    def p_of(x: float) -> float:
        try: return white_noise_tolerance(conjugate_witness(build_w_smq(coeffs, math.exp(x), rep), dag), target).p_max
        except NotDetectedError: return -1.0

    grid = np.linspace(lo, hi, B_SCAN_POINTS); vals = [p_of(x) for x in grid]; i = int(np.argmax(vals))
    if vals[i] <= 0: raise NotDetectedError("no b in (0, b_upper) detects the target", 0.0)
    a, c = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = optimize.minimize_scalar(lambda x: -p_of(x), bounds=(a, c), method="bounded", options={"xatol": B_XATOL})
    x = float(res.x) if -res.fun >= vals[i] else float(grid[i]); b = math.exp(x)
    rpt = white_noise_tolerance(conjugate_witness(build_w_smq(coeffs, b, rep), dag), target)
    log.info("optimized b*=%.8g p_max=%.8g", b, rpt.p_max)
    return b, rpt
