#!/usr/bin/env python3
"""[Selftest] Step 3: SMQ-inequality solver, simplified bound and W_SMQ detection."""
import numpy as np
from scripts.lib_checks import run_checks
from scripts.lib_errors import ParameterError
from scripts.lib_smq import (build_w_smq, classify_smq, random_smq_state, simplified_b_bound, smq_lhs, smq_target,
                             solve_b_upper)
from scripts.lib_states import PureState, w

def odd_weight() -> PureState:
    a = np.zeros(8, dtype=complex); a[[1, 2, 4, 7]] = 0.5; return PureState(3, a)

def perturbed_w4(delta: float = 1e-3) -> PureState:
    a = w(4).amplitudes.copy(); a[0b1100] = delta; return PureState(4, a).normalized()

def rejects_b_above_upper() -> bool:
    try: build_w_smq(classify_smq(odd_weight()), 0.6)
    except ParameterError as e: return e.b_upper is not None and abs(e.b_upper - (3/32)**0.25) <= 1e-10
    return False

def random_bounds_ok(seed: int = 3, count: int = 50) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        c = classify_smq(random_smq_state(int(rng.integers(3, 7)), rng)); rep = solve_b_upper(c)
        if simplified_b_bound(c) > rep.b_upper or abs(smq_lhs(c, rep.b_upper) - smq_target(c.n_qubits)) > 1e-10: return False
        if not build_w_smq(c, rep.b_upper/2).expectation(c.state()) < 0: return False
    return True

def main():
    c = classify_smq(odd_weight())
    run_checks("SMQ Inequality Checks", {
        "W_N is already SMQ with a_1k = 1/sqrt(N)": lambda: np.allclose(classify_smq(w(5)).weight1, 1/np.sqrt(5)),
        "pseudo-W left-hand side vanishes": lambda: smq_lhs(classify_smq(w(4)), 3.0) == 0,
        "lhs at b=1 is 16": lambda: abs(smq_lhs(c, 1.0) - 16) <= 1e-9,
        "b_upper = (3/32)^(1/4)": lambda: abs(solve_b_upper(c).b_upper - (3/32)**0.25) <= 1e-10,
        "simplified bound = sqrt(3/32)": lambda: abs(simplified_b_bound(c) - np.sqrt(3/32)) <= 1e-12,
        "pseudo-W b_upper is unbounded": lambda: not solve_b_upper(classify_smq(w(3))).bounded,
        "perturbed W4 has finite b_upper > 10": lambda: 10 < solve_b_upper(classify_smq(perturbed_w4())).b_upper < np.inf,
        "b = 0.3 detects the odd-weight state": lambda: build_w_smq(c, 0.3).expectation(odd_weight()) < 0,
        "b = 0.6 is refused with b_upper": rejects_b_above_upper,
        "random SMQ states: bound <= b_upper, root exact, detection": random_bounds_ok,
    })

if __name__ == "__main__": main()
