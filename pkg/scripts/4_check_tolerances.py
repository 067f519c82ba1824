#!/usr/bin/env python3
"""[Selftest] Step 4: white-noise tolerances of the Dicke, W', GHZ and two-qubit witnesses."""
import math
from scripts.lib_checks import run_checks
from scripts.lib_pipeline import optimize_b_tolerance, run_pipeline
from scripts.lib_states import dicke, ghz, two_qubit_theta, w
from scripts.lib_witness import (dicke24_witness, two_qubit_projector_tolerance, two_qubit_tolerance_bound,
                                 w_prime_tolerance, w_prime_witness, white_noise_tolerance)

THETAS = [math.pi/16, math.pi/8, 3*math.pi/16, math.pi/4]

def w_prime_p(n: int) -> float:
    return white_noise_tolerance(w_prime_witness(n, 1/math.sqrt(n*n - n)), w(n)).p_max

def optimized_p(state) -> float:
    res = run_pipeline(state); return optimize_b_tolerance(res.coefficients, state, res.unitary_chain)[1].p_max

def two_qubit_ok() -> bool:
    for t in THETAS:
        p = optimized_p(two_qubit_theta(t))
        if abs(p - two_qubit_tolerance_bound(t)) > 1e-3 or not p > two_qubit_projector_tolerance(t): return False
    return True

def main():
    run_checks("Noise Tolerance Checks", {
        "Dicke witness on |2,4>: p_max = 2/9": lambda: abs(white_noise_tolerance(dicke24_witness(), dicke(2, 4)).p_max - 2/9) <= 1e-9,
        "W' closed form, N=3..8": lambda: all(abs(w_prime_p(n) - w_prime_tolerance(n)) <= 1e-9 for n in range(3, 9)),
        "W' tolerance at N=4 is 36/91": lambda: abs(w_prime_p(4) - 36/91) <= 1e-9,
        "W' tolerance increases from N=4": lambda: all(w_prime_p(n) < w_prime_p(n + 1) for n in range(4, 8)),
        "GHZ3 optimized tolerance ~ 0.3336": lambda: abs(optimized_p(ghz(3)) - 0.3336) <= 5e-3,
        "two-qubit optimized tolerance at pi/4 = 2/3": lambda: abs(optimized_p(two_qubit_theta(math.pi/4)) - 2/3) <= 1e-6,
        "two-qubit grid matches closed form, beats projector witness": two_qubit_ok,
    })

if __name__ == "__main__": main()
