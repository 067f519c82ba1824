#!/usr/bin/env python3
"""[Selftest] Step 1: W-state witness anchors, tolerance oracle and validity oracles."""
import numpy as np
from scripts.lib_checks import run_checks
from scripts.lib_states import DensityOperator, PureState, max_schmidt_coefficient_sq, random_chain, random_state, w
from scripts.lib_witness import (Provenance, Witness, conjugate_witness, min_over_biseparable, min_over_product_states,
                                 noisy, push_state, w_n_witness, w_witness_tolerance, white_noise_tolerance)

def pairing_ok(seed: int, trials: int = 20) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        n = int(rng.integers(2, 5)); wit = w_n_witness(n); rho = random_state(n, rng).density(); c = random_chain(n, rng)
        if abs(conjugate_witness(wit, c).expectation(push_state(rho, c)) - wit.expectation(rho)) > 1e-10: return False
    return True

def sign_flip_ok(n: int) -> bool:
    wit, s = w_n_witness(n), w(n); p = white_noise_tolerance(wit, s).p_max
    return wit.expectation(noisy(s, p - 1e-9)) < 0 < wit.expectation(noisy(s, p + 1e-9))

def main():
    w3 = w(3).amplitudes; loose = Witness(3, np.eye(8)/3 - np.outer(w3, w3.conj()), Provenance.w_c, {"c": 1/3})
    run_checks("W Witness Checks", {
        "max Schmidt coefficient of W3 is 2/3": lambda: abs(max_schmidt_coefficient_sq(w(3)) - 2/3) <= 1e-12,
        "<W3|W|W3> = -1/3": lambda: abs(w_n_witness(3).expectation(w(3)) + 1/3) <= 1e-12,
        "<000|W|000> = 2/3": lambda: abs(w_n_witness(3).expectation(PureState(3, np.eye(8)[0])) - 2/3) <= 1e-12,
        "Tr W_{W_4} = 11": lambda: abs(w_n_witness(4).trace - 11) <= 1e-12,
        "p_max = 1/(N(1-2^-N)), N=2..8": lambda: all(abs(white_noise_tolerance(w_n_witness(n), w(n)).p_max - w_witness_tolerance(n)) <= 1e-10 for n in range(2, 9)),
        "sign of Tr[W rho(p)] flips at p_max": lambda: all(sign_flip_ok(n) for n in (3, 4, 5)),
        "product minimum of W_{W_N} >= -1e-7, N=3,4": lambda: all(min_over_product_states(w_n_witness(n), restarts=10).value >= -1e-7 for n in (3, 4)),
        "biseparable minimum of W_{W_3} >= -1e-7": lambda: min_over_biseparable(w_n_witness(3), restarts=10).value >= -1e-7,
        "(1/3)I - |W3><W3| fails on biseparable states": lambda: min_over_biseparable(loose, restarts=10).value < -1e-3,
        "maximally mixed state is not detected": lambda: w_n_witness(3).expectation(DensityOperator.maximally_mixed(3)) > 0,
        "conjugation pairing Tr(W'rho') = Tr(W rho)": lambda: pairing_ok(0),
    })

if __name__ == "__main__": main()
