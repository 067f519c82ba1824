#!/usr/bin/env python3
"""[Selftest] Step 2: measurement-setting decompositions reconstruct their witnesses."""
import numpy as np
from scripts.lib_checks import run_checks
from scripts.lib_decompose import (conjugated_settings, decompose_witness, dicke24_decomposition, improved_w4_decomposition,
                                   optimal_w3_decomposition, residual, universal_w_decomposition)
from scripts.lib_pipeline import run_pipeline
from scripts.lib_smq import build_w_smq, classify_smq, smq_diag_chain
from scripts.lib_states import PureState, psi4, w
from scripts.lib_witness import dicke24_witness, w_n_witness

TOL = 1e-10

def universal_ok() -> bool:
    return all(len(d.settings) == n*n - n + 1 and residual(d, w_n_witness(n).matrix) <= TOL
               for n in range(2, 7) for d in [universal_w_decomposition(n)])

def smq_conjugation_ok() -> bool:
    a = np.zeros(8, dtype=complex); a[[1, 2, 4, 7]] = [0.3, 0.5, 0.6, 0.2]
    c = classify_smq(PureState(3, a)); d = conjugated_settings(universal_w_decomposition(3), smq_diag_chain(c, 0.1))
    return residual(d, build_w_smq(c, 0.1).matrix) <= TOL

def psi4_ok() -> bool:
    dec, res = decompose_witness(run_pipeline(psi4()).witness, "universal")
    return dec.declared_count == 13 and res <= TOL

def main():
    run_checks("Decomposition Checks", {
        "universal: N^2-N+1 settings reconstruct W_{W_N}, N=2..6": universal_ok,
        "optimal W3: 5 settings, residual <= 1e-10": lambda: (d := optimal_w3_decomposition()).declared_count == 5 and residual(d, w_n_witness(3).matrix) <= TOL,
        "optimal W3: identity weight 17/24 in the z-setting": lambda: abs(optimal_w3_decomposition().settings[0].weights.mean() - 17/24) <= 1e-12,
        "improved W4: 11 settings, residual <= 1e-10": lambda: (d := improved_w4_decomposition()).declared_count == 11 and residual(d, w_n_witness(4).matrix) <= TOL,
        "Dicke witness: 2 settings": lambda: (d := dicke24_decomposition()).declared_count == 2 and residual(d, dicke24_witness().matrix) <= TOL,
        "W3 witness file path: universal 7, w3opt 5": lambda: [decompose_witness(w_n_witness(3), s)[0].declared_count for s in ("universal", "w3opt")] == [7, 5],
        "diagonal conjugation reconstructs W_SMQ": smq_conjugation_ok,
        "psi4 pipeline witness: 13 settings": psi4_ok,
        "W_N witness expectation via settings": lambda: abs(np.vdot(w(4).amplitudes, sum(s.operator() for s in universal_w_decomposition(4).settings)@w(4).amplitudes).real + 1/4) <= 1e-12,
    })

if __name__ == "__main__": main()
