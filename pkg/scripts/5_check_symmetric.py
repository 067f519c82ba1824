#!/usr/bin/env python3
"""[Selftest] Step 5: pure symmetric dichotomy and the mixed symmetric examples."""
import math
import numpy as np
from scripts.lib_checks import run_checks
from scripts.lib_states import all_bipartitions, is_genuinely_entangled, is_ppt, w
from scripts.lib_symmetric import (PsmqCoefficients, PsmqVerdict, binomial_coeffs, is_permutation_symmetric,
                                   msmq_examples, psmq_classify, psmq_state)

def dichotomy_ok(seed: int = 5, count: int = 100) -> bool:
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(2, 6))
        if i % 2: c = binomial_coeffs(*(rng.normal(size=2) + 1j*rng.normal(size=2)), n)
        else: c = rng.normal(size=n + 1) + 1j*rng.normal(size=n + 1)
        coeffs = PsmqCoefficients(n, c); ent = psmq_classify(coeffs).verdict is PsmqVerdict.fully_entangled
        if ent != is_genuinely_entangled(psmq_state(coeffs).normalized()): return False
    return True

def ppt_everywhere(rho) -> bool: return all(is_ppt(rho, c) for c in all_bipartitions(3))

def main():
    r1, r2, r3 = msmq_examples()
    d24 = PsmqCoefficients.of([0, 0, 1, 0, 0])
    run_checks("Symmetric State Checks", {
        "c_1 = 1 gives W3": lambda: np.allclose(psmq_state(PsmqCoefficients.of([0, 1, 0, 0])).amplitudes, w(3).amplitudes),
        "binomial pattern gives |+>^N": lambda: np.allclose(psmq_state(PsmqCoefficients(4, binomial_coeffs(1/math.sqrt(2), 1/math.sqrt(2), 4))).amplitudes, np.full(16, 0.25)),
        "Dicke(2,4) is fully entangled": lambda: psmq_classify(d24).verdict is PsmqVerdict.fully_entangled,
        "(0,1,0,1)/sqrt2 is fully entangled": lambda: psmq_classify(PsmqCoefficients.of([0, 1, 0, 1])).verdict is PsmqVerdict.fully_entangled,
        "dichotomy agrees with the bipartition-rank oracle": dichotomy_ok,
        "psmq states are permutation symmetric": lambda: is_permutation_symmetric(psmq_state(PsmqCoefficients.of([0.3, 1j, -0.2, 0.5]).normalized())),
        "rho1 is NPT on every bipartition": lambda: not any(is_ppt(r1, c) for c in all_bipartitions(3)),
        "rho2 is PPT everywhere": lambda: ppt_everywhere(r2),
        "rho3 is symmetric and PPT everywhere": lambda: is_permutation_symmetric(r3) and ppt_everywhere(r3),
        "examples are unit-trace and positive": lambda: all(abs(r.trace - 1) <= 1e-12 and r.eigenvalues.min() >= -1e-12 for r in (r1, r2, r3)),
    })

if __name__ == "__main__": main()
