#!/usr/bin/env python3
"""[Selftest] Step 6: digit-sequence uniqueness behind the powers-of-5 tails, and their angle arithmetic."""
import numpy as np
from scripts.lib_checks import run_checks
from scripts.lib_transform import ANGLE_MODULUS, exponent_injectivity_selftest, power5_angle, power5_reference

def angles_ok(seed: int = 6, draws: int = 20) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(draws):
        p = int(rng.integers(1, ANGLE_MODULUS))
        if any(abs(power5_angle(k, p) - power5_reference(k, p)) > 1e-9 for k in range(2*8 - 1)): return False
    return True

def main():
    run_checks("Exponent Injectivity Checks", {
        "base 5, 3 terms, digits 1..4": lambda: exponent_injectivity_selftest(5, 3, max_digit=4),
        "base 2, digits 1 (binary)": lambda: exponent_injectivity_selftest(2, 4, max_digit=1),
        "base 3, 4 terms, digits 1..2": lambda: exponent_injectivity_selftest(3, 4, max_digit=2),
        "powers-of-5 angles match exact reference, N <= 8": angles_ok,
    })

if __name__ == "__main__": main()
