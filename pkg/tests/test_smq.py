import math
import numpy as np
import pytest
from scripts.lib_errors import ParameterError
from scripts.lib_smq import (BoundMethod, SmqRejection, build_w_smq, classify_smq, lhs_polynomial, random_smq_state,
                             simplified_b_bound, smq_diag_chain, smq_lhs, smq_target, solve_b_upper)
from scripts.lib_states import PureState, ghz, pseudo_w, w
from scripts.lib_witness import Provenance, conjugate_witness, min_over_product_states, w_n_witness
from tests.helpers import odd_weight_state

B_ODD = (3/32)**0.25


class TestClassify:
    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_w_is_smq(self, n):
        c = classify_smq(w(n))
        assert c and c.is_pseudo_w
        np.testing.assert_allclose(c.weight1, 1/math.sqrt(n))

    def test_ghz_rejected(self):
        r = classify_smq(ghz(3))
        assert isinstance(r, SmqRejection) and not r
        assert r.zero_term == pytest.approx(1/math.sqrt(2)) and r.vanishing == (0, 1, 2)

    def test_odd_weight_accepted(self):
        c = classify_smq(odd_weight_state())
        assert c.by_pattern[0b111] == pytest.approx(0.5) and not c.is_pseudo_w

    def test_unnormalized_input_normalized(self):
        c = classify_smq(PureState(3, 2*w(3).amplitudes))
        np.testing.assert_allclose(c.weight1, 1/math.sqrt(3))

    def test_json_keys_are_bit_strings(self):
        assert set(classify_smq(odd_weight_state()).to_json()) == {"001", "010", "100", "111"}


class TestInequality:
    def test_pseudo_w_lhs_zero(self):
        assert smq_lhs(classify_smq(pseudo_w([1, 2, 3])), 5.0) == 0

    def test_odd_weight_lhs(self):
        assert smq_lhs(classify_smq(odd_weight_state()), 1.0) == pytest.approx(16)

    def test_lhs_vanishes_at_zero(self):
        assert smq_lhs(classify_smq(odd_weight_state()), 1e-8) < 1e-20

    @pytest.mark.parametrize("b", [0.0, -1.0])
    def test_nonpositive_b(self, b):
        with pytest.raises(ParameterError): smq_lhs(classify_smq(odd_weight_state()), b)

    def test_polynomial_powers_even_and_coefficients_nonnegative(self, rng):
        for _ in range(20):
            poly = lhs_polynomial(classify_smq(random_smq_state(4, rng)))
            assert all(p % 2 == 0 and p >= 2 and c >= 0 for p, c in poly)

    def test_lhs_strictly_increasing(self, rng):
        c = classify_smq(random_smq_state(4, rng)); vals = [smq_lhs(c, b) for b in np.linspace(0.01, 3, 60)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_b_upper_pseudo_w(self):
        rep = solve_b_upper(classify_smq(w(4)))
        assert not rep.bounded and rep.method is BoundMethod.pseudo_w_unbounded
        assert rep.to_json()["b_upper"] == "inf"

    def test_b_upper_closed_form(self):
        rep = solve_b_upper(classify_smq(odd_weight_state()))
        assert rep.b_upper == pytest.approx(B_ODD, abs=1e-10) and rep.method is BoundMethod.exact_bisection

    def test_b_upper_perturbed_w4(self):
        a = w(4).amplitudes.copy(); a[0b1100] = 1e-3
        rep = solve_b_upper(classify_smq(PureState(4, a)))
        assert rep.bounded and rep.b_upper > 10

    def test_root_satisfies_equality(self, rng):
        for n in (3, 4, 5, 6):
            c = classify_smq(random_smq_state(n, rng)); rep = solve_b_upper(c)
            assert smq_lhs(c, rep.b_upper) == pytest.approx(smq_target(n), abs=1e-10)

    def test_root_equality_holds_on_steep_polynomials(self):
        rng = np.random.default_rng(7)
        for i in range(300):
            n = 3 + i % 4; c = classify_smq(random_smq_state(n, rng))
            assert abs(smq_lhs(c, solve_b_upper(c).b_upper) - smq_target(n)) <= 1e-10

    def test_simplified_bound(self):
        assert simplified_b_bound(classify_smq(odd_weight_state())) == pytest.approx(math.sqrt(3/32))
        assert simplified_b_bound(classify_smq(w(5))) == 1.0

    def test_simplified_bound_below_exact(self, rng):
        for _ in range(200):
            c = classify_smq(random_smq_state(int(rng.integers(3, 7)), rng))
            assert simplified_b_bound(c) <= solve_b_upper(c).b_upper + 1e-12

    def test_simplified_report(self):
        c = classify_smq(odd_weight_state()); rep = solve_b_upper(c, BoundMethod.simplified_bound)
        assert rep.method is BoundMethod.simplified_bound and rep.b_upper == pytest.approx(math.sqrt(3/32))
        assert rep.to_json()["method"] == "simplified_bound"
        with pytest.raises(ParameterError): build_w_smq(c, 0.4, rep)
        assert build_w_smq(c, 0.2, rep).expectation(odd_weight_state()) < 0

    def test_simplified_report_pseudo_w_unbounded(self):
        assert solve_b_upper(classify_smq(w(3)), BoundMethod.simplified_bound).method is BoundMethod.pseudo_w_unbounded

    def test_default_b(self):
        assert solve_b_upper(classify_smq(odd_weight_state())).default_b(3) == pytest.approx(B_ODD/2)
        assert solve_b_upper(classify_smq(w(4))).default_b(4) == pytest.approx(1/math.sqrt(12))


class TestBuild:
    def test_w_state_reduces_to_w_witness(self):
        n = 4; wit = build_w_smq(classify_smq(w(n)), 1/math.sqrt(n))
        np.testing.assert_allclose(wit.matrix, w_n_witness(n).matrix, atol=1e-12)
        assert wit.provenance is Provenance.smq

    def test_matches_conjugated_w_witness(self):
        c = classify_smq(odd_weight_state()); d = smq_diag_chain(c, 0.3)
        np.testing.assert_allclose(build_w_smq(c, 0.3).matrix, conjugate_witness(w_n_witness(3), d.dagger).matrix, atol=1e-12)

    def test_detects_odd_weight(self):
        assert build_w_smq(classify_smq(odd_weight_state()), 0.3).expectation(odd_weight_state()) < 0

    def test_b_above_upper_refused(self):
        with pytest.raises(ParameterError) as e: build_w_smq(classify_smq(odd_weight_state()), 0.6)
        assert e.value.b_upper == pytest.approx(B_ODD, abs=1e-10)

    def test_pseudo_w_any_b(self):
        c = classify_smq(w(3))
        assert all(build_w_smq(c, b).expectation(w(3)) < 0 for b in (0.01, 0.5, 7.0))

    def test_expectation_vanishes_towards_b_upper(self, rng):
        c = classify_smq(random_smq_state(4, rng)); s = c.state(); bu = solve_b_upper(c).b_upper
        near, half = build_w_smq(c, 0.999*bu).expectation(s), build_w_smq(c, bu/2).expectation(s)
        assert near < 0 and abs(near) < abs(half)

    @pytest.mark.slow
    def test_random_detection_and_validity(self, rng):
        for i in range(200):
            n = int(rng.integers(3, 7)); c = classify_smq(random_smq_state(n, rng)); s = c.state()
            wit = build_w_smq(c, solve_b_upper(c).b_upper/2)
            assert wit.expectation(s) < 0
            if i % 25 == 0: assert min_over_product_states(wit, restarts=10, seed=i).value >= -1e-7

    def test_random_validity_small(self, rng):
        c = classify_smq(random_smq_state(3, rng)); wit = build_w_smq(c, solve_b_upper(c).b_upper/2)
        assert min_over_product_states(wit, restarts=20).value >= -1e-7
