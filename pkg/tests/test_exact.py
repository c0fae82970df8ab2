import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kernapprox.exact import (estimate_n0, exact_value_bernoulli_combo, exact_value_conj_poisson_combo,
                              exact_value_integer_beta, exact_value_poisson, favard_constant, n0_rhs,
                              phase_equation, solve_theta_n)
from kernapprox.exceptions import DuplicateQ, NonIntegerBeta
from kernapprox.kernels import KernelSpec


class TestTheta:
    @pytest.mark.parametrize("beta,expected", [(0.0, 0.5), (2.0, 0.5), (1.0, 0.0), (3.0, 0.0)])
    def test_integer_beta(self, beta, expected):
        assert solve_theta_n(KernelSpec.poisson([1.0, -0.5], [0.6, 0.3], beta), 5) == expected

    def test_leading_term_dominates(self):
        theta = solve_theta_n(KernelSpec.poisson([1.0], [0.1], 0.5), 3)
        assert theta == pytest.approx(0.75, abs=1e-6)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.05, 0.8), st.floats(0.05, 1.95), st.integers(1, 6))
    def test_root_satisfies_phase_equation(self, q, beta, n):
        spec = KernelSpec.poisson([1.0], [q], beta)
        theta = solve_theta_n(spec, n)
        assert 0.0 <= theta < 1.0
        assert abs(phase_equation(spec, n, theta)) < 1e-10


class TestExactValues:
    def test_even_beta_reduces_to_arctan(self):
        res = exact_value_poisson(KernelSpec.poisson([1.0], [0.5]), 4)
        # 4/pi arctan(1/16)
        assert res.value == pytest.approx(0.07947409722216335, rel=1e-12)
        assert res.theta_n == 0.5

    def test_odd_beta_reduces_to_log(self):
        res = exact_value_poisson(KernelSpec.poisson([1.0], [0.5], 1.0), 1)
        assert res.value == pytest.approx(2 / math.pi * math.log(3), rel=1e-12)

    @pytest.mark.parametrize("beta,expected", [(0.0, 4 / math.pi * math.atan(0.5)),
                                               (1.0, 2 / math.pi * math.log(3))])
    def test_integer_beta_closed_forms(self, beta, expected):
        res = exact_value_integer_beta(KernelSpec.poisson([1.0], [0.5], beta), 1)
        assert res.value == pytest.approx(expected, rel=1e-14)

    def test_integer_forms_agree_with_series(self):
        spec = KernelSpec.poisson([1.0, -0.5], [0.6, 0.3], 1.0)
        for n in (2, 5, 8):
            assert exact_value_poisson(spec, n, False).value == pytest.approx(
                exact_value_integer_beta(spec, n).value, rel=1e-12)

    def test_non_integer_beta_rejected(self):
        with pytest.raises(NonIntegerBeta):
            exact_value_integer_beta(KernelSpec.poisson([1.0], [0.5], 0.5), 2)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.1, 4.0) | st.floats(-4.0, -0.1), st.floats(0.0, 1.9))
    def test_homogeneous(self, c, beta):
        spec = KernelSpec.poisson([1.0, 0.4], [0.5, 0.2], beta)
        base = exact_value_poisson(spec, 3, False).value
        assert exact_value_poisson(spec.scaled(c), 3, False).value == pytest.approx(abs(c) * base, rel=1e-10)


class TestFavard:
    def test_known_values(self):
        assert favard_constant(1) == pytest.approx(math.pi / 2, abs=1e-12)
        assert favard_constant(3) == pytest.approx(math.pi ** 3 / 24, abs=1e-12)
        assert favard_constant(5) == pytest.approx(math.pi ** 5 / 240, abs=1e-12)

    def test_large_r_bracket(self):
        r = 21
        assert 4 / math.pi < favard_constant(r) < 4 / math.pi * (1 + 2 * 3.0 ** (-r - 1))

    @pytest.mark.parametrize("r", [0, 2, -1])
    def test_rejects_even(self, r):
        with pytest.raises(ValueError):
            favard_constant(r)


class TestCombos:
    def test_bernoulli_single_survivor(self):
        res = exact_value_bernoulli_combo([1.0, 0.0], [3, 5], 2, 2)
        assert res.value == pytest.approx(math.pi ** 3 / 24 / 3 ** 3, rel=1e-12)

    def test_conj_poisson_single_survivor(self):
        res = exact_value_conj_poisson_combo([1.0, 0.0], [0.5, 0.2], 1, 2)
        assert res.value == pytest.approx(2 / math.pi * math.log(5 / 3), rel=1e-12)

    def test_duplicate_q(self):
        with pytest.raises(DuplicateQ):
            exact_value_conj_poisson_combo([1.0, 1.0], [0.5, 0.5], 1, 2)


class TestN0:
    @pytest.mark.parametrize("q,expected", [(0.5, 4), (0.05, 2), (0.3, 3), (0.7, 9)])
    def test_single_term(self, q, expected):
        assert estimate_n0(KernelSpec.poisson([1.0], [q])) == expected

    def test_rhs_at_q_half(self):
        assert n0_rhs(0.5, 4) <= 0.25 < n0_rhs(0.5, 3)

    def test_beta_independent(self):
        a = estimate_n0(KernelSpec.poisson([1.0, -0.5], [0.6, 0.3], 0.0))
        b = estimate_n0(KernelSpec.poisson([1.0, -0.5], [0.6, 0.3], 0.5))
        assert a == b

    def test_rhs_undefined_region_is_infinite(self):
        assert n0_rhs(0.9, 1) == math.inf
        assert np.isfinite(n0_rhs(0.9, 4))
