import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kernapprox.exceptions import Inconclusive, JumpPoint, MixedPhase, SpecError
from kernapprox.kernels import (BernoulliTerm, KernelSpec, PoissonTerm, bernoulli_series, delta_k,
                                epsilon_n, eval_kernel, psi, term_coefficients)

from conftest import poisson_partial_sum, sine_partial_sum


class TestPsi:
    def test_two_poisson_terms(self):
        spec = KernelSpec.poisson([1.0, -1.0], [0.5, 0.25])
        assert psi(spec, 2) == pytest.approx(0.1875, abs=1e-15)

    def test_bernoulli_term(self):
        spec = KernelSpec.bernoulli([2.0], [3])
        assert psi(spec, 2) == pytest.approx(0.25, abs=1e-15)

    def test_single_q(self):
        assert psi(KernelSpec.poisson([1.0], [0.9]), 1) == pytest.approx(0.9)

    def test_mixed_phase_rejected(self):
        spec = KernelSpec((PoissonTerm(0.5, 0.0), BernoulliTerm(1)))
        with pytest.raises(MixedPhase):
            psi(spec, 1)
        # per-term coefficients are still available
        assert term_coefficients(spec, 1).shape[0] == 2


class TestEvalKernel:
    def test_conjugate_poisson_at_half_pi(self):
        spec = KernelSpec.poisson([1.0], [0.5], 1.0)
        assert eval_kernel(spec, math.pi / 2) == pytest.approx(0.4, abs=1e-14)

    def test_d1_at_half_pi(self):
        spec = KernelSpec.bernoulli([1.0], [1])
        assert eval_kernel(spec, math.pi / 2) == pytest.approx(math.pi / 4, abs=1e-14)

    def test_poisson_at_zero(self):
        assert eval_kernel(KernelSpec.poisson([1.0], [0.5]), 0.0) == pytest.approx(1.0, abs=1e-14)

    def test_jump_point(self):
        spec = KernelSpec.bernoulli([1.0], [1])
        with pytest.raises(JumpPoint):
            eval_kernel(spec, 0.0)
        assert eval_kernel(spec, 2 * math.pi, at_jump="mean") == 0.0

    @pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, 1.5, 2.0])
    def test_poisson_matches_partial_sums(self, beta):
        t = np.linspace(0.1, 6.2, 17)
        spec = KernelSpec.poisson([1.0], [0.7], beta)
        np.testing.assert_allclose(eval_kernel(spec, t), poisson_partial_sum(0.7, beta, t), atol=1e-13)

    @pytest.mark.parametrize("r", [3, 5])
    def test_bernoulli_matches_partial_sums(self, r):
        t = np.array([0.3, 1.0, 2.5, 4.0])
        sign = (-1) ** ((r - 1) // 2)
        got = eval_kernel(KernelSpec.bernoulli([1.0], [r]), t)
        np.testing.assert_allclose(got, sign * sine_partial_sum(r, t), atol=1e-10)

    def test_bernoulli_methods_agree(self):
        t = np.linspace(0.05, 6.2, 41)
        spec = KernelSpec.bernoulli([1.0], [3])
        a = eval_kernel(spec, t, bernoulli_method="series")
        b = eval_kernel(spec, t, bernoulli_method="polynomial")
        np.testing.assert_allclose(a, b, atol=1e-10)

    @pytest.mark.parametrize("r", [5, 7, 11])
    def test_bernoulli_polynomial_form_high_order(self, r):
        t = np.linspace(0.05, 6.2, 25)
        spec = KernelSpec.bernoulli([1.0], [r])
        a = eval_kernel(spec, t, bernoulli_method="series", tol=1e-15)
        np.testing.assert_allclose(eval_kernel(spec, t), a, atol=1e-14)

    def test_bernoulli_series_r3(self):
        t = np.array([1.0])
        np.testing.assert_allclose(bernoulli_series(3, t), sine_partial_sum(3, t), atol=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.01, 0.95), st.floats(0.1, 3) | st.floats(-3, -0.1), st.floats(0.0, 2 * math.pi))
    def test_homogeneous_in_alpha(self, q, c, t):
        spec = KernelSpec.poisson([1.0], [q], 0.5)
        assert eval_kernel(spec.scaled(c), t) == pytest.approx(c * eval_kernel(spec, t), abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.01, 0.95), st.floats(0.01, 3.1))
    def test_conjugate_kernel_is_odd(self, q, t):
        spec = KernelSpec.poisson([1.0], [q], 1.0)
        assert eval_kernel(spec, -t) == pytest.approx(-eval_kernel(spec, t), abs=1e-12)


class TestDeltaEpsilon:
    def test_delta_1(self):
        spec = KernelSpec.poisson([1.0, 1.0], [0.5, 0.25])
        assert delta_k(spec, 1) == pytest.approx(0.3125 / 0.75 - 0.5, abs=1e-15)

    def test_single_term_zero(self):
        spec = KernelSpec.poisson([2.0], [0.4])
        assert delta_k(spec, 7) == 0.0
        assert epsilon_n(spec, 3) == 0.0

    def test_delta_decays(self):
        assert abs(delta_k(KernelSpec.poisson([1.0, -1.0], [0.5, 0.25]), 64)) < 1e-6

    def test_epsilon_bounds(self):
        spec = KernelSpec.poisson([1.0, 1.0], [0.5, 0.25])
        assert epsilon_n(spec, 1) >= abs(delta_k(spec, 1))
        assert epsilon_n(spec, 20) < 1e-5

    def test_epsilon_is_sup_over_tail(self):
        spec = KernelSpec.poisson([1.0, -0.5], [0.6, 0.3])
        brute = max(abs(delta_k(spec, k)) for k in range(3, 400))
        assert epsilon_n(spec, 3) == pytest.approx(brute, rel=1e-12)


class TestSpecDocument:
    def test_round_trip(self):
        spec = KernelSpec((PoissonTerm(0.5, 0.5, 2.0), PoissonTerm(0.25, 0.5, -1.0)))
        assert KernelSpec.from_dicts(spec.to_dicts()) == spec

    @pytest.mark.parametrize("doc", [{"type": "poisson"}, [{"q": 0.5}], [{"type": "bernoulli", "r": 2}],
                                     [{"type": "poisson", "q": 1.5}], [{"type": "wave", "q": 0.5}]])
    def test_malformed(self, doc):
        with pytest.raises(SpecError):
            KernelSpec.from_dicts(doc)

    def test_canonical_merges_equal_q(self):
        spec = KernelSpec.poisson([1.0, 2.0, 0.0], [0.3, 0.3, 0.6]).canonical()
        assert [(t.q, t.alpha) for t in spec.terms] == [(0.3, 3.0)]
