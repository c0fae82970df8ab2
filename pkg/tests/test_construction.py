import math

import numpy as np
import pytest

from kernapprox.construction import (build_alpha_star, construct_uniform, interior_sign_changes, null_vector,
                                     rational_form_conj_poisson)
from kernapprox.exceptions import DimensionMismatch, DuplicateQ
from kernapprox.kernels import KernelSpec, eval_kernel
from kernapprox.oracle import l1_norm_residual


def bern(r):
    return lambda t: eval_kernel(KernelSpec.bernoulli([1.0], [r]), t, at_jump="mean")


def test_null_vector_1x2():
    vec, nullity = null_vector(np.array([[2.0, 3.0]]))
    assert nullity == 1
    assert vec @ np.array([2.0, 3.0]) == pytest.approx(0.0, abs=1e-15)
    assert vec[0] / vec[1] == pytest.approx(-1.5)


def test_m2_l1_proportional_to_leftover_residuals():
    combo = build_alpha_star([bern(1), bern(3)], 3, 1)
    c = combo.residual_matrix[0]
    assert combo.alpha_star[0] * c[0] + combo.alpha_star[1] * c[1] == pytest.approx(0.0, abs=1e-14)


def test_three_kernels_interpolated_at_all_nodes():
    kernels = [bern(1), bern(3), bern(5)]
    combo = build_alpha_star(kernels, 3, 2)
    nodes = combo.nodes
    values = sum(a * k(nodes) for a, k in zip(combo.alpha_star, kernels))
    assert nodes.size == 4
    assert np.max(np.abs(values - combo.poly(nodes))) < 1e-9


def test_polynomial_kernel_flagged_degenerate():
    combo = build_alpha_star([lambda t: np.sin(t), bern(3)], 3, 1)
    assert combo.degenerate
    np.testing.assert_allclose(combo.alpha_star, [1.0, 0.0], atol=1e-12)


def test_bernoulli_n2_sign_changes():
    res = construct_uniform("bernoulli", (1, 3), 2)
    locs = interior_sign_changes(res)
    np.testing.assert_allclose(locs, np.arange(1, 6) * math.pi / 3, atol=1e-8)
    assert res.alternation_ok and res.certificate.satisfied


def test_conj_poisson_sign_changes():
    res = construct_uniform("conj-poisson", (0.3, 0.6), 2)
    locs = res.certificate.locations
    np.testing.assert_allclose(locs, np.arange(6) * math.pi / 3, atol=1e-8)
    assert res.closed_form.value == pytest.approx(l1_norm_residual(res.residual) / math.pi, rel=1e-6)


def test_bernoulli_three_terms():
    res = construct_uniform("bernoulli", (1, 3, 5), 3)
    assert res.certificate.satisfied and res.certificate.p == 2
    assert res.closed_form.value == pytest.approx(l1_norm_residual(res.residual) / math.pi, rel=1e-6)


@pytest.mark.parametrize("args", [("bernoulli", (1,), 2), ("conj-poisson", (0.5,), 1)])
def test_m1_rejected(args):
    with pytest.raises(ValueError):
        construct_uniform(*args)


def test_m_mismatch():
    with pytest.raises(DimensionMismatch):
        construct_uniform("bernoulli", (1, 3), 2, m=3)


def test_rational_form_single_term():
    num, den = rational_form_conj_poisson([2.0], [0.4])
    np.testing.assert_allclose(num.b, [0.8], atol=1e-15)
    np.testing.assert_allclose(num.a, 0.0, atol=1e-15)
    assert den(0.0) == pytest.approx(0.36)


def test_rational_form_matches_series(rng):
    alpha, q = [1.0, -0.7], [0.3, 0.6]
    num, den = rational_form_conj_poisson(alpha, q)
    assert num.is_odd and num.effective_degree <= 2
    t = rng.uniform(0, 2 * math.pi, 100)
    series = eval_kernel(KernelSpec.poisson(alpha, q, 1.0), t)
    np.testing.assert_allclose(num(t) / den(t), series, atol=1e-10)


def test_rational_form_duplicate_q():
    with pytest.raises(DuplicateQ):
        rational_form_conj_poisson([1.0, 1.0], [0.3, 0.3])
