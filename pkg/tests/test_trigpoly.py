import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kernapprox.exceptions import SingularSystem
from kernapprox.kernels import KernelSpec, eval_kernel
from kernapprox.trigpoly import TrigPoly, design_matrix, eval_poly, interpolate_at_2nm1, interpolate_odd

coef = st.floats(-5, 5, allow_nan=False)


def test_eval_conventions():
    assert eval_poly(TrigPoly.sine([1.0]), math.pi / 2) == pytest.approx(1.0)
    assert eval_poly(TrigPoly.zero(3), 1.234) == 0.0
    assert eval_poly(TrigPoly([2.0], []), 0.7) == 1.0


def test_odd_interpolation_two_nodes():
    p = interpolate_odd([math.pi / 3, 2 * math.pi / 3], [1.0, 1.0])
    assert p.b[0] == pytest.approx(2 / math.sqrt(3), abs=1e-12)
    assert p.b[1] == pytest.approx(0.0, abs=1e-12)
    assert p.is_odd


def test_odd_interpolation_reproduces_sine():
    nodes = np.array([0.4, 1.1, 2.0, 2.9])
    p = interpolate_odd(nodes, np.sin(nodes))
    np.testing.assert_allclose(p.b, [1.0, 0.0, 0.0, 0.0], atol=1e-12)


def test_odd_interpolation_zero_values():
    p = interpolate_odd([0.5, 1.5], [0.0, 0.0])
    assert not np.any(p.b)


def test_single_node_is_constant():
    p = interpolate_at_2nm1([1.3], [0.75])
    assert p.degree == 0 and p(0.0) == pytest.approx(0.75)


def test_theorem_nodes_reproduce_kernel():
    n = 4
    spec = KernelSpec.poisson([1.0], [0.5])
    nodes = (0.5 * math.pi + np.arange(2 * n - 1) * math.pi) / n
    values = eval_kernel(spec, nodes)
    p = interpolate_at_2nm1(nodes, values)
    assert np.max(np.abs(p(nodes) - values)) < 1e-10


def test_repeated_nodes_are_singular():
    with pytest.raises(SingularSystem):
        interpolate_at_2nm1([0.1, 0.1, 0.2], [1.0, 2.0, 3.0])


@settings(max_examples=50, deadline=None)
@given(arrays(float, 7, elements=coef))
def test_interpolation_recovers_coefficients(vec):
    p = TrigPoly.from_vector(vec, 3)
    nodes = 0.3 + np.arange(7) * 2 * math.pi / 7
    q = interpolate_at_2nm1(nodes, p(nodes))
    np.testing.assert_allclose(q.to_vector(), vec, atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(arrays(float, 5, elements=coef), arrays(float, 3, elements=coef), st.floats(0, 2 * math.pi))
def test_product_matches_pointwise(u, v, t):
    p = TrigPoly.from_vector(u, 2)
    q = TrigPoly.from_vector(v, 1)
    assert (p * q)(t) == pytest.approx(p(t) * q(t), abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(arrays(float, 5, elements=coef), arrays(float, 5, elements=coef))
def test_addition_is_linear(u, v):
    p, q = TrigPoly.from_vector(u, 2), TrigPoly.from_vector(v, 2)
    t = np.linspace(0, 6, 9)
    np.testing.assert_allclose((p + q)(t), p(t) + q(t), atol=1e-12)
    np.testing.assert_allclose((p - q)(t), p(t) - q(t), atol=1e-12)


def test_design_matrix_columns():
    t = np.array([0.0, 1.0])
    mat = design_matrix(t, 2)
    np.testing.assert_allclose(mat[:, 0], 0.5)
    np.testing.assert_allclose(mat[:, 3], np.cos(2 * t))
    np.testing.assert_allclose(mat[:, 4], np.sin(2 * t))


def test_effective_degree():
    p = TrigPoly([0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    assert p.degree == 3 and p.effective_degree == 1
