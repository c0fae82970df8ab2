import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.linear_model import LinearRegression

from kernapprox.estimators import BestMeanApproximator, TrigFeatures, TrigPolyL1Regressor
from kernapprox.exceptions import SpecError
from kernapprox.kernels import KernelSpec
from kernapprox.validation import check_angles, check_positive_int, check_spec

T = np.linspace(0, 2 * math.pi, 128, endpoint=False)


class TestRegressor:
    def test_exact_polynomial(self):
        y = 0.2 + 0.5 * np.cos(T) + np.sin(3 * T)
        model = TrigPolyL1Regressor(degree=3).fit(T.reshape(-1, 1), y)
        np.testing.assert_allclose(model.predict(T), y, atol=1e-10)
        assert model.l1_error_ < 1e-10

    def test_robust_to_outliers(self, rng):
        y = np.cos(T)
        y_noisy = y.copy()
        y_noisy[rng.choice(T.size, 5, replace=False)] += 50.0
        model = TrigPolyL1Regressor(degree=1).fit(T, y_noisy)
        np.testing.assert_allclose(model.predict(T), y, atol=1e-8)

    def test_clone_and_params(self):
        model = TrigPolyL1Regressor(degree=2, max_iter=500)
        assert clone(model).get_params() == {"degree": 2, "max_iter": 500}
        model.set_params(degree=4)
        assert model.degree == 4

    def test_unfitted(self):
        with pytest.raises(NotFittedError):
            TrigPolyL1Regressor().predict(T)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            TrigPolyL1Regressor(degree=3).fit(T[:4], T[:4])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            TrigPolyL1Regressor().fit(T, T[:-1])


class TestFeatures:
    def test_pipeline(self):
        y = 1.0 + 2.0 * np.sin(2 * T)
        pipe = make_pipeline(TrigFeatures(degree=2), LinearRegression()).fit(T.reshape(-1, 1), y)
        np.testing.assert_allclose(pipe.predict(T.reshape(-1, 1)), y, atol=1e-10)

    def test_odd_columns(self):
        out = TrigFeatures(degree=3, odd=True).fit_transform(T)
        assert out.shape == (T.size, 3)
        np.testing.assert_allclose(out[:, 2], np.sin(3 * T))


class TestBestMean:
    spec = KernelSpec.poisson([1.0], [0.5])

    def test_closed_form(self):
        est = BestMeanApproximator(self.spec, n=4).fit()
        assert est.value_ == pytest.approx(4 / math.pi * math.atan(0.0625), rel=1e-12)
        assert est.theta_ == 0.5 and est.n0_ == 4
        assert est.l1_error() / math.pi == pytest.approx(est.value_, rel=1e-9)

    @pytest.mark.parametrize("method", ["lp", "scan"])
    def test_oracle_methods(self, method):
        est = BestMeanApproximator(self.spec, n=4, method=method).fit()
        assert est.value_ == pytest.approx(4 / math.pi * math.atan(0.0625), rel=1e-3)
        assert est.predict(T).shape == T.shape

    def test_accepts_document(self):
        est = BestMeanApproximator([{"type": "poisson", "q": 0.5}], n=4).fit()
        assert est.spec_ == self.spec

    def test_bad_method(self):
        with pytest.raises(ValueError):
            BestMeanApproximator(self.spec, n=2, method="magic").fit()


class TestValidation:
    def test_angles_shapes(self):
        assert check_angles([[0.0], [1.0]]).shape == (2,)
        with pytest.raises(ValueError):
            check_angles(np.zeros((3, 2)))
        with pytest.raises(ValueError):
            check_angles([0.0, np.nan])

    def test_positive_int(self):
        assert check_positive_int(3, "n") == 3
        with pytest.raises(TypeError):
            check_positive_int(2.5, "n")
        with pytest.raises(TypeError):
            check_positive_int(True, "n")
        with pytest.raises(ValueError):
            check_positive_int(0, "n")

    def test_spec(self):
        with pytest.raises(SpecError):
            check_spec("poisson")
