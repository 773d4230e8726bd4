# Copyright 2024 Adam McArthur
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

from urbanvibe.classes.errors import NumericalError
from urbanvibe.regression.huber import collinear_columns, huber_fit, huber_weights


@pytest.fixture
def contaminated():
    """
    A noisy line, y = 1 + 2x, with three gross outliers.
    """
    rng = np.random.default_rng(0)
    x = np.linspace(0, 10, 50)
    y = 1 + 2 * x + rng.normal(0, 0.2, size=50)
    y[[3, 17, 30]] += 40
    return x, y


def test_exact_line():
    x = np.arange(10, dtype=float)
    fit = huber_fit(x, 3 - 0.5 * x)
    assert fit.intercept == pytest.approx(3)
    assert fit.slope == pytest.approx(-0.5)
    assert fit.r == pytest.approx(-1)
    assert fit.t == -np.inf
    assert fit.converged
    assert np.allclose(fit.residuals, 0, atol=1e-9)


def test_infinite_t_is_least_squares(contaminated):
    x, y = contaminated
    fit = huber_fit(x, y, t=np.inf)
    slope, intercept = np.polyfit(x, y, 1)
    assert fit.slope == pytest.approx(slope)
    assert fit.intercept == pytest.approx(intercept)
    assert np.all(fit.weights == 1)


def test_robust_to_outliers(contaminated):
    x, y = contaminated
    robust = huber_fit(x, y)
    ols = huber_fit(x, y, t=np.inf)

    assert robust.converged
    assert abs(robust.slope - 2) < 0.05
    assert abs(robust.intercept - 1) < abs(ols.intercept - 1)
    # the outliers are downweighted, the rest keep full weight
    assert robust.weights[[3, 17, 30]].max() < 0.1
    assert np.median(robust.weights) == 1.0
    assert robust.r > 0.9


def test_multiple_predictors():
    rng = np.random.default_rng(1)
    X = rng.uniform(0, 1, size=(40, 3))
    y = 2 + X @ np.array([1.0, -3.0, 0.5]) + rng.normal(0, 0.01, size=40)
    fit = huber_fit(X, y, ["a", "b", "c"])
    assert fit.names == ["intercept", "a", "b", "c"]
    assert np.allclose(fit.coefficients, [2, 1, -3, 0.5], atol=0.05)
    assert 0.99 < fit.r <= 1
    assert fit.predict(X[:2]) == pytest.approx(y[:2], abs=0.05)


def test_rank_deficient_names_column():
    x = np.arange(12, dtype=float)
    X = np.column_stack([x, 2 * x])
    with pytest.raises(NumericalError, match="rank deficient") as e:
        huber_fit(X, x)
    assert e.value.columns == ["x2"]


def test_constant_predictor_is_rank_deficient():
    X = np.ones(10)
    with pytest.raises(NumericalError, match="population"):
        huber_fit(X, np.arange(10), ["population"])


def test_too_few_rows():
    with pytest.raises(NumericalError, match="more observations"):
        huber_fit([1.0, 2.0], [1.0, 3.0])


def test_non_finite_values():
    with pytest.raises(NumericalError, match="non-finite"):
        huber_fit([1.0, 2.0, np.nan, 4.0], [1.0, 2.0, 3.0, 4.0])


def test_length_mismatch():
    with pytest.raises(ValueError, match="different lengths"):
        huber_fit([1.0, 2.0, 3.0], [1.0, 2.0])


def test_iteration_limit(contaminated):
    x, y = contaminated
    fit = huber_fit(x, y, max_iter=1)
    assert not fit.converged
    assert fit.iterations == 1


def test_huber_weights():
    z = np.array([-3.0, -1.0, 0.0, 0.5, 2.69])
    weights = huber_weights(z, 1.345)
    assert weights[1:4].tolist() == [1.0, 1.0, 1.0]
    assert weights[0] == pytest.approx(1.345 / 3)
    assert weights[4] == pytest.approx(0.5)
    assert huber_weights(z, np.inf).tolist() == [1.0] * 5


def test_collinear_columns():
    x = np.arange(5, dtype=float)
    design = np.column_stack([np.ones(5), x, x + 1, x**2])
    assert collinear_columns(design, ["intercept", "a", "b", "c"]) == ["b"]


@pytest.mark.parametrize("c", [-2.0, 0.5, 3.0, 250.0])
def test_scale_equivariance(contaminated, c):
    x, y = contaminated
    fit = huber_fit(x, y)
    scaled = huber_fit(x, c * y)

    assert scaled.coefficients == pytest.approx(c * fit.coefficients, rel=1e-6)
    assert scaled.residuals == pytest.approx(
        c * fit.residuals, rel=1e-6, abs=1e-5 * abs(c)
    )
    assert scaled.weights == pytest.approx(fit.weights, abs=1e-6)
    if c > 0:
        assert np.argmax(scaled.residuals) == np.argmax(fit.residuals)
        assert np.argmin(scaled.residuals) == np.argmin(fit.residuals)


@pytest.fixture
def clean_line():
    rng = np.random.default_rng(2)
    x = np.linspace(0, 10, 40)
    return x, 1 + 2 * x + rng.normal(0, 0.2, size=40)


def test_single_outlier_breakdown(clean_line):
    x, y = clean_line
    spoiled = y.copy()
    spoiled[-1] += 200

    ols, ols_spoiled = huber_fit(x, y, t=np.inf), huber_fit(x, spoiled, t=np.inf)
    robust, robust_spoiled = huber_fit(x, y), huber_fit(x, spoiled)

    assert abs(ols_spoiled.slope - ols.slope) / abs(ols.slope) > 0.5
    assert abs(robust_spoiled.slope - robust.slope) / abs(robust.slope) < 0.1


def test_five_percent_outliers(clean_line):
    x, y = clean_line
    spoiled = y.copy()
    spoiled[[-1, -3]] += 200

    ols = huber_fit(x, spoiled, t=np.inf)
    robust = huber_fit(x, spoiled)
    assert abs(ols.slope - 2) / 2 > 0.5
    assert abs(robust.slope - 2) / 2 < 0.1
    assert robust.converged
    assert robust.iterations <= 50
