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

"""
Huber M-estimation by iteratively reweighted least squares.

Each iteration rescales the residuals by a robust scale (the normalised
median absolute deviation, re-estimated every time), turns them into
Huber weights and solves the weighted least squares problem again.
"""

from typing import List, Optional, Sequence

import numpy as np
from statsmodels.robust.norms import HuberT
from statsmodels.robust.scale import mad

from urbanvibe.classes.errors import NumericalError
from urbanvibe.logs import ulogger

# Floor on the robust scale, relative to the size of the response.
SCALE_FLOOR = 1e-12


class RegressionFit:
    """
    The outcome of a robust fit.

    :attr coefficients: Intercept first, then one slope per predictor.
    :attr weights: Final IRLS weights, in (0, 1].
    :attr residuals: y - X @ coefficients.
    :attr scale: Final robust scale of the residuals.
    :attr r: Weighted correlation. Signed for a single predictor.
    :attr t: t statistic of the first slope.
    :attr cov: Coefficient covariance, scale² (XᵀWX)⁻¹.
    """

    def __init__(
        self,
        names: List[str],
        coefficients: np.ndarray,
        weights: np.ndarray,
        residuals: np.ndarray,
        scale: float,
        r: float,
        t_values: np.ndarray,
        cov: np.ndarray,
        iterations: int,
        converged: bool,
    ):
        self.names = names
        self.coefficients = coefficients
        self.weights = weights
        self.residuals = residuals
        self.scale = scale
        self.r = r
        self.t_values = t_values
        self.cov = cov
        self.iterations = iterations
        self.converged = converged

    @property
    def n(self) -> int:
        return len(self.residuals)

    @property
    def intercept(self) -> float:
        return float(self.coefficients[0])

    @property
    def slope(self) -> float:
        return float(self.coefficients[1]) if len(self.coefficients) > 1 else 0.0

    @property
    def t(self) -> float:
        return float(self.t_values[1]) if len(self.t_values) > 1 else 0.0

    def predict(self, X: np.ndarray) -> np.ndarray:
        """
        :param X: Predictors, without the intercept column.
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.coefficients[0] + X @ self.coefficients[1:]

    def __repr__(self) -> str:
        return (
            f"RegressionFit(n={self.n}, "
            f"coef={np.round(self.coefficients, 6).tolist()}, "
            f"r={self.r:.3f}, converged={self.converged})"
        )


def collinear_columns(X: np.ndarray, names: Sequence[str]) -> List[str]:
    """
    Columns that are linear combinations of the columns before them.
    """
    norms = np.linalg.norm(X, axis=0)
    Xs = X / np.where(norms > 0, norms, 1.0)

    kept: List[int] = []
    collinear = []
    for j in range(X.shape[1]):
        candidate = kept + [j]
        if norms[j] > 0 and np.linalg.matrix_rank(Xs[:, candidate]) == len(candidate):
            kept = candidate
        else:
            collinear.append(names[j])
    return collinear


def huber_weights(z: np.ndarray, t: float) -> np.ndarray:
    if not np.isfinite(t):
        return np.ones_like(z, dtype=float)
    return np.asarray(HuberT(t=t).weights(z), dtype=float)


def _wls(X: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
    sw = np.sqrt(w)
    beta, *_ = np.linalg.lstsq(X * sw[:, None], y * sw, rcond=None)
    return beta


def _robust_scale(residuals: np.ndarray, floor: float) -> float:
    return max(float(mad(residuals)), floor)


def weighted_r(
    X: np.ndarray, y: np.ndarray, fitted: np.ndarray, w: np.ndarray
) -> float:
    """
    Weighted correlation of a fit.

    With one predictor this is the weighted Pearson correlation of x and y,
    i.e. sign(slope)·√(weighted R²). With more it is √(weighted R²).
    A constant response gives 0.
    """
    wsum = w.sum()
    ybar = np.dot(w, y) / wsum
    ss_tot = np.dot(w, (y - ybar) ** 2)
    if not ss_tot > 0:
        return 0.0

    if X.shape[1] == 2:
        x = X[:, 1]
        xbar = np.dot(w, x) / wsum
        ss_x = np.dot(w, (x - xbar) ** 2)
        if not ss_x > 0:
            return 0.0
        r = np.dot(w, (x - xbar) * (y - ybar)) / np.sqrt(ss_x * ss_tot)
        return float(np.clip(r, -1.0, 1.0))

    r2 = 1 - np.dot(w, (y - fitted) ** 2) / ss_tot
    return float(np.sqrt(np.clip(r2, 0.0, 1.0)))


def huber_fit(
    X: np.ndarray,
    y: np.ndarray,
    names: Optional[Sequence[str]] = None,
    t: float = 1.345,
    tol: float = 1e-8,
    max_iter: int = 50,
) -> RegressionFit:
    """
    Robust linear regression with the Huber loss.

    :param X: Predictors, one column each. An intercept is added.
    :param y: Response.
    :param names: Predictor names, used in errors.
    :param t: Huber tuning constant in units of the robust scale.
              np.inf gives ordinary least squares.
    :param tol: Convergence when the largest coefficient change is below this.
    :param max_iter: Iteration limit. Hitting it returns converged = False.

    :return: The fit.

    :raises NumericalError: If there are too few rows or X is rank deficient.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=float)

    n, k = X.shape
    names = list(names) if names is not None else [f"x{i}" for i in range(1, k + 1)]
    names = ["intercept", *names]
    design = np.column_stack([np.ones(n), X])
    p = design.shape[1]

    if len(y) != n:
        raise ValueError("X and y have different lengths")
    if not (np.all(np.isfinite(design)) and np.all(np.isfinite(y))):
        raise NumericalError("Missing or non-finite values in the regression data")
    if n <= p:
        raise NumericalError(f"Need more observations ({n}) than coefficients ({p})")

    collinear = collinear_columns(design, names)
    if collinear:
        raise NumericalError("Design matrix is rank deficient", collinear)

    floor = SCALE_FLOOR * max(1.0, float(np.abs(y).max()))

    weights = np.ones(n)
    beta = _wls(design, y, weights)
    converged = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        scale = _robust_scale(y - design @ beta, floor)
        weights = huber_weights((y - design @ beta) / scale, t)
        new_beta = _wls(design, y, weights)
        change = float(np.max(np.abs(new_beta - beta)))
        beta = new_beta
        if change < tol:
            converged = True
            break

    if not converged:
        ulogger.warning(
            f"Huber fit did not converge in {max_iter} iterations "
            f"(predictors: {', '.join(names[1:])})"
        )

    residuals = y - design @ beta
    scale = _robust_scale(residuals, floor)

    if scale > floor:
        xtwx = design.T @ (design * weights[:, None])
        cov = scale**2 * np.linalg.pinv(xtwx)
        t_values = beta / np.sqrt(np.clip(np.diag(cov), SCALE_FLOOR, None))
    else:
        # exact fit: no residual spread to estimate errors from
        cov = np.zeros((p, p))
        t_values = np.where(np.abs(beta) > tol, np.sign(beta) * np.inf, 0.0)

    return RegressionFit(
        names=names,
        coefficients=beta,
        weights=weights,
        residuals=residuals,
        scale=scale,
        r=weighted_r(design, y, design @ beta, weights),
        t_values=t_values,
        cov=cov,
        iterations=iterations,
        converged=converged,
    )
