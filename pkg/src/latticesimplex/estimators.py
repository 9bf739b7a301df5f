"""scikit-learn style wrappers.

Only some of the library has a fit/transform shape: counting maps a column
of thresholds to report columns, the approximability scan is "fitted" to a
weight vector, and growth fits are ordinary regressions of error sizes on
``t``.  Everything else stays a plain function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bernoulli import BernoulliEngine
from .counting import CountReport, error_report
from .diophantine import incline_profile
from .validation import ConfigError, check_positive_int, check_thresholds, check_weights

__all__ = ["SimplexCountTransformer", "ApproximabilityProfiler", "FitResult", "GrowthFitter"]


class SimplexCountTransformer(TransformerMixin, BaseEstimator):
    """Thresholds in, one row per threshold out.

    Output columns are ``exact, leading, err_left, err_right, rrr, tau``.
    """

    columns = ("exact", "leading", "err_left", "err_right", "rrr", "tau")

    def __init__(self, weights="sqrt2", kind: str = "open", precision_bits: int = 128):
        self.weights = weights
        self.kind = kind
        self.precision_bits = precision_bits

    def fit(self, X=None, y=None):
        if self.kind not in ("open", "closed"):
            raise ConfigError(f"kind must be 'open' or 'closed', got {self.kind!r}")
        check_positive_int("precision_bits", self.precision_bits, 64)
        self.weights_ = check_weights(self.weights, self.precision_bits)
        self.engine_ = BernoulliEngine(max(64, self.weights_.d), self.precision_bits)
        self.n_features_in_ = 1
        return self

    def reports(self, X) -> List[CountReport]:
        check_is_fitted(self, "weights_")
        return [error_report(t, self.weights_, self.kind, self.engine_) for t in check_thresholds(X)]

    def transform(self, X) -> np.ndarray:
        rows = [[float(r.exact_count), float(r.leading), float(r.error_left),
                 float(r.error_right), float(r.rrr), float(r.tau)] for r in self.reports(X)]
        return np.array(rows, dtype=float).reshape(-1, len(self.columns))


class ApproximabilityProfiler(BaseEstimator):
    """Scan ``m^{1+kappa} prod <theta_{j,l} m>`` over every incline row of ``w``."""

    def __init__(self, M: int = 10 ** 5, kappa: float = 0.0, fit_kappa: bool = True):
        self.M = M
        self.kappa = kappa
        self.fit_kappa = fit_kappa

    def fit(self, w, y=None):
        M = check_positive_int("M", self.M)
        if self.kappa < 0:
            raise ConfigError("kappa must be >= 0")
        self.weights_ = check_weights(w)
        self.profile_ = incline_profile(self.weights_, M, self.kappa, fit=self.fit_kappa)
        self.c_kappa_ = self.profile_.c_kappa
        self.degenerate_ = self.profile_.degenerate
        self.kappa_hat_ = [r.kappa_hat for r in self.profile_.rows]
        return self

    def transform(self, X=None) -> np.ndarray:
        """Per-row ``(min value, argmin, kappa_hat)``."""
        check_is_fitted(self, "profile_")
        return np.array([[m.value, m.argmin, np.nan if k is None else k]
                         for m, k in zip(self.profile_.minima, self.kappa_hat_)])


@dataclass(frozen=True)
class FitResult:
    model: str
    params: Tuple[str, ...]
    estimates: Tuple[float, ...]
    stderr: Tuple[float, ...]
    residual_norm: float
    n_points: int
    t_min: float
    t_max: float

    def __getitem__(self, name: str) -> float:
        return self.estimates[self.params.index(name)]

    def as_dict(self) -> dict:
        out = {"model": self.model, "residual_norm": self.residual_norm, "n_points": self.n_points,
               "t_min": self.t_min, "t_max": self.t_max}
        for p, e, s in zip(self.params, self.estimates, self.stderr):
            out[p] = e
            out[p + "_stderr"] = s
        return out


_MODELS = {
    # log r = sum coef * feature
    "power": (("alpha", "log_c"), lambda lt: [lt, np.ones_like(lt)]),
    "power-log": (("alpha", "beta", "log_c"), lambda lt: [lt, np.log(lt), np.ones_like(lt)]),
    "polylog": (("gamma", "log_c"), lambda lt: [np.log(lt), np.ones_like(lt)]),
}


class GrowthFitter(RegressorMixin, BaseEstimator):
    """Least-squares fit of ``log r`` against ``log t``.

    ``"power"``: ``r = c t^alpha``; ``"power-log"``: ``r = c t^alpha (log t)^beta``;
    ``"polylog"``: ``r = c (log t)^gamma``.  At least ``min_points`` positive
    samples are required.
    """

    def __init__(self, model: str = "power", min_points: int = 8):
        self.model = model
        self.min_points = min_points

    def _design(self, t: np.ndarray) -> np.ndarray:
        _, feats = _MODELS[self.model]
        return np.column_stack(feats(np.log(t)))

    def fit(self, t, r):
        if self.model not in _MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {sorted(_MODELS)}")
        t = np.asarray(t, dtype=float).ravel()
        r = np.asarray(r, dtype=float).ravel()
        if t.shape != r.shape:
            raise ConfigError("t and r must have the same length")
        keep = (r > 0) & (t > 1)
        t, r = t[keep], r[keep]
        if t.size < self.min_points:
            raise ConfigError(f"need >= {self.min_points} positive samples, got {t.size}")
        A = self._design(t)
        y = np.log(r)
        coef, _, rank, _ = np.linalg.lstsq(A, y, rcond=None)
        resid = y - A @ coef
        dof = max(1, t.size - A.shape[1])
        sigma2 = float(resid @ resid) / dof
        cov = sigma2 * np.linalg.pinv(A.T @ A)
        names, _ = _MODELS[self.model]
        self.coef_ = coef
        self.result_ = FitResult(self.model, names, tuple(float(c) for c in coef),
                                 tuple(float(math.sqrt(max(v, 0.0))) for v in np.diag(cov)),
                                 float(np.linalg.norm(resid)), int(t.size), float(t.min()), float(t.max()))
        return self

    def predict(self, t) -> np.ndarray:
        check_is_fitted(self, "coef_")
        t = np.asarray(t, dtype=float).ravel()
        return np.exp(self._design(t) @ self.coef_)
