from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone

from latticesimplex.counting import error_report
from latticesimplex.estimators import ApproximabilityProfiler, GrowthFitter, SimplexCountTransformer
from latticesimplex.validation import ConfigError, check_delta, check_positive_int, check_shift, check_thresholds


def test_transformer_matches_error_report():
    tr = SimplexCountTransformer("golden", kind="closed")
    X = np.array([[10.0], [25.5], [100.0]])
    out = tr.fit_transform(X)
    assert out.shape == (3, 6)
    rep = error_report(Fraction(51, 2), "golden", "closed")
    assert out[1, 0] == rep.exact_count
    assert out[1, 4] == pytest.approx(float(rep.rrr))


def test_transformer_params_and_errors():
    tr = SimplexCountTransformer("d3", precision_bits=160)
    assert clone(tr).get_params() == tr.get_params()
    with pytest.raises(ConfigError):
        SimplexCountTransformer("golden", kind="half").fit()
    with pytest.raises(ConfigError):
        SimplexCountTransformer("1,0").fit()
    with pytest.raises(ConfigError):
        SimplexCountTransformer().fit().transform([[-1.0]])


def test_profiler():
    prof = ApproximabilityProfiler(M=2000, kappa=0.0).fit("1,sqrt2,sqrt3")
    assert len(prof.kappa_hat_) == 3 and prof.c_kappa_ > 0 and not prof.degenerate_
    assert prof.transform().shape == (3, 3)
    assert ApproximabilityProfiler(M=200, fit_kappa=False).fit("1,2").degenerate_


@pytest.mark.parametrize("model,truth", [("power", {"alpha": 0.7}), ("polylog", {"gamma": 2.5}),
                                         ("power-log", {"alpha": 0.3, "beta": 1.5})])
def test_growth_fitter_recovers_exponents(model, truth):
    t = np.geomspace(10, 1e5, 40)
    lt = np.log(t)
    r = {"power": 3 * t ** 0.7, "polylog": 0.5 * lt ** 2.5, "power-log": t ** 0.3 * lt ** 1.5}[model]
    fit = GrowthFitter(model).fit(t, r)
    for k, v in truth.items():
        assert fit.result_[k] == pytest.approx(v, abs=1e-9)
    assert fit.predict(t) == pytest.approx(r, rel=1e-9)


def test_growth_fitter_guards():
    with pytest.raises(ConfigError):
        GrowthFitter("cubic").fit([1, 2], [1, 2])
    with pytest.raises(ConfigError):
        GrowthFitter(min_points=8).fit(np.arange(2, 6), np.ones(4))


def test_validation_helpers():
    assert check_thresholds(np.array([[1.5], [2.0]])) == [Fraction(3, 2), Fraction(2)]
    assert str(check_thresholds("1+sqrt2")[0]) == str(check_thresholds(["1+sqrt2"])[0])
    with pytest.raises(ConfigError):
        check_thresholds([float("nan")])
    with pytest.raises(ConfigError):
        check_positive_int("n", 2.5)
    with pytest.raises(ConfigError):
        check_delta(0.5)
    assert check_shift([Fraction(1, 2), Fraction(3, 2)], 2).in_U
    with pytest.raises(ConfigError):
        check_shift([Fraction(1, 2)], 2)
