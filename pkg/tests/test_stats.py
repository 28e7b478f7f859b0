import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from levyrest.sampling import TailLaw, derive_stream, sample_waiting_time
from levyrest.stats import (
    DegenerateSampleError,
    default_hill_k,
    hill_estimator,
    inverse_mean_reference,
    ks_two_sample,
    msd,
)


def test_hill_five_point_hand_values():
    # log-spacings above the threshold are 4, 3, 2, 1 (k=4) and 2, 1 (k=2)
    x = np.exp(np.arange(5.0))
    assert hill_estimator(x, 4).index_hat == pytest.approx(4 / 10, rel=1e-14)
    assert hill_estimator(x, 2).index_hat == pytest.approx(2 / 3, rel=1e-14)


def test_hill_on_pareto():
    draws = sample_waiting_time(TailLaw(0.5), derive_stream(1, 0), 1_000_000)
    est = hill_estimator(draws, 2000)
    assert 0.45 <= est.index_hat <= 0.55
    assert est.k == 2000 and est.samples_used == 1_000_000


def test_hill_errors():
    with pytest.raises(DegenerateSampleError):
        hill_estimator(np.full(50, 3.0), 10)
    with pytest.raises(ValueError):
        hill_estimator([1.0, 2.0, 3.0], 3)
    with pytest.raises(ValueError):
        hill_estimator([1.0, -2.0, 3.0], 1)


def test_default_k():
    assert default_hill_k(10_000) == 200
    assert hill_estimator(np.exp(np.arange(100.0))).k == 20


# scipy's p-value can divide by zero on tiny samples; only the statistic is compared
@pytest.mark.filterwarnings("ignore::RuntimeWarning")
@settings(max_examples=50)
@given(
    st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=60),
    st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=60),
)
def test_ks_matches_scipy(a, b):
    ours = ks_two_sample(a, b).statistic
    ref = sps.ks_2samp(a, b, method="asymp").statistic
    assert ours == pytest.approx(ref, abs=1e-12)


def test_ks_examples():
    a = derive_stream(2, 0).generator.random(10_000)
    b = 0.5 + derive_stream(2, 1).generator.random(10_000)
    assert 0.47 <= ks_two_sample(a, b).statistic <= 0.53
    assert ks_two_sample(a, a).statistic == 0.0
    assert ks_two_sample([0.0], [1.0]).statistic == 1.0
    res = ks_two_sample([1.0, 2.0], [3.0])
    assert (res.m, res.n) == (2, 1)
    with pytest.raises(ValueError):
        ks_two_sample([], [1.0])


def test_msd():
    assert msd(np.zeros((5, 3))) == 0.0
    assert msd([[1.0], [-1.0]]) == 1.0
    assert msd([3.0, 4.0]) == 12.5
    assert msd([[3.0, 4.0]]) == 25.0


def test_inverse_mean_reference():
    assert inverse_mean_reference(0.5, 1.0) == pytest.approx(1.128379, abs=5e-7)
    assert inverse_mean_reference(0.3, 0.0) == 0.0
    for a in (0.2, 0.5, 0.9):
        t = 2.0 ** (1.0 / a)
        assert inverse_mean_reference(a, t) == pytest.approx(2.0 / math.gamma(1.0 + a), rel=1e-13)
    with pytest.raises(ValueError):
        inverse_mean_reference(1.0, 1.0)
