import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpc, mpf

from qscaled import PrecisionContext, ThetaPoint, theta, theta_product, theta_series, theta_transformed
from qscaled.theta import theta_nome_logform

CTX = PrecisionContext(bits=192, rel_tol=1e-45)
vs = st.decimals(min_value="-1", max_value="1", places=4).map(str)
taus = st.decimals(min_value="0.3", max_value="4", places=3).map(str)
index = st.integers(1, 4)


def oracle(j, v, t):
    return mpmath.jtheta(j, mp.pi * mpf(v), mpmath.exp(-mp.pi * mpf(t)))


def agree(a, b, t, j):
    peak = 2 * mpmath.exp(-mp.pi * mpf(t) / 4) if j < 3 else 1
    return abs(a - b) <= mpf(10) ** -40 * max(abs(b), peak)


def test_point_validation():
    with pytest.raises(ValueError):
        ThetaPoint(5, 0, 1)
    with pytest.raises(ValueError):
        ThetaPoint(3, 0, 0)


def test_known_values():
    assert abs(theta(3, 0, 1, CTX) - mpf("1.086434811213308")) < 1e-15
    assert abs(theta(4, 0, 1, CTX) - mpf("0.913579138156117")) < 1e-15
    assert theta_transformed(ThetaPoint(1, 0, 1), CTX).is_zero


@settings(max_examples=40, deadline=None)
@given(index, vs, taus)
def test_series_against_mpmath(j, v, t):
    with mp.workprec(192):
        assert agree(theta_series(ThetaPoint(j, v, t), CTX), oracle(j, v, t), t, j)


@settings(max_examples=40, deadline=None)
@given(index, vs, taus)
def test_product_equals_series(j, v, t):
    p = ThetaPoint(j, v, t)
    with mp.workprec(192):
        assert agree(theta_product(p, CTX), theta_series(p, CTX), t, j)


@settings(max_examples=40, deadline=None)
@given(index, vs, st.decimals(min_value="0.1", max_value="3", places=3).map(str))
def test_transform_equals_series(j, v, t):
    p = ThetaPoint(j, v, t)
    hi = CTX.with_bits(320)
    s = theta_series(p, hi)
    with mp.workprec(192):
        assert agree(theta_transformed(p, CTX).to_hp(), s, t, j)


@settings(max_examples=20, deadline=None)
@given(vs, taus)
def test_periodicity_and_parity(v, t):
    with mp.workprec(192):
        a = theta_series(ThetaPoint(3, v, t), CTX)
        b = theta_series(ThetaPoint(3, str(mpf(v) + 1), t), CTX)
        c = theta_series(ThetaPoint(3, str(-mpf(v)), t), CTX)
        assert abs(a - b) < mpf(10) ** -40 and abs(a - c) < mpf(10) ** -40


def test_complex_argument():
    with mp.workprec(192):
        v = mpc("0.1", "0.3")
        got = theta_series(ThetaPoint(3, v, "1.5"), CTX)
        assert abs(got - mpmath.jtheta(3, mp.pi * v, mpmath.exp(-mp.pi * mpf("1.5")))) < mpf(10) ** -40


def test_small_tau_log_form():
    # at tau = 1e-3 the value is ~ t^{-1/2}; the transform keeps it accurate
    lf = theta_nome_logform(3, 1, "0.001", CTX)
    with mp.workprec(192):
        assert abs(lf.log_mag + mpmath.log(mpf("0.001")) / 2) < mpf(10) ** -40
