import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpc, mpf

from qscaled import (
    HypergeometricSpec,
    PrecisionContext,
    QParam,
    SeriesParams,
    basic_hypergeometric,
    g_eval,
    h_eval,
    ismail_masson,
    jackson_qbessel2,
    lemma4_reduction,
    lemma5_reduction,
    q_laguerre,
    ramanujan_aq,
    stieltjes_wigert,
)
from qscaled.series import g_term, g_terms

CTX = PrecisionContext(bits=192, rel_tol=1e-45)
TOL = mpf(10) ** -40
nomes = st.sampled_from(["0.3", "0.6", "0.9"])
reals = st.decimals(min_value="-3", max_value="3", places=3).map(str)
degrees = st.integers(0, 20)


def qpk(a, q, k):
    return mpmath.qp(a, q, k)


def qbinom(n, k, q):
    return qpk(q, q, n) / (qpk(q, q, k) * qpk(q, q, n - k))


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), mpf(10) ** -30)


def direct_aq(z, q):
    return mpmath.nsum(lambda k: q ** (k * k) * (-z) ** k / qpk(q, q, int(k)), [0, mpmath.inf])


def direct_sw(n, x, q):
    return sum(qbinom(n, k, q) * q ** (k * k) * (-x) ** k for k in range(n + 1)) / qpk(q, q, n)


def direct_laguerre(n, a, x, q):
    # the (q^{a+1};q) factor is indexed by n - k, matching the h-series reduction
    qa1 = q ** (a + 1)
    return sum(q ** (k * k + a * k) * (-x) ** k * qpk(qa1, q, n)
               / (qpk(q, q, k) * qpk(q, q, n - k) * qpk(qa1, q, n - k)) for k in range(n + 1))


def direct_im(n, xi, q):
    terms = [qbinom(n, k, q) * q ** (k * (k - n)) * (-1) ** k * mpmath.exp((n - 2 * k) * xi)
             for k in range(n + 1)]
    return sum(terms), max(abs(t) for t in terms)


def direct_jackson(z, nu, q):
    qn1 = q ** (nu + 1)
    s = mpmath.nsum(lambda k: (-1) ** k * q ** (k * (k + nu)) * (z / 2) ** (2 * k)
                    / (qpk(q, q, int(k)) * qpk(qn1, q, int(k))), [0, mpmath.inf])
    return mpmath.qp(qn1, q) / mpmath.qp(q, q) * (z / 2) ** nu * s


def test_small_known_values():
    with mp.workprec(192):
        assert rel(stieltjes_wigert(1, 1, "0.5", CTX), mpf(1)) < TOL
        assert rel(q_laguerre(1, 0, 1, "0.5", CTX), mpf("1.5")) < TOL
        assert rel(ramanujan_aq(0, "0.5", CTX), mpf(1)) < TOL
        assert rel(q_laguerre(3, "0.5", 0, "0.5", CTX), 1 / qpk(mpf("0.5"), mpf("0.5"), 3)) < TOL
        assert rel(stieltjes_wigert(3, 0, "0.5", CTX), 1 / qpk(mpf("0.5"), mpf("0.5"), 3)) < TOL


@settings(max_examples=15, deadline=None)
@given(reals, nomes)
def test_ramanujan_against_direct_sum(z, q):
    with mp.workprec(192):
        assert rel(ramanujan_aq(z, q, CTX, route="series"), direct_aq(mpf(z), mpf(q))) < TOL


@settings(max_examples=15, deadline=None)
@given(st.decimals(min_value="0.1", max_value="4", places=3).map(str),
       st.decimals(min_value="-0.9", max_value="3", places=2).map(str), nomes, st.booleans())
def test_jackson_against_direct_sum(y, nu, q, imaginary):
    with mp.workprec(192):
        z = mpc(0, mpf(y)) if imaginary else mpf(y)
        assert rel(jackson_qbessel2(z, nu, q, CTX), direct_jackson(z, mpf(nu), mpf(q))) < TOL


@settings(max_examples=15, deadline=None)
@given(degrees, reals, nomes)
def test_stieltjes_wigert_against_direct_sum(n, x, q):
    with mp.workprec(192):
        assert rel(stieltjes_wigert(n, x, q, CTX), direct_sw(n, mpf(x), mpf(q))) < TOL


@settings(max_examples=15, deadline=None)
@given(degrees, st.decimals(min_value="-0.9", max_value="3", places=2).map(str), reals, nomes)
def test_laguerre_against_direct_sum(n, a, x, q):
    with mp.workprec(192):
        assert rel(q_laguerre(n, a, x, q, CTX), direct_laguerre(n, mpf(a), mpf(x), mpf(q))) < TOL


@settings(max_examples=15, deadline=None)
@given(degrees, reals, nomes)
def test_ismail_masson_against_direct_sum(n, xi, q):
    with mp.workprec(192):
        want, peak = direct_im(n, mpf(xi), mpf(q))
        assert abs(ismail_masson(n, xi, q, CTX) - want) <= TOL * max(abs(want), peak)


@pytest.mark.parametrize("n", [1, 3, 5, 7])
def test_ismail_masson_odd_degree_vanishes_at_origin(n):
    with mp.workprec(192):
        assert abs(ismail_masson(n, 0, "0.3", CTX)) < TOL


@settings(max_examples=20, deadline=None)
@given(reals, nomes, st.sampled_from([((), ("1.5",)), (("0.7",), ("0.9", "1.3")), ((), ())]))
def test_confluent_routes_agree(z, q, params):
    spec = HypergeometricSpec(*params)
    a = basic_hypergeometric(spec, z, q, CTX, route="series")
    b = basic_hypergeometric(spec, z, q, CTX, route="reduction")
    with mp.workprec(192):
        assert rel(a, b) < 8 * CTX.tol


@settings(max_examples=20, deadline=None)
@given(reals, nomes)
def test_phi_without_parameters_is_ramanujan(z, q):
    # 0-phi-1 with no parameters has ell = 1/2; 1-phi-0... so compare with A_q via ell = 1
    spec = HypergeometricSpec((), ("1",))
    got = basic_hypergeometric(spec, z, q, CTX)
    with mp.workprec(192):
        # the b = q parameter turns (q, q; q)_k into (q;q)_k (q^2;q)_k / (1 - q)
        qq, zz = mpf(q), mpf(z)
        want = mpmath.nsum(lambda k: (qq ** (k * k)) * (-zz / qq) ** k
                           / (qpk(qq, qq, int(k)) ** 2), [0, mpmath.inf])
        assert rel(got, want) < TOL


@settings(max_examples=20, deadline=None)
@given(reals, nomes, st.integers(0, 15))
def test_g_term_incremental_matches_closed_form(z, q, k):
    p = SeriesParams(("0.7",), ("1.3",), (), 1)
    inc = g_terms(p, z, q, k + 1, CTX)[-1]
    with mp.workprec(192):
        assert rel(inc, g_term(p, k, z, q, CTX)) < TOL


def test_h_truncates_g():
    # for huge n the h-series weights tend to 1 and h_n -> g
    p = SeriesParams()
    with mp.workprec(192):
        assert rel(h_eval(p, 400, "0.7", "0.3", CTX), g_eval(p, "0.7", "0.3", CTX)) < TOL


def test_series_params_validation():
    with pytest.raises(ValueError):
        SeriesParams(alphas=("-1",))
    with pytest.raises(ValueError):
        SeriesParams(ell=0)
    with pytest.raises(ValueError):
        HypergeometricSpec(("1", "1", "1"), ())
    with pytest.raises(ValueError):
        ramanujan_aq(1, "0.5", CTX, route="other")
    with pytest.raises(ValueError):
        q_laguerre(2, "-1.5", 1, "0.5", CTX)
    with pytest.raises(ValueError):
        jackson_qbessel2(1, "-1", "0.5", CTX)


def test_jackson_imaginary_phase():
    lf = jackson_qbessel2(mpc(0, 2), "0.5", "0.5", CTX, as_logform=True)
    with mp.workprec(192):
        assert abs(lf.phase - mp.pi / 4) < TOL


@pytest.mark.parametrize("n", range(6, 17))
@pytest.mark.parametrize("v", ["0.2", "0.3"])
def test_g_reduction_bound(n, v):
    with mp.workprec(192):
        lam = mpf(n) ** mpf("0.4")
        z = mpmath.exp(2 * mp.pi * mpf(v))
    red = lemma4_reduction(SeriesParams(), z, n, QParam(lam=lam), CTX)
    assert abs(red.residual) <= red.bound


@pytest.mark.parametrize("n", range(8, 25, 2))
@pytest.mark.parametrize("v", ["0.2", "0.3"])
def test_h_reduction_bound_even_n(n, v):
    with mp.workprec(192):
        lam = mpf(n) ** mpf("0.4")
        z = mpmath.exp(2 * mp.pi * mpf(v))
    red = lemma5_reduction(SeriesParams(), z, n, QParam(lam=lam), CTX)
    assert abs(red.residual) <= red.bound


@pytest.mark.parametrize("n", [61, 81])
@pytest.mark.parametrize("v", ["0.2", "0.3"])
def test_h_reduction_odd_n_residual_exceeds_bound(n, v):
    # the odd-n residual stays of order one while the bound decays
    with mp.workprec(192):
        lam = mpf(n) ** mpf("0.4")
        z = mpmath.exp(2 * mp.pi * mpf(v))
    red = lemma5_reduction(SeriesParams(), z, n, QParam(lam=lam), CTX)
    assert abs(red.residual) > 5 * red.bound
    assert abs(red.residual) > mpf("0.1")


def test_h_reduction_needs_n_at_least_four():
    with pytest.raises(ValueError):
        lemma5_reduction(SeriesParams(), 2, 3, QParam(lam=2), CTX)
