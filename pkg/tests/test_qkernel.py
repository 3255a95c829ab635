import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from qscaled import PrecisionContext, QParam, dedekind_eta, euler_gamma, q_gamma, qpoch_finite, qpoch_infinite
from qscaled.numeric import PreconditionViolated, relative_deviation, LogForm
from qscaled.qkernel import PoleError, lemma1_remainders, lemma2_qq_inf_asym, lemma3_qx_inf_asym

CTX = PrecisionContext(bits=192, rel_tol=1e-45)
nomes = st.decimals(min_value="0.05", max_value="0.95", places=3).map(str)
args = st.decimals(min_value="-2", max_value="2", places=3).map(str)


def close(a, b, tol=mpf(10) ** -40):
    with mp.workprec(192):
        return abs(a - b) <= tol * max(abs(b), 1)


def test_qparam_validation():
    with pytest.raises(ValueError):
        QParam()
    with pytest.raises(ValueError):
        QParam(lam=1, nome="0.5")
    with pytest.raises(ValueError):
        QParam(nome="1.5")
    with pytest.raises(ValueError):
        QParam(lam=-1)


def test_qparam_scale_roundtrip():
    with mp.workprec(200):
        qp = QParam(lam=7)
        assert abs(QParam.from_nome(qp.q).scale - 7) < mpf(10) ** -50
        assert abs(qp.power(3) - qp.q ** 3) < mpf(10) ** -55


def test_qpoch_finite_known_value():
    assert close(qpoch_finite("0.3", "0.5", 3, CTX), mpf("0.550375"))
    assert qpoch_finite("0.3", "0.5", 0, CTX) == 1
    with pytest.raises(ValueError):
        qpoch_finite("0.3", "0.5", -1, CTX)


def test_qpoch_infinite_known_value():
    with mp.workprec(192):
        assert close(qpoch_infinite("-1", "0.5", CTX), mpmath.qp(-1, mpf("0.5")))
        assert abs(qpoch_infinite("-1", "0.5", CTX) - mpf("4.768462058062743")) < 1e-14


@settings(max_examples=30, deadline=None)
@given(args, nomes)
def test_qpoch_infinite_against_mpmath(a, q):
    with mp.workprec(192):
        assert close(qpoch_infinite(a, q, CTX), mpmath.qp(mpf(a), mpf(q)))


@settings(max_examples=30, deadline=None)
@given(args, nomes, st.integers(0, 25))
def test_qpoch_split(a, q, n):
    # (a;q)_inf = (a;q)_n (a q^n;q)_inf
    with mp.workprec(192):
        whole = qpoch_infinite(a, q, CTX)
        split = qpoch_finite(a, q, n, CTX) * qpoch_infinite(mpf(a) * mpf(q) ** n, q, CTX)
        assert abs(whole - split) <= mpf(10) ** -40 * max(abs(whole), 1)


@settings(max_examples=40, deadline=None)
@given(args, nomes, st.integers(0, 30))
def test_lemma1_bound_property(a, q, n):
    try:
        r1, r2, bound = lemma1_remainders(a, q, n, CTX)
    except PreconditionViolated:
        return
    assert abs(r1) <= bound and abs(r2) <= bound


def test_lemma1_known_value_and_precondition():
    r1, r2, bound = lemma1_remainders("0.2", "0.5", 3, CTX)
    assert abs(r1 - mpf("-0.0491725992383")) < 1e-12
    with mp.workprec(192):
        assert abs(bound - mpf("0.1")) < 1e-40
    with pytest.raises(PreconditionViolated):
        lemma1_remainders("2", "0.9", 0, CTX)


@settings(max_examples=20, deadline=None)
@given(st.decimals(min_value="0.1", max_value="6", places=3).map(str), nomes)
def test_q_gamma_against_mpmath(z, q):
    with mp.workprec(192):
        assert close(q_gamma(z, q, CTX), mpmath.qgamma(mpf(z), mpf(q)))


@settings(max_examples=20, deadline=None)
@given(st.decimals(min_value="0.1", max_value="5", places=3).map(str), nomes)
def test_q_gamma_functional_equation(z, q):
    # Gamma_q(z+1) = [z]_q Gamma_q(z)
    with mp.workprec(192):
        zz, qq = mpf(z), mpf(q)
        lhs = q_gamma(zz + 1, q, CTX)
        rhs = (1 - qq ** zz) / (1 - qq) * q_gamma(z, q, CTX)
        assert close(lhs, rhs)


def test_q_gamma_pole():
    with pytest.raises(PoleError):
        q_gamma(-2, "0.5", CTX)


@settings(max_examples=30, deadline=None)
@given(st.decimals(min_value="0.01", max_value="30", places=4).map(str))
def test_euler_gamma_against_mpmath(x):
    with mp.workprec(192):
        assert close(euler_gamma(x, CTX), mpmath.gamma(mpf(x)))


def test_euler_gamma_half():
    with mp.workprec(192):
        assert close(euler_gamma("0.5", CTX) ** 2, mp.pi)
    with pytest.raises(ValueError):
        euler_gamma(0, CTX)


def test_dedekind_eta_at_i():
    assert abs(dedekind_eta(1, CTX) - mpf("0.76822542232605665")) < 1e-16
    with mp.workprec(192):
        exact = mpmath.gamma(mpf(1) / 4) / (2 * mp.pi ** (mpf(3) / 4))
        assert close(dedekind_eta(1, CTX), exact)


@settings(max_examples=15, deadline=None)
@given(st.decimals(min_value="0.05", max_value="20", places=3).map(str))
def test_dedekind_eta_modular(t):
    with mp.workprec(192):
        tt = mpf(t)
        assert close(dedekind_eta(1 / tt, CTX), mpmath.sqrt(tt) * dedekind_eta(tt, CTX))


def test_qq_inf_main_term_is_sharp():
    for lam in (5, 10):
        hi = CTX.with_bits(400)
        with hi.workprec():
            qp = QParam(lam=lam)
            dev = relative_deviation(LogForm.from_hp(qpoch_infinite(qp.q, qp, hi)), lemma2_qq_inf_asym(lam))
            assert dev <= 10 * mpmath.exp(-4 * mp.pi * lam)


def test_qx_inf_main_term_improves():
    devs = []
    for lam in (10, 20, 40):
        qp = QParam(lam=lam)
        with CTX.workprec():
            exact = LogForm.from_hp(qpoch_infinite(qp.power(mpf(2)), qp, CTX))
            devs.append(relative_deviation(exact, lemma3_qx_inf_asym("2", lam, CTX)))
    assert devs[0] > devs[1] > devs[2]
