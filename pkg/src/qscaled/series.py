"""Truncated, precision-controlled evaluation of the master g- and h-series,
the six named families built from them, and the theta reductions of g and h.

Every named family has two routes: its own defining series (``route="series"``)
and the reduction to g or h (``route="reduction"``).  The two routes share no
term code, so comparing them checks both.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import mpmath
from mpmath import mp, mpc, mpf

from .numeric import (
    DEFAULT_CONTEXT,
    LogForm,
    PrecisionContext,
    headroom_bits,
    sum_series,
    sum_series_detailed,
)
from .qkernel import QLike, _hp, as_qparam, qpoch_finite, qpoch_infinite
from .theta import theta_nome_logform


@dataclass(frozen=True)
class SeriesParams:
    """Exponents of the parameters ``a_j = q^alpha_j``, ``b_k = q^beta_k``,
    ``c_i = q^gamma_i`` and the quadratic exponent ``ell``."""

    alphas: Tuple = ()
    betas: Tuple = ()
    gammas: Tuple = ()
    ell: object = 1

    def __post_init__(self):
        for name in ("alphas", "betas", "gammas"):
            vals = tuple(getattr(self, name))
            object.__setattr__(self, name, vals)
            if any(not _hp(x) > 0 for x in vals):
                raise ValueError(f"all {name} must be positive")
        if not _hp(self.ell) > 0:
            raise ValueError("ell must be positive")

    @property
    def r(self) -> int:
        return len(self.alphas)

    @property
    def s(self) -> int:
        return len(self.betas)

    @property
    def t(self) -> int:
        return len(self.gammas)


@dataclass(frozen=True)
class HypergeometricSpec:
    """Parameters ``q^alpha_1..q^alpha_r`` over ``q^beta_1..q^beta_s`` of a
    confluent s-phi-r series."""

    alphas: Tuple = ()
    betas: Tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "betas", tuple(self.betas))
        if any(not _hp(x) > 0 for x in self.alphas + self.betas):
            raise ValueError("exponents must be positive")
        if not self.ell > 0:
            raise ValueError("only confluent series (s + 1 - r > 0) are supported")

    @property
    def ell(self) -> Fraction:
        return Fraction(len(self.betas) + 1 - len(self.alphas), 2)

    @property
    def rho(self):
        return (sum(_hp(a) for a in self.alphas) - sum(_hp(b) for b in self.betas)
                + _hp(self.ell) - 1)

    def as_series_params(self) -> SeriesParams:
        return SeriesParams(self.alphas, self.betas, (), self.ell)


def _peak_hint(z, ell, qp) -> int:
    """Index maximising ``q^(ell k^2) |z|^k``."""
    with mp.workprec(64):
        lz = mpmath.log(abs(_hp(z))) if z != 0 else mpf("-inf")
        if lz <= 0:
            return 0
        return int(lz * qp.scale / (2 * _hp(ell) * mp.pi))


def _peak_log(z, ell, qp) -> float:
    with mp.workprec(64):
        if z == 0:
            return 0.0
        lz = mpmath.log(abs(_hp(z)))
        if lz <= 0:
            return 0.0
        return float(lz * lz * qp.scale / (4 * _hp(ell) * mp.pi))


def _pochhammer_prefix(p: SeriesParams, qp, rctx):
    """``(q, b_1, ...; q)_inf / (a_1, ...; q)_inf``, the k = 0 coefficient."""
    out = qpoch_infinite(qp.q, qp, rctx)
    for b in p.betas:
        out *= qpoch_infinite(qp.power(_hp(b)), qp, rctx)
    for a in p.alphas:
        out /= qpoch_infinite(qp.power(_hp(a)), qp, rctx)
    return out


def _g_factory(p: SeriesParams, z, qp, n_max=None, gammas_n=None):
    """Terms of the g-series; with ``n_max`` the h-series weights are applied
    and the series stops after ``k = n_max``."""

    def factory(rctx):
        q = qp.q
        zz = _hp(z)
        mz = -zz
        ell = _hp(p.ell)
        a = [qp.power(_hp(x)) for x in p.alphas]
        b = [qp.power(_hp(x)) for x in p.betas]
        c = [qp.power(_hp(x)) for x in p.gammas]
        P = _pochhammer_prefix(p, qp, rctx)
        quad = mpf(1)
        step = qp.power(ell)
        q2l = step * step
        qk = mpf(1)
        zk = mpf(1)
        weight = mpf(1)
        k = 0
        while True:
            yield P * quad * zk * weight
            if n_max is not None and k == n_max:
                return
            ratio = mpf(1)
            for aj in a:
                ratio *= 1 - aj * qk
            den = 1 - qk * q
            for bj in b:
                den *= 1 - bj * qk
            P = P * ratio / den
            if n_max is not None:
                qm = qp.power(n_max - k - 1)
                weight *= 1 - qm * q
                for cj in c:
                    weight *= 1 - cj * qm
            quad *= step
            step *= q2l
            zk *= mz
            qk *= q
            k += 1

    return factory


def g_term(p: SeriesParams, k: int, z, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """The k-th term of the g-series, computed from scratch."""
    qp = as_qparam(q)
    with ctx.workprec():
        num = qpoch_infinite(qp.power(k + 1), qp, ctx)
        for b in p.betas:
            num *= qpoch_infinite(qp.power(_hp(b) + k), qp, ctx)
        for a in p.alphas:
            num /= qpoch_infinite(qp.power(_hp(a) + k), qp, ctx)
        return num * qp.power(_hp(p.ell) * k * k) * (-_hp(z)) ** k


def g_terms(p: SeriesParams, z, q: QLike, count: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """First ``count`` terms of the g-series from the incremental recurrence."""
    qp = as_qparam(q)
    out = []
    with ctx.workprec():
        for k, t in enumerate(_g_factory(p, z, qp)(ctx)):
            if k == count:
                break
            out.append(t)
    return out


def g_eval_detailed(p: SeriesParams, z, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT,
                    expected_log=None):
    qp = as_qparam(q)
    start = None
    if expected_log is not None:
        start = headroom_bits(_peak_log(z, p.ell, qp), expected_log)
    return sum_series_detailed(_g_factory(p, z, qp), _peak_hint(z, p.ell, qp), ctx,
                               start_bits=start)


def g_eval(p: SeriesParams, z, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT,
           expected_log=None):
    """``g(a; b; q; ell; z) = sum_k (q^{k+1}, b q^k; q)_inf q^{ell k^2} (-z)^k / (a q^k; q)_inf``."""
    return g_eval_detailed(p, z, q, ctx, expected_log).value


def h_eval_detailed(p: SeriesParams, n: int, z, q: QLike,
                    ctx: PrecisionContext = DEFAULT_CONTEXT, expected_log=None):
    if n < 0:
        raise ValueError("n must be >= 0")
    qp = as_qparam(q)
    start = None
    if expected_log is not None:
        start = headroom_bits(_peak_log(z, p.ell, qp), expected_log)
    return sum_series_detailed(_g_factory(p, z, qp, n_max=n), n + 1, ctx, start_bits=start,
                               absolute_floor=True)


def h_eval(p: SeriesParams, n: int, z, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT,
           expected_log=None):
    """The finite h-series: g's first ``n+1`` terms weighted by
    ``(q, c; q)_n / (q, c; q)_{n-k}``."""
    return h_eval_detailed(p, n, z, q, ctx, expected_log).value


# --- named families --------------------------------------------------------

def _check_route(route):
    if route not in ("series", "reduction"):
        raise ValueError(f"route must be 'series' or 'reduction', got {route!r}")


def ramanujan_aq(z, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT, route="reduction"):
    """Ramanujan's entire function ``A_q(z) = sum q^{k^2} (-z)^k / (q;q)_k``."""
    _check_route(route)
    qp = as_qparam(q)
    if route == "reduction":
        g = g_eval(SeriesParams(), z, qp, ctx)
        with ctx.workprec():
            return g / qpoch_infinite(qp.q, qp, ctx)

    def factory(rctx):
        qq = qp.q
        mz = -_hp(z)
        t = mpf(1)
        k = 0
        while True:
            yield t
            t = t * qq ** (2 * k + 1) * mz / (1 - qq ** (k + 1))
            k += 1

    return sum_series(factory, _peak_hint(z, 1, qp), ctx)


def _jackson_series(w, nu, qp, ctx):
    # sum q^{k^2 + k nu} (-w)^k / (q, q^{nu+1}; q)_k
    def factory(rctx):
        qq = qp.q
        qn1 = qp.power(nu + 1)
        t = mpf(1)
        k = 0
        while True:
            yield t
            t = t * qq ** (2 * k + 1) * qp.power(nu) * (-w) / ((1 - qq ** (k + 1)) * (1 - qn1 * qq ** k))
            k += 1

    return sum_series(factory, _peak_hint(w, 1, qp), ctx)


def jackson_qbessel2(z, nu, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT,
                     route="series", as_logform=False):
    """Jackson's second q-Bessel function ``J_nu^(2)(z; q)`` for ``nu > -1``.

    ``(z/2)^nu`` is the principal power; for ``z = i y`` with ``y > 0`` this
    carries the phase ``e^{i pi nu / 2}`` exactly.
    """
    _check_route(route)
    qp = as_qparam(q)
    with ctx.workprec():
        nu = _hp(nu)
        if not nu > -1:
            raise ValueError("nu must exceed -1")
        zz = _hp(z)
        if zz == 0:
            val = mpf(1) if nu == 0 else mpf(0)
            return LogForm.from_hp(val) if as_logform else val
        half = zz / 2
        w = half * half
        if isinstance(w, mpc) and w.imag == 0:
            w = w.real
        if isinstance(half, mpc) and half.real == 0:
            # (i y)^nu = y^nu e^{i pi nu/2} for y > 0
            y = half.imag
            power = LogForm(nu * mpmath.log(abs(y)), (nu * mp.pi / 2) if y > 0 else (-nu * mp.pi / 2))
        elif nu == 0:
            power = LogForm(0)
        else:
            power = LogForm.from_exponent(nu * mpmath.log(half))
    if route == "series":
        s = _jackson_series(w, nu, qp, ctx)
        with ctx.workprec():
            lead = qpoch_infinite(qp.power(nu + 1), qp, ctx) / qpoch_infinite(qp.q, qp, ctx)
            out = LogForm.from_hp(lead * s) * power
    else:
        with ctx.workprec():
            p = SeriesParams(betas=(nu + 1,))
            arg = w * qp.power(nu)
        g = g_eval(p, arg, qp, ctx)
        with ctx.workprec():
            qq = qpoch_infinite(qp.q, qp, ctx)
            out = LogForm.from_hp(g / (qq * qq)) * power
    return out if as_logform else out.to_hp()


def ismail_masson(n: int, xi, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT, route="series"):
    """Ismail-Masson polynomial ``h_n(sinh xi | q)``; ``xi`` may be complex."""
    _check_route(route)
    if n < 0:
        raise ValueError("n must be >= 0")
    qp = as_qparam(q)
    if route == "reduction":
        with ctx.workprec():
            xi_ = _hp(xi)
            arg = mpmath.exp(-2 * xi_) * qp.power(-n)
        h = h_eval(SeriesParams(), n, arg, qp, ctx)
        with ctx.workprec():
            return h * mpmath.exp(n * xi_) / qpoch_infinite(qp.q, qp, ctx)

    def factory(rctx):
        qq = qp.q
        xi_ = _hp(xi)
        e = mpmath.exp(-2 * xi_)
        # (q;q)_n / ((q;q)_k (q;q)_{n-k}) updated by the q-binomial recurrence
        t = mpmath.exp(n * xi_)
        for k in range(n + 1):
            yield t
            if k == n:
                return
            t = (t * (1 - qq ** (n - k)) / (1 - qq ** (k + 1))
                 * qq ** (2 * k + 1 - n) * (-e))

    # finite sums may vanish exactly, so agreement is judged against the largest term
    return sum_series(factory, n + 1, ctx, absolute_floor=True)


def stieltjes_wigert(n: int, x, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT, route="series"):
    """Stieltjes-Wigert polynomial ``S_n(x; q)``."""
    _check_route(route)
    if n < 0:
        raise ValueError("n must be >= 0")
    qp = as_qparam(q)
    if route == "reduction":
        h = h_eval(SeriesParams(), n, x, qp, ctx)
        with ctx.workprec():
            return h / (qpoch_finite(qp.q, qp, n, ctx) * qpoch_infinite(qp.q, qp, ctx))

    def factory(rctx):
        qq = qp.q
        mx = -_hp(x)
        t = 1 / qpoch_finite(qq, qp, n, rctx)
        for k in range(n + 1):
            yield t
            if k == n:
                return
            t = t * qq ** (2 * k + 1) * mx * (1 - qq ** (n - k)) / (1 - qq ** (k + 1))

    # finite sums may vanish exactly, so agreement is judged against the largest term
    return sum_series(factory, n + 1, ctx, absolute_floor=True)


def q_laguerre(n: int, alpha, x, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT, route="series"):
    """q-Laguerre polynomial ``L_n^(alpha)(x; q)`` for ``alpha > -1``."""
    _check_route(route)
    if n < 0:
        raise ValueError("n must be >= 0")
    if not _hp(alpha) > -1:
        raise ValueError("alpha must exceed -1")
    qp = as_qparam(q)
    if route == "reduction":
        with ctx.workprec():
            arg = _hp(x) * qp.power(_hp(alpha))
            p = SeriesParams(gammas=(_hp(alpha) + 1,))
        h = h_eval(p, n, arg, qp, ctx)
        with ctx.workprec():
            return h / (qpoch_finite(qp.q, qp, n, ctx) * qpoch_infinite(qp.q, qp, ctx))

    def factory(rctx):
        qq = qp.q
        a = _hp(alpha)
        qa1 = qp.power(a + 1)
        qa = qp.power(a)
        mx = -_hp(x)
        # k = 0: (q^{a+1};q)_n / ((q;q)_n (q^{a+1};q)_n) = 1/(q;q)_n
        t = 1 / qpoch_finite(qq, qp, n, rctx)
        for k in range(n + 1):
            yield t
            if k == n:
                return
            m = n - k  # (q, q^{a+1}; q)_{m-1} = (q, q^{a+1}; q)_m / ((1-q^m)(1-q^{a+1} q^{m-1}))
            t = (t * qq ** (2 * k + 1) * qa * mx
                 * (1 - qq ** m) * (1 - qa1 * qq ** (m - 1)) / (1 - qq ** (k + 1)))

    # finite sums may vanish exactly, so agreement is judged against the largest term
    return sum_series(factory, n + 1, ctx, absolute_floor=True)


def basic_hypergeometric(spec: HypergeometricSpec, z, q: QLike,
                         ctx: PrecisionContext = DEFAULT_CONTEXT, route="series"):
    """Confluent ``s-phi-r`` with numerator ``q^alphas`` and denominator ``q^betas``."""
    _check_route(route)
    qp = as_qparam(q)
    ell = _hp(spec.ell)
    if route == "reduction":
        p = spec.as_series_params()
        with ctx.workprec():
            arg = _hp(z) * qp.power(-ell)
        g = g_eval(p, arg, qp, ctx)
        with ctx.workprec():
            # g already carries (q, b; q)_inf / (a; q)_inf in every term
            return g / _pochhammer_prefix(p, qp, ctx)

    def factory(rctx):
        qq = qp.q
        a = [qp.power(_hp(x)) for x in spec.alphas]
        b = [qp.power(_hp(x)) for x in spec.betas]
        w = -_hp(z) * qp.power(-ell)
        t = mpf(1)
        k = 0
        while True:
            yield t
            num = mpf(1)
            for aj in a:
                num *= 1 - aj * qq ** k
            den = 1 - qq ** (k + 1)
            for bj in b:
                den *= 1 - bj * qq ** k
            t = t * num / den * w * qp.power(ell * (2 * k + 1))
            k += 1

    with ctx.workprec():
        zq = _hp(z) * qp.power(-ell)
    return sum_series(factory, _peak_hint(zq, ell, qp), ctx)


# --- theta reductions --------------------------------------------------------

@dataclass(frozen=True)
class Reduction:
    main: LogForm
    residual: object
    bound: mpf


def _theta_parts(p: SeriesParams, z, qp, ctx):
    with mp.workprec(ctx.bits + 32):
        tau = _hp(p.ell) / qp.scale
        zi = 1 / _hp(z)
    th4 = theta_nome_logform(4, zi, tau, ctx)
    th3 = theta_nome_logform(3, abs(zi), tau, ctx)
    return th4, th3


def lemma4_reduction(p: SeriesParams, z, n: int, q: QLike,
                     ctx: PrecisionContext = DEFAULT_CONTEXT) -> Reduction:
    """Compare ``g(q^{-4 n ell} z)`` with ``z^{2n} q^{-4 n^2 ell} theta_4(1/z; q^ell)``.

    Returns the main term, the residual
    ``g(q^{-4n ell} z) / (z^{2n} q^{-4 n^2 ell}) - theta_4(1/z; q^ell)`` and the
    remainder bound ``2^{s+r+3} theta_3(1/|z|; q^ell) / (a; q)_inf *
    (q^{n+1}/(1-q) + q^{ell n^2} / |z|^n)``.
    """
    qp = as_qparam(q)
    ell = _hp(p.ell)
    th4, th3 = _theta_parts(p, z, qp, ctx)
    with ctx.workprec():
        zz = _hp(z)
        pref = LogForm.from_exponent(2 * n * mpmath.log(zz)) * LogForm(mp.pi * 4 * n * n * ell / qp.scale)
        arg = zz * qp.power(-4 * n * ell)
    expected = pref * th4
    g = g_eval(p, arg, qp, ctx, expected_log=expected.log_mag if not th4.is_zero else None)
    with mp.workprec(ctx.bits + 32):
        residual = (LogForm.from_hp(g) / pref).to_hp() - th4.to_hp()
        qq = qp.q
        den = mpf(1)
        for a in p.alphas:
            den *= qpoch_infinite(qp.power(_hp(a)), qp, ctx)
        bound = (mpf(2) ** (p.s + p.r + 3) * th3.to_hp() / den
                 * (qq ** (n + 1) / (1 - qq) + qp.power(ell * n * n) / abs(zz) ** n))
    with ctx.workprec():
        return Reduction(pref * th4, +residual, +bound)


def chi(n: int) -> int:
    """Principal character mod 2."""
    return n & 1


def lemma5_reduction(p: SeriesParams, z, n: int, q: QLike,
                     ctx: PrecisionContext = DEFAULT_CONTEXT) -> Reduction:
    """Compare ``h_n(z q^{-n ell})`` with
    ``(-z)^{floor(n/2)} q^{-ell (n^2 - chi(n))/4} theta_4(1/z; q^ell)``."""
    if n < 4:
        raise ValueError("n must be >= 4")
    qp = as_qparam(q)
    ell = _hp(p.ell)
    m = n // 4
    th4, th3 = _theta_parts(p, z, qp, ctx)
    with ctx.workprec():
        zz = _hp(z)
        half = n // 2
        pref = (LogForm.from_hp(-zz) ** half
                * LogForm(mp.pi * ell * (n * n - chi(n)) / (4 * qp.scale)))
        arg = zz * qp.power(-n * ell)
    expected = pref * th4
    h = h_eval(p, n, arg, qp, ctx, expected_log=expected.log_mag if not th4.is_zero else None)
    with mp.workprec(ctx.bits + 32):
        residual = (LogForm.from_hp(h) / pref).to_hp() - th4.to_hp()
        qq = qp.q
        den = mpf(1)
        for a in p.alphas:
            den *= qpoch_infinite(qp.power(_hp(a)), qp, ctx)
        az = abs(zz)
        bound = (mpf(2) ** (p.s + p.r + 2 * p.t + 5) * th3.to_hp() / den
                 * (qq ** (m + 1) / (1 - qq) + az ** m * qp.power(ell * m * m)
                    + qp.power(ell * m * m) / az ** m))
    with ctx.workprec():
        return Reduction(pref * th4, +residual, +bound)
