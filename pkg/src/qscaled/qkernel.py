"""q-Pochhammer symbols, q-Gamma, Euler Gamma and the Dedekind eta function,
together with the leading-order q -> 1 approximations of ``(q;q)_inf`` and
``(q^x;q)_inf`` on the scale ``q = exp(-pi/lambda)``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp, mpf

from .numeric import (
    DEFAULT_CONTEXT,
    LogForm,
    PrecisionContext,
    PrecisionExhausted,
    PreconditionViolated,
)


class PoleError(ValueError):
    pass


def _hp(x):
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)


@dataclass(frozen=True)
class QParam:
    """The base ``q`` of all q-series, held by its scale ``lam``.

    ``q = exp(-pi/lam)`` is recomputed at the working precision on every
    access.  For fixed-nome test points, ``QParam.from_nome("0.3")`` stores the
    nome itself (decimal strings are converted exactly at working precision).
    """

    lam: object = None
    nome: object = None

    def __post_init__(self):
        if (self.lam is None) == (self.nome is None):
            raise ValueError("give exactly one of lam or nome")
        if self.lam is not None and not _hp(self.lam) > 0:
            raise ValueError("lam must be positive")
        if self.nome is not None and not 0 < _hp(self.nome) < 1:
            raise ValueError("nome must lie in (0, 1)")

    @classmethod
    def from_nome(cls, q) -> "QParam":
        return cls(nome=q)

    @property
    def q(self) -> mpf:
        if self.nome is not None:
            return mpf(_hp(self.nome))
        return mpmath.exp(-mp.pi / _hp(self.lam))

    @property
    def scale(self) -> mpf:
        """``lambda`` with ``q = exp(-pi/lambda)``."""
        if self.lam is not None:
            return mpf(_hp(self.lam))
        return -mp.pi / mpmath.log(self.q)

    def power(self, x):
        """``q**x`` without going through a rounded ``q`` when ``lam`` is known."""
        if self.lam is not None:
            return mpmath.exp(-mp.pi * x / _hp(self.lam))
        return self.q ** x


QLike = Union[QParam, float, str]


def as_qparam(q: QLike) -> QParam:
    return q if isinstance(q, QParam) else QParam.from_nome(q)


def qpoch_finite(a, q: QLike, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """``(a;q)_n = prod_{k<n} (1 - a q^k)`` for ``n >= 0``."""
    if n < 0:
        raise ValueError("negative-index q-Pochhammer symbols are not supported")
    qp = as_qparam(q)
    with mp.workprec(ctx.bits + 16):
        a = _hp(a)
        qq = qp.q
        out = mpf(1)
        t = a
        for _ in range(n):
            out *= 1 - t
            t *= qq
    return +out


def truncation_index(abs_a, q, tol) -> int:
    """Smallest ``N`` with ``2|a| q^N / (1-q) <= tol``."""
    if abs_a == 0:
        return 0
    target = tol * (1 - q) / (2 * abs_a)
    if target >= 1:
        return 0
    return max(0, int(mpmath.ceil(mpmath.log(target) / mpmath.log(q))))


def qpoch_infinite(a, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """``(a;q)_inf`` truncated where the product's remainder bound drops below
    ``ctx.rel_tol``."""
    qp = as_qparam(q)
    with mp.workprec(ctx.bits + 16):
        a = _hp(a)
        if a == 0:
            return mpf(1)
        qq = qp.q
        tol = min(mpf(ctx.rel_tol), mpf(2) ** (-ctx.bits)) / 4
        n_fac = truncation_index(abs(a), qq, tol)
        if n_fac > 10_000_000:
            raise PrecisionExhausted(f"q-Pochhammer needs {n_fac} factors")
        out = mpf(1)
        t = a
        for _ in range(n_fac):
            out *= 1 - t
            t *= qq
    return +out


def lemma1_remainders(a, q: QLike, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Return ``(r1, r2, bound)`` with ``(aq^n;q)_inf = 1 + r1`` and
    ``1/(aq^n;q)_inf = 1 + r2``; both obey ``|r| <= 2|a|q^n/(1-q)`` whenever
    that bound is below 1/2."""
    qp = as_qparam(q)
    with mp.workprec(ctx.bits + 16):
        a = _hp(a)
        qq = qp.q
        bound = 2 * abs(a) * qq ** n / (1 - qq)
        if a == 0:
            return mpf(0), mpf(0), mpf(0)
        if not bound / 2 < mpf(1) / 2:
            raise PreconditionViolated(
                f"|a| q^n/(1-q) = {mpmath.nstr(bound / 2, 6)} is not below 1/2"
            )
        tail = qpoch_infinite(a * qq ** n, qp, ctx)
        return tail - 1, 1 / tail - 1, bound


def q_gamma(z, q: QLike, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """``Gamma_q(z) = (q;q)_inf / (q^z;q)_inf * (1-q)^(1-z)``."""
    qp = as_qparam(q)
    with mp.workprec(ctx.bits + 16):
        z = _hp(z)
        if mpmath.im(z) == 0 and z <= 0 and z == mpmath.floor(mpmath.re(z)):
            raise PoleError(f"Gamma_q has a pole at z = {z}")
        qq = qp.q
        qz = qp.power(z)
        num = qpoch_infinite(qq, qp, ctx)
        den = qpoch_infinite(qz, qp, ctx)
        return num / den * (1 - qq) ** (1 - z)


# --- Euler Gamma (Spouge) --------------------------------------------------

def _spouge_a(bits: int) -> int:
    # relative error of Spouge's sum is below (2*pi)^-(a+1/2)
    return int(bits * 0.377) + 2


def euler_gamma(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Gamma(x) for real ``x > 0`` by Spouge's approximation.

    The coefficients alternate and grow like ``e^a``, so the sum is formed at
    roughly twice the target precision.
    """
    bits = ctx.bits + 16
    with mp.workprec(bits):
        x = mpf(_hp(x))
        if not x > 0:
            raise ValueError("euler_gamma requires x > 0")
        if x == int(x) and x < 200:
            return mpmath.mpf(mpmath.factorial(int(x) - 1))
        shift = mpf(1)
        while x < 1:
            # Spouge is applied to Gamma(x+1) with x >= 0 for best accuracy
            shift *= x
            x += 1
        a = _spouge_a(bits)
    with mp.workprec(2 * bits + 32):
        z = x - 1
        acc = mpmath.sqrt(2 * mp.pi)
        fact = mpf(1)
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            c = (-1) ** (k - 1) / fact * mpf(a - k) ** (k - mpf(1) / 2) * mpmath.exp(a - k)
            acc += c / (z + k)
        g = (z + a) ** (z + mpf(1) / 2) * mpmath.exp(-(z + a)) * acc
        out = g / shift
    with mp.workprec(ctx.bits):
        return +out


# --- Dedekind eta on the imaginary axis ------------------------------------

def _eta_direct(t, ctx: PrecisionContext) -> mpf:
    # eta(i t) = Q^(1/12) (Q^2; Q^2)_inf with Q = exp(-pi t)
    Q2 = mpmath.exp(-2 * mp.pi * t)
    return mpmath.exp(-mp.pi * t / 12) * qpoch_infinite(Q2, QParam.from_nome(Q2), ctx)


def dedekind_eta(tau_im, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """``eta(i * tau_im)``; for ``tau_im < 1`` the modular transform is used."""
    with mp.workprec(ctx.bits + 16):
        t = mpf(_hp(tau_im))
        if not t > 0:
            raise ValueError("tau_im must be positive")
        if t >= 1:
            out = _eta_direct(t, ctx)
        else:
            # eta(i t) = t^(-1/2) eta(i/t)
            out = _eta_direct(1 / t, ctx) / mpmath.sqrt(t)
    with mp.workprec(ctx.bits):
        return +out


def lemma2_qq_inf_asym(lam) -> LogForm:
    """Main term ``sqrt(2 lam) exp(pi/(24 lam) - pi lam/6)`` of ``(q;q)_inf``."""
    lam = mpf(_hp(lam))
    return LogForm(mpmath.log(2 * lam) / 2 + mp.pi / (24 * lam) - mp.pi * lam / 6)


def lemma3_qx_inf_asym(x, lam, ctx: PrecisionContext = DEFAULT_CONTEXT) -> LogForm:
    """Main term of ``(q^x;q)_inf``:
    ``sqrt(2) pi^(1-x) lam^(x-1/2) / (Gamma(x) exp(pi lam/6))``."""
    with mp.workprec(ctx.bits + 16):
        x = mpf(_hp(x))
        lam = mpf(_hp(lam))
        if not (x > 0 and lam > 0):
            raise ValueError("x and lam must be positive")
        log_mag = (mpmath.log(2) / 2 + (1 - x) * mpmath.log(mp.pi)
                   + (x - mpf(1) / 2) * mpmath.log(lam)
                   - mpmath.log(euler_gamma(x, ctx)) - mp.pi * lam / 6)
        return LogForm(log_mag)
