"""Jacobi theta functions on the imaginary tau axis.

Three evaluation paths are provided: the defining bilateral series, the
Jacobi triple products, and the modular transform ``tau -> -1/tau`` which
turns a nome close to 1 into ``exp(-pi/tau_im)`` and returns the value in
log form.  ``theta`` dispatches between the series (``tau_im >= 1``) and
the transformed path (``tau_im < 1``).

The argument ``v`` may be real or complex; the q -> 1 analysis only needs
real ``v`` and purely imaginary ``v`` (nome-notation arguments ``z > 0``).
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpc, mpf

from .numeric import DEFAULT_CONTEXT, LogForm, PrecisionContext, sum_series
from .qkernel import QParam, _hp, qpoch_infinite


@dataclass(frozen=True)
class ThetaPoint:
    index: int
    v: object
    tau_im: object

    def __post_init__(self):
        if self.index not in (1, 2, 3, 4):
            raise ValueError(f"theta index must be 1..4, got {self.index}")
        if not _hp(self.tau_im) > 0:
            raise ValueError("tau_im must be positive")


def _as_number(v):
    v = _hp(v)
    if isinstance(v, mpc) and v.imag == 0:
        return v.real
    return v


def _theta_terms(index: int, v, tau_im):
    """Factory of paired terms ``k`` and its mirror, with magnitude majorants."""

    def factory(rctx):
        t = mpf(_hp(tau_im))
        vv = _as_number(v)
        q = mpmath.exp(-mp.pi * t)
        w = mpmath.exp(2j * mp.pi * vv) if isinstance(vv, mpc) else None
        # |e^{2 pi i v}| = e^{-2 pi Im v}
        grow = mpmath.exp(2 * mp.pi * abs(mpmath.im(vv)))
        if index in (3, 4):
            yield mpf(1), mpf(1)
            k = 1
            while True:
                qk = q ** (k * k)
                if isinstance(vv, mpc):
                    e = w ** k
                    pair = qk * (e + 1 / e)
                else:
                    pair = 2 * qk * mpmath.cos(2 * k * mp.pi * vv)
                if index == 4 and k % 2:
                    pair = -pair
                yield pair, 2 * qk * grow ** k
                k += 1
        else:
            k = 0
            while True:
                qk = q ** ((k + mpf(1) / 2) ** 2)
                arg = (2 * k + 1) * mp.pi * vv
                if index == 1:
                    # -i [(-1)^k e^{i a} + (-1)^{-k-1} e^{-i a}] = 2 (-1)^k sin a
                    pair = 2 * qk * mpmath.sin(arg)
                    if k % 2:
                        pair = -pair
                else:
                    pair = 2 * qk * mpmath.cos(arg)
                yield pair, 2 * qk * grow ** (2 * k + 1)
                k += 1

    return factory


def _peak_index(v, tau_im) -> int:
    # |q^{k^2} e^{2 pi k |Im v|}| peaks at k = |Im v| / tau_im
    return int(abs(float(mpmath.im(_hp(v)))) / float(_hp(tau_im))) + 1


def theta_series(p: ThetaPoint, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Sum the defining series of theta_index(v | i tau_im)."""
    out = sum_series(_theta_terms(p.index, p.v, p.tau_im),
                     _peak_index(p.v, p.tau_im), ctx, absolute_floor=True)
    with ctx.workprec():
        return +out


def theta_product(p: ThetaPoint, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Evaluate theta_index(v | i tau_im) by the Jacobi triple product."""
    with mp.workprec(ctx.bits + 32):
        t = mpf(_hp(p.tau_im))
        vv = _as_number(p.v)
        q = mpmath.exp(-mp.pi * t)
        q2 = q * q
        base = QParam.from_nome(q2)
        e = mpmath.exp(2j * mp.pi * vv)
        ei = 1 / e
        inner = qpoch_infinite(q2, base, ctx)
        if p.index == 1:
            out = (2 * q ** (mpf(1) / 4) * mpmath.sin(mp.pi * vv) * inner
                   * qpoch_infinite(q2 * e, base, ctx) * qpoch_infinite(q2 * ei, base, ctx))
        elif p.index == 2:
            out = (2 * q ** (mpf(1) / 4) * mpmath.cos(mp.pi * vv) * inner
                   * qpoch_infinite(-q2 * e, base, ctx) * qpoch_infinite(-q2 * ei, base, ctx))
        elif p.index == 3:
            out = inner * qpoch_infinite(-q * e, base, ctx) * qpoch_infinite(-q * ei, base, ctx)
        else:
            out = inner * qpoch_infinite(q * e, base, ctx) * qpoch_infinite(q * ei, base, ctx)
        if isinstance(out, mpc) and not isinstance(vv, mpc):
            out = out.real
    with ctx.workprec():
        return +out


_SWAP = {1: 1, 2: 4, 3: 3, 4: 2}


def theta_transformed(p: ThetaPoint, ctx: PrecisionContext = DEFAULT_CONTEXT) -> LogForm:
    """theta_index(v | i t) as a LogForm via the modular transform.

    With ``t = tau_im``::

        theta_j(v | i t) = c_j t^(-1/2) exp(-pi v^2 / t) theta_j'(i v / t | i / t)

    where ``j' `` swaps 2 and 4 and ``c_1 = -i``, otherwise 1.  The Gaussian
    prefactor is kept in log form.
    """
    with mp.workprec(ctx.bits + 32):
        t = mpf(_hp(p.tau_im))
        vv = _as_number(p.v)
        if p.index == 1 and vv == 0:
            return LogForm.zero()
        inner_v = mpc(0, 1) * vv / t
        if isinstance(inner_v, mpc) and inner_v.imag == 0:
            inner_v = inner_v.real
        inner = theta_series(ThetaPoint(_SWAP[p.index], inner_v, 1 / t),
                             ctx.with_bits(ctx.bits + 32))
        expo = -mp.pi * vv * vv / t - mpmath.log(t) / 2
        if p.index == 1:
            expo = expo - mpc(0, 1) * mp.pi / 2
        if inner == 0:
            return LogForm.zero()
        out = LogForm.from_exponent(expo) * LogForm.from_hp(inner)
        if not isinstance(vv, mpc) or (vv.real == 0 and p.index != 1):
            # real v, or imaginary v for theta_2..4: the value is real
            phase = 0 if abs(out.phase) < mp.pi / 2 else mp.pi
            out = LogForm(out.log_mag, phase)
    with ctx.workprec():
        return LogForm(+out.log_mag, +out.phase)


def theta(index: int, v, tau_im, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """theta_index(v | i tau_im) as an HP value, choosing the stable path."""
    p = ThetaPoint(index, v, tau_im)
    if _hp(tau_im) >= 1:
        return theta_series(p, ctx)
    return theta_transformed(p, ctx).to_hp()


def theta_nome_logform(index: int, z, tau_im, ctx: PrecisionContext = DEFAULT_CONTEXT) -> LogForm:
    """``theta_index(z; q)`` in nome notation, ``z = e^{2 pi i v}``,
    ``q = exp(-pi tau_im)``, returned in log form."""
    with mp.workprec(ctx.bits + 32):
        z = _hp(z)
        v = mpmath.log(z) / (2j * mp.pi)
        if isinstance(v, mpc) and v.imag == 0:
            v = v.real
    p = ThetaPoint(index, v, tau_im)
    if _hp(tau_im) >= 1:
        return LogForm.from_hp(theta_series(p, ctx))
    return theta_transformed(p, ctx)


def theta_nome(index: int, z, tau_im, ctx: PrecisionContext = DEFAULT_CONTEXT):
    return theta_nome_logform(index, z, tau_im, ctx).to_hp()
