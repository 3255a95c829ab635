"""Exact evaluation and approximant lookup for every studied family.

``exact_value`` evaluates the defining series at the scaled argument that the
corresponding approximant describes; ``asym_value`` returns the matching
:class:`AsymResult`.  Both take the same ``(family, branch, n, v)`` point.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Mapping

import mpmath
from mpmath import mp, mpc, mpf

from .. import asymptotics as asy
from ..numeric import LogForm, PrecisionContext
from ..qkernel import QParam, _hp
from ..series import (
    HypergeometricSpec,
    SeriesParams,
    basic_hypergeometric,
    g_eval,
    h_eval,
    ismail_masson,
    jackson_qbessel2,
    q_laguerre,
    ramanujan_aq,
    stieltjes_wigert,
)

FAMILIES = ("g", "h", "ramanujan", "jackson", "ismail_masson",
            "stieltjes_wigert", "q_laguerre", "confluent")

H_FAMILIES = ("h", "ismail_masson", "stieltjes_wigert", "q_laguerre")


def _sign(branch: str) -> int:
    return -1 if asy._branch(branch) == "minus" else 1


def family_ell(family: str, params: Mapping[str, Any]) -> Fraction:
    if family in ("g", "h"):
        return Fraction(params.get("ell", 1))
    if family == "confluent":
        return confluent_spec(params).ell
    return Fraction(1)


def confluent_spec(params: Mapping[str, Any]) -> HypergeometricSpec:
    return HypergeometricSpec(tuple(params.get("alphas", ())), tuple(params.get("betas", ())))


def _gh_params(params: Mapping[str, Any]) -> SeriesParams:
    return SeriesParams(tuple(params.get("alphas", ())), tuple(params.get("betas", ())),
                        tuple(params.get("gammas", ())), params.get("ell", 1))


def exact_value(family: str, branch: str, n: int, v, lam, params: Mapping[str, Any],
                ctx: PrecisionContext, expected_log=None) -> LogForm:
    """Exact value of the family at the scaled point, as a LogForm.

    ``expected_log`` estimates the log-magnitude of the result; the g and h
    sums then start with enough bits to absorb their cancellation.
    """
    sg = _sign(branch)
    qp = QParam(lam=lam)
    with mp.workprec(ctx.bits + 32):
        v = mpf(_hp(v))
        z = mpmath.exp(2 * mp.pi * v)
    if family == "g":
        p = _gh_params(params)
        with mp.workprec(ctx.bits + 32):
            arg = sg * qp.power(-4 * n * _hp(p.ell)) * z
        out = g_eval(p, arg, qp, ctx, expected_log=expected_log)
    elif family == "h":
        p = _gh_params(params)
        with mp.workprec(ctx.bits + 32):
            arg = sg * qp.power(-n * _hp(p.ell)) * z
        out = h_eval(p, n, arg, qp, ctx, expected_log=expected_log)
    elif family == "ramanujan":
        with mp.workprec(ctx.bits + 32):
            arg = sg * qp.power(-4 * n) * z
        out = ramanujan_aq(arg, qp, ctx, route="series")
    elif family == "jackson":
        nu = _hp(params.get("nu", 0))
        with mp.workprec(ctx.bits + 32):
            # sqrt(z q^-nu) q^-2n
            r = mpmath.exp(mp.pi * v) * qp.power(-nu / 2 - 2 * n)
            arg = mpc(0, 2 * r) if sg < 0 else 2 * r
        return jackson_qbessel2(arg, nu, qp, ctx, as_logform=True)
    elif family == "ismail_masson":
        with mp.workprec(ctx.bits + 32):
            xi = mp.pi * mpc(v, mpf(1) / 2) if sg < 0 else mp.pi * v
        out = ismail_masson(n, xi, qp, ctx)
    elif family == "stieltjes_wigert":
        with mp.workprec(ctx.bits + 32):
            arg = sg * z * qp.power(-n)
        out = stieltjes_wigert(n, arg, qp, ctx)
    elif family == "q_laguerre":
        alpha = _hp(params.get("alpha", 0))
        with mp.workprec(ctx.bits + 32):
            zl = laguerre_z(v, params)
            arg = sg * zl * qp.power(-alpha - n)
        out = q_laguerre(n, alpha, arg, qp, ctx)
    elif family == "confluent":
        spec = confluent_spec(params)
        with mp.workprec(ctx.bits + 32):
            arg = sg * z * qp.power(-_hp(spec.ell) * (4 * n - 1))
        out = basic_hypergeometric(spec, arg, qp, ctx)
    else:
        raise ValueError(f"unknown family {family!r}")
    with ctx.workprec():
        return LogForm.from_hp(out)


def laguerre_z(v, params: Mapping[str, Any]):
    """``e^{-2 pi v}`` by default; ``laguerre_sign=+1`` selects ``e^{2 pi v}``."""
    sign = int(params.get("laguerre_sign", -1))
    return mpmath.exp(2 * sign * mp.pi * _hp(v))


def asym_value(family: str, branch: str, n: int, v, scale, params: Mapping[str, Any]) -> asy.AsymResult:
    parity = params.get("parity", "printed")
    if family == "g":
        return asy.g_asym(branch, params.get("ell", 1), v, n, scale)
    if family == "h":
        return asy.h_asym(branch, params.get("ell", 1), v, n, scale, parity)
    if family == "ramanujan":
        return asy.aq_asym(branch, v, n, scale)
    if family == "jackson":
        return asy.jackson_asym(branch, v, params.get("nu", 0), n, scale)
    if family == "ismail_masson":
        return asy.im_asym(branch, v, n, scale, parity)
    if family == "stieltjes_wigert":
        return asy.sw_asym(branch, v, n, scale, parity)
    if family == "q_laguerre":
        return asy.laguerre_asym(branch, v, params.get("alpha", 0), n, scale, parity)
    if family == "confluent":
        return asy.confluent_asym(branch, confluent_spec(params), v, n, scale,
                                  gamma_denominator=params.get("gamma_denominator", True),
                                  form=params.get("form", "printed"))
    raise ValueError(f"unknown family {family!r}")


def expected_rate(family: str, branch: str, params: Mapping[str, Any]) -> float:
    """Claimed exponential decay rate ``c`` in ``rel_error ~ e^{-c lam}``."""
    ell = float(family_ell(family, params))
    base = 3.141592653589793 / ell
    return 2 * base if asy._branch(branch) == "plus" else base
