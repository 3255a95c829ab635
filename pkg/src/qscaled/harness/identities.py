"""Exact-identity sweeps: theta product/series/transform agreement, the eta
transformation, two-route agreement of every named family, and the parity
identities of ``chi``."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, List

import mpmath
from mpmath import mp, mpc, mpf

from ..asymptotics import chi
from ..numeric import PrecisionContext
from ..qkernel import _eta_direct, _hp
from ..series import (
    HypergeometricSpec,
    SeriesParams,
    basic_hypergeometric,
    g_term,
    g_terms,
    ismail_masson,
    jackson_qbessel2,
    q_laguerre,
    ramanujan_aq,
    stieltjes_wigert,
)
from ..theta import ThetaPoint, theta_product, theta_series, theta_transformed

NOMES = ("0.3", "0.6", "0.9")


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    cases: int
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance


def _dec(rng: random.Random, lo: float, hi: float, digits: int = 4) -> str:
    """A random decimal string, so the value is exact at any precision."""
    return f"{rng.uniform(lo, hi):.{digits}f}"


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else mpf(0)


def _theta_err(exact, other, index, tau) -> mpf:
    """Relative error, or error relative to the largest term near a zero."""
    peak = 2 * mpmath.exp(-mp.pi * _hp(tau) / 4) if index < 3 else mpf(1)
    if abs(exact) > peak * mpf(2) ** (-mp.prec // 2):
        return _rel(exact, other)
    return abs(exact - other) / peak


def theta_checks(ctx: PrecisionContext, rng: random.Random, per_cell: int = 4) -> List[IdentityCheck]:
    tol = 8 * ctx.rel_tol
    worst_prod = worst_tr = mpf(0)
    n_prod = n_tr = 0
    hi = ctx.with_bits(ctx.bits + 64)
    for index in (1, 2, 3, 4):
        for tau in ("0.5", "1", "3"):
            for _ in range(per_cell):
                p = ThetaPoint(index, _dec(rng, -1, 1), tau)
                with ctx.workprec():
                    worst_prod = max(worst_prod, _theta_err(theta_series(p, ctx),
                                                            theta_product(p, ctx), index, tau))
                n_prod += 1
        for tau in ("0.2", "0.5", "2"):
            for _ in range(per_cell):
                p = ThetaPoint(index, _dec(rng, -1, 1), tau)
                s = theta_series(p, hi)
                t = theta_transformed(p, ctx)
                with ctx.workprec():
                    worst_tr = max(worst_tr, _theta_err(s, t.to_hp(), index, tau))
                n_tr += 1
    return [IdentityCheck("theta_product_vs_series", n_prod, float(worst_prod), tol),
            IdentityCheck("theta_transform_vs_series", n_tr, float(worst_tr), tol)]


def eta_check(ctx: PrecisionContext) -> IdentityCheck:
    """``eta(i/t) = sqrt(t) eta(i t)`` with both sides from the product."""
    worst = mpf(0)
    ts = ("2", "5", "17")
    for t in ts:
        with ctx.workprec():
            tt = mpf(_hp(t))
            lhs = _eta_direct(1 / tt, ctx)
            rhs = mpmath.sqrt(tt) * _eta_direct(tt, ctx)
            worst = max(worst, abs(lhs - rhs) / lhs)
    return IdentityCheck("eta_transform", len(ts), float(worst), ctx.rel_tol)


def _route_pair(fn: Callable, *args, **kw):
    return fn(*args, route="series", **kw), fn(*args, route="reduction", **kw)


def _random_spec(rng: random.Random) -> HypergeometricSpec:
    while True:
        r = rng.randint(0, 2)
        s = rng.randint(0, 3)
        if s + 1 - r > 0:
            return HypergeometricSpec(tuple(_dec(rng, 0.2, 2.5, 3) for _ in range(r)),
                                      tuple(_dec(rng, 0.2, 2.5, 3) for _ in range(s)))


def route_checks(ctx: PrecisionContext, rng: random.Random, per_nome: int = 4) -> List[IdentityCheck]:
    """Defining series against the g/h reduction for every named family."""
    tol = 8 * ctx.rel_tol
    worst = {k: mpf(0) for k in ("ramanujan", "jackson", "ismail_masson", "stieltjes_wigert",
                                 "q_laguerre", "confluent", "g_term_ratio")}
    counts = dict.fromkeys(worst, 0)

    def note(key, a, b):
        with ctx.workprec():
            worst[key] = max(worst[key], _rel(a, b))
        counts[key] += 1

    for q in NOMES:
        for _ in range(per_nome):
            note("ramanujan", *_route_pair(ramanujan_aq, _dec(rng, -3, 3), q, ctx))
            nu = _dec(rng, -0.9, 3, 3)
            y = mpf(_dec(rng, 0.1, 4))
            z = y if rng.random() < 0.5 else mpc(0, y)
            note("jackson", *_route_pair(jackson_qbessel2, z, nu, q, ctx))
            n = rng.randint(0, 20)
            xi = _dec(rng, -2, 2)
            note("ismail_masson", *_route_pair(ismail_masson, n, xi, q, ctx))
            x = _dec(rng, -5, 5)
            note("stieltjes_wigert", *_route_pair(stieltjes_wigert, n, x, q, ctx))
            alpha = _dec(rng, -0.9, 3, 3)
            note("q_laguerre", *_route_pair(q_laguerre, n, alpha, x, q, ctx))
            spec = _random_spec(rng)
            note("confluent", *_route_pair(basic_hypergeometric, spec, _dec(rng, -3, 3), q, ctx))
            p = SeriesParams(spec.alphas, spec.betas, (), spec.ell)
            zz = _dec(rng, -3, 3)
            k = rng.randint(0, 15)
            inc = g_terms(p, zz, q, k + 1, ctx)[-1]
            note("g_term_ratio", inc, g_term(p, k, zz, q, ctx))
    return [IdentityCheck(f"two_route_{k}", counts[k], float(worst[k]), tol) for k in worst]


def chi_check(limit: int = 10_000) -> IdentityCheck:
    bad = 0
    for n in range(limit + 1):
        c = chi(n)
        forms = (2 * (n / 2 - n // 2), n - 2 * (n // 2), (n + 1) // 2 - n // 2)
        if any(f != c for f in forms):
            bad += 1
        if (n + 1) // 2 * 2 != n + c or n // 2 * 2 != n - c:
            bad += 1
        if (n * n - c) % 4:
            bad += 1
    return IdentityCheck("chi_parity_identities", limit + 1, float(bad), 0.0)


def run_identity_suite(ctx: PrecisionContext, seed: int = 0, per_cell: int = 4) -> List[IdentityCheck]:
    rng = random.Random(seed)
    return (theta_checks(ctx, rng, per_cell) + [eta_check(ctx)]
            + route_checks(ctx, rng, per_cell) + [chi_check()])
