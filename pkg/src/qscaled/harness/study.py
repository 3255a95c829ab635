"""Convergence studies (exact value against approximant over an (n, v) grid)
and sweeps of the remainder bounds of the g/h theta reductions."""
from __future__ import annotations

import math
import random
import statistics
import time
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp

from ..numeric import LogForm, PrecisionExhausted, relative_deviation, track_precision
from ..qkernel import (
    QParam,
    _hp,
    euler_gamma,
    lemma1_remainders,
    lemma2_qq_inf_asym,
    lemma3_qx_inf_asym,
    q_gamma,
    qpoch_infinite,
)
from ..series import SeriesParams, lemma4_reduction, lemma5_reduction
from .config import BoundsConfig, StudyConfig
from .families import asym_value, exact_value, expected_rate

NEAR_ZERO = "near-cos-zero"
ESCALATED = "precision-escalated"
EXHAUSTED = "precision-exhausted"


@dataclass(frozen=True)
class StudyRow:
    n: int
    lambda_n: float
    v: float
    exact_log_mag: float
    exact_phase: float
    asym_log_mag: float
    asym_phase: float
    oscillatory_factor: float
    rel_error: float
    claimed_order_value: float
    bits_used: int
    wall_time_ms: float
    flags: Tuple[str, ...] = ()


ROW_FIELDS = tuple(StudyRow.__dataclass_fields__)


@dataclass
class StudyResult:
    rows: List[StudyRow]
    summary: Dict[str, Any]
    name: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.summary.get("passed"))


def compute_row(cfg: StudyConfig, n: int, v: str) -> StudyRow:
    ctx = cfg.precision
    t0 = time.perf_counter()
    flags: List[str] = []
    with ctx.workprec():
        lam = cfg.scale.value(n)
        asym = asym_value(cfg.family, cfg.branch, n, v, cfg.scale, cfg.family_params)
        pred = asym.prediction
        expected = None if pred.is_zero else float(pred.log_mag)
    with track_precision() as usage:
        try:
            exact = exact_value(cfg.family, cfg.branch, n, v, lam, cfg.family_params, ctx,
                                expected_log=expected)
        except PrecisionExhausted:
            exact = None
    with ctx.workprec():
        osc = asym.oscillatory_factor
        if abs(osc) < cfg.cos_threshold:
            flags.append(NEAR_ZERO)
        if exact is None:
            flags.append(EXHAUSTED)
            e_mag = e_phase = rel = math.nan
        else:
            rel = float(relative_deviation(exact, pred)) if not pred.is_zero else math.inf
            e_mag, e_phase = float(exact.log_mag), float(exact.phase)
        if usage.escalated or usage.bits_used > 2 * ctx.bits:
            flags.append(ESCALATED)
        claimed = float(mpmath.exp(asym.claimed_error_order.log_mag))
        row = StudyRow(
            n=n, lambda_n=float(lam), v=float(v),
            exact_log_mag=e_mag, exact_phase=e_phase,
            asym_log_mag=float(asym.main.log_mag), asym_phase=float(asym.main.phase),
            oscillatory_factor=float(osc), rel_error=rel, claimed_order_value=claimed,
            bits_used=int(usage.bits_used or ctx.bits),
            wall_time_ms=round((time.perf_counter() - t0) * 1000, 3) if cfg.timings else 0.0,
            flags=tuple(flags),
        )
    return row


def _row_task(args):
    cfg, n, v = args
    return compute_row(cfg, n, v)


def _slope(xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
    if len(xs) < 2 or len(set(xs)) < 2:
        return None
    return statistics.linear_regression(xs, ys).slope


def _usable(row: StudyRow) -> bool:
    return (NEAR_ZERO not in row.flags and EXHAUSTED not in row.flags
            and math.isfinite(row.rel_error) and row.rel_error > 0)


def summarize(cfg: StudyConfig, rows: Sequence[StudyRow]) -> Dict[str, Any]:
    """Fit decay rates per v and decide pass/fail."""
    excluded = sum(1 for r in rows if NEAR_ZERO in r.flags)
    exhausted = sum(1 for r in rows if EXHAUSTED in r.flags)
    out: Dict[str, Any] = {
        "family": cfg.family,
        "branch": cfg.branch,
        "family_params": {k: (str(v) if not isinstance(v, (bool, int, tuple)) else
                              (list(v) if isinstance(v, tuple) else v))
                          for k, v in sorted(cfg.family_params.items())},
        "rows": len(rows),
        "excluded_near_zero": excluded,
        "precision_exhausted": exhausted,
    }
    top_n = max(cfg.n_grid)
    terminal = [r.rel_error for r in rows if r.n == top_n and _usable(r)]
    out["terminal_max_rel_error"] = max(terminal) if terminal else None
    per_v = []
    if cfg.family == "confluent":
        out["kind"] = "polynomial"
        for v in sorted({r.v for r in rows}):
            pts = [r for r in rows if r.v == v and _usable(r)]
            ratios = [r.rel_error / r.claimed_order_value for r in pts]
            half = pts[len(pts) // 2:] if len(pts) > 1 else pts
            trend = _slope([r.lambda_n for r in half],
                           [r.rel_error / r.claimed_order_value for r in half])
            loglog = _slope([math.log(r.claimed_order_value) for r in pts],
                            [math.log(r.rel_error) for r in pts])
            ok = bool(ratios) and all(math.isfinite(x) for x in ratios) and trend is not None and trend <= 0
            per_v.append({"v": v, "points": len(pts), "max_ratio": max(ratios) if ratios else None,
                          "terminal_ratio": ratios[-1] if ratios else None,
                          "top_half_trend": trend, "loglog_slope": loglog, "passed": ok})
    else:
        rate = expected_rate(cfg.family, cfg.branch, cfg.family_params)
        out["kind"] = "exponential"
        out["expected_slope"] = -rate
        out["slope_band"] = [-1.25 * rate, -0.75 * rate]
        for v in sorted({r.v for r in rows}):
            pts = [r for r in rows if r.v == v and _usable(r)]
            slope = _slope([r.lambda_n for r in pts], [math.log(r.rel_error) for r in pts])
            consts = [r.rel_error * abs(r.oscillatory_factor) / r.claimed_order_value for r in pts]
            entry = {"v": v, "points": len(pts), "slope": slope,
                     "slope_over_rate": (slope / rate) if slope is not None else None,
                     "fitted_constant": max(consts) if consts else None}
            if slope is None:
                entry["passed"] = None
            else:
                entry["passed"] = bool(-1.25 * rate <= slope <= -0.75 * rate)
            per_v.append(entry)
    out["per_v"] = per_v
    fitted = [e for e in per_v if e["passed"] is not None]
    passed = bool(fitted) and all(e["passed"] for e in fitted)
    if cfg.terminal_tol is not None:
        t_ok = out["terminal_max_rel_error"] is not None and out["terminal_max_rel_error"] < cfg.terminal_tol
        out["terminal_tol"] = cfg.terminal_tol
        out["terminal_passed"] = t_ok
        passed = passed and t_ok
    out["passed"] = passed
    return out


def run_study(cfg: StudyConfig, executor: Optional[Executor] = None, name: str = "") -> StudyResult:
    """Evaluate every grid point, order rows by (n, v) and summarize."""
    tasks = [(cfg, n, v) for n in cfg.n_grid for v in cfg.v_grid]
    if executor is not None:
        rows = list(executor.map(_row_task, tasks))
    elif cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_row_task, tasks))
    else:
        rows = [_row_task(t) for t in tasks]
    rows.sort(key=lambda r: (r.n, r.v))
    return StudyResult(rows, summarize(cfg, rows), name)


def exhausted_fraction(results: Sequence[StudyResult]) -> float:
    rows = [r for res in results for r in res.rows]
    if not rows:
        return 0.0
    return sum(1 for r in rows if EXHAUSTED in r.flags) / len(rows)


# --- remainder-bound sweeps -------------------------------------------------

LEMMA2_LAMBDAS = (5, 10, 20)
LEMMA3_LAMBDAS = (10, 20, 40, 80)
LEMMA3_XS = ("0.5", "2")
GAMMA_Q_XS = ("0.5", "1.5", "3.2")


@dataclass(frozen=True)
class BoundRow:
    check: str
    n: int
    v: float
    x: float
    q: float
    lam: float
    remainder: float
    bound: float
    margin: float
    ok: bool


BOUND_FIELDS = tuple(BoundRow.__dataclass_fields__)


def _lemma1_samples(cfg: BoundsConfig):
    rng = random.Random(cfg.seed)
    out = []
    while len(out) < cfg.samples:
        q = round(rng.uniform(0.1, 0.9), 6)
        a = round(rng.uniform(-2.0, 2.0), 6)
        n = rng.randint(0, 30)
        # admissible when |a| q^n / (1 - q) < 1/2
        if a != 0 and abs(a) * q ** n / (1 - q) < 0.5 * (1 - 1e-9):
            out.append((repr(a), repr(q), n))
    return out


def _row(check, remainder, bound, n=0, v=math.nan, x=math.nan, q=math.nan, lam=math.nan) -> BoundRow:
    m = bound - remainder
    return BoundRow(check, n, float(v), float(x), float(q), float(lam), float(remainder),
                    float(bound), float(m), bool(m >= 0))


def _bound_task(args) -> List[BoundRow]:
    kind, cfg, point = args
    ctx = cfg.precision
    if kind == "1":
        a, q, n = point
        r1, r2, bound = lemma1_remainders(a, q, n, ctx)
        with ctx.workprec():
            return [_row("1", abs(r), bound, n=n, x=_hp(a), q=_hp(q)) for r in (r1, r2)]
    if kind == "2":
        lam = point
        # resolve e^{-4 pi lam} relative to 1
        bits = ctx.bits + int(4 * math.pi * lam / math.log(2)) + 64
        hi = ctx.with_bits(bits)
        qp = QParam(lam=lam)
        with hi.workprec():
            exact = LogForm.from_hp(qpoch_infinite(qp.q, qp, hi))
            dev = relative_deviation(exact, lemma2_qq_inf_asym(lam))
            return [_row("2", dev, 10 * mpmath.exp(-4 * mp.pi * lam), q=qp.q, lam=lam)]
    if kind in ("3", "gamma_q"):
        x = point
        rows = []
        prev = mpmath.inf
        for lam in LEMMA3_LAMBDAS:
            qp = QParam(lam=lam)
            with ctx.workprec():
                if kind == "3":
                    exact = LogForm.from_hp(qpoch_infinite(qp.power(_hp(x)), qp, ctx))
                    dev = relative_deviation(exact, lemma3_qx_inf_asym(x, lam, ctx))
                    bound = prev
                else:
                    dev = abs(q_gamma(x, qp, ctx) / euler_gamma(x, ctx) - 1)
                    one_q = 1 - qp.q
                    bound = min(prev, 100 * one_q * mpmath.log(one_q) ** 2)
                rows.append(_row(kind, dev, bound, x=_hp(x), q=qp.q, lam=lam))
            prev = dev
        return rows
    n, v = point
    with ctx.workprec():
        lam = cfg.scale.value(n)
        z = mpmath.exp(2 * mp.pi * _hp(v))
    p = SeriesParams(ell=cfg.ell)
    red = (lemma4_reduction if kind == "4" else lemma5_reduction)(p, z, n, QParam(lam=lam), ctx)
    with ctx.workprec():
        return [_row(kind, abs(red.residual), red.bound, n=n, v=_hp(v),
                     q=mpmath.exp(-mp.pi / lam), lam=lam)]


def run_bound_checks(cfg: BoundsConfig, executor: Optional[Executor] = None):
    """Sweep the selected checks; returns ``(rows, summary)``."""
    tasks = []
    for k in cfg.lemmas:
        if k == "1":
            tasks += [(k, cfg, pt) for pt in _lemma1_samples(cfg)]
        elif k == "2":
            tasks += [(k, cfg, lam) for lam in LEMMA2_LAMBDAS]
        elif k == "3":
            tasks += [(k, cfg, x) for x in LEMMA3_XS]
        elif k == "gamma_q":
            tasks += [(k, cfg, x) for x in GAMMA_Q_XS]
        elif k == "4":
            tasks += [(k, cfg, (n, v)) for n in cfg.n_grid_4 for v in cfg.v_grid]
        else:
            tasks += [(k, cfg, (n, v)) for n in cfg.n_grid_5 for v in cfg.v_grid]
    if executor is not None:
        chunks = list(executor.map(_bound_task, tasks))
    elif cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_bound_task, tasks))
    else:
        chunks = [_bound_task(t) for t in tasks]
    rows = [r for c in chunks for r in c]
    summary: Dict[str, Any] = {}
    for k in cfg.lemmas:
        rs = [r for r in rows if r.check == k]
        bad = [{"n": r.n, "v": r.v, "x": r.x, "lam": r.lam, "remainder": r.remainder,
                "bound": r.bound} for r in rs if not r.ok]
        summary[k] = {"checks": len(rs), "min_margin": min(r.margin for r in rs),
                      "violations": bad, "passed": not bad}
    summary["passed"] = all(summary[k]["passed"] for k in cfg.lemmas)
    return rows, summary
