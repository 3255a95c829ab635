"""Precision control, log-domain values and adaptive series summation.

Every high-precision scalar in the package is an :mod:`mpmath` ``mpf`` or
``mpc``.  Their exponent range is unbounded, so values such as ``e**20000``
are representable; the working mantissa precision is the only knob and is
set per call from a :class:`PrecisionContext`.
"""
from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence, Tuple, Union

import mpmath
from mpmath import mp, mpc, mpf

HPReal = mpf
HPComplex = Union[mpf, mpc]

GUARD_BITS = 64


class PrecisionExhausted(ArithmeticError):
    """Raised when the required working precision exceeds ``max_bits``."""


class NonDecayingTail(ArithmeticError):
    """Raised when a series shows no geometric tail within the iteration cap."""


class TotalCancellation(ArithmeticError):
    """Raised when a log-domain combination cancels below representable size."""


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = 256
    rel_tol: float = 1e-50
    max_bits: int = 16384

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError(f"bits must be >= 64, got {self.bits}")
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_bits < self.bits:
            raise ValueError("max_bits must be >= bits")

    def with_bits(self, bits: int) -> "PrecisionContext":
        return replace(self, bits=bits, max_bits=max(self.max_bits, bits))

    def workprec(self):
        """Context manager setting mpmath's working precision to ``bits``."""
        return mp.workprec(self.bits)

    @property
    def tol(self) -> mpf:
        return mpf(self.rel_tol)


DEFAULT_CONTEXT = PrecisionContext()


def headroom_bits(peak_log: float, result_log: float, guard: int = GUARD_BITS) -> int:
    """Bits needed to resolve a sum of size ``e**result_log`` whose largest
    term has size ``e**peak_log``."""
    loss = max(0.0, float(peak_log) - float(result_log))
    return int(math.ceil(loss / math.log(2))) + guard


def _wrap_phase(phi) -> mpf:
    phi = mpf(phi)
    two_pi = 2 * mp.pi
    phi = phi - two_pi * mpmath.floor((phi + mp.pi) / two_pi)
    # floor maps -pi to -pi; the range is (-pi, pi]
    if phi <= -mp.pi:
        phi += two_pi
    return phi


@dataclass(frozen=True)
class LogForm:
    """A nonzero value ``exp(log_mag + i*phase)``; zero is ``log_mag = -inf``."""

    log_mag: mpf
    phase: mpf = mpf(0)

    def __post_init__(self):
        object.__setattr__(self, "log_mag", mpf(self.log_mag))
        if mpmath.isinf(self.log_mag) and self.log_mag < 0:
            object.__setattr__(self, "phase", mpf(0))
        else:
            object.__setattr__(self, "phase", _wrap_phase(self.phase))

    @classmethod
    def zero(cls) -> "LogForm":
        return cls(mpf("-inf"), mpf(0))

    @classmethod
    def from_hp(cls, x) -> "LogForm":
        if x == 0:
            return cls.zero()
        if isinstance(x, mpc):
            return cls(mpmath.log(abs(x)), mpmath.arg(x))
        x = mpf(x)
        return cls(mpmath.log(abs(x)), mp.pi if x < 0 else 0)

    @classmethod
    def from_exponent(cls, w) -> "LogForm":
        """LogForm of ``exp(w)`` for a real or complex exponent ``w``."""
        w = mpmath.mpmathify(w)
        if isinstance(w, mpc):
            return cls(w.real, w.imag)
        return cls(w, 0)

    @property
    def is_zero(self) -> bool:
        return mpmath.isinf(self.log_mag) and self.log_mag < 0

    def to_hp(self) -> HPComplex:
        if self.is_zero:
            return mpf(0)
        mag = mpmath.exp(self.log_mag)
        if self.phase == 0:
            return mag
        if abs(self.phase - mp.pi) < mpf(2) ** (-mp.prec + 8):
            return -mag
        return mpmath.mpc(mag * mpmath.cos(self.phase), mag * mpmath.sin(self.phase))

    def __mul__(self, other: "LogForm") -> "LogForm":
        if not isinstance(other, LogForm):
            other = LogForm.from_hp(other)
        if self.is_zero or other.is_zero:
            return LogForm.zero()
        return LogForm(self.log_mag + other.log_mag, self.phase + other.phase)

    __rmul__ = __mul__

    def __truediv__(self, other: "LogForm") -> "LogForm":
        if not isinstance(other, LogForm):
            other = LogForm.from_hp(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogForm")
        if self.is_zero:
            return LogForm.zero()
        return LogForm(self.log_mag - other.log_mag, self.phase - other.phase)

    def __pow__(self, k: int) -> "LogForm":
        if self.is_zero:
            return LogForm.zero() if k > 0 else LogForm(mpf(0))
        return LogForm(k * self.log_mag, k * self.phase)

    def inverse(self) -> "LogForm":
        return LogForm(mpf(0)) / self

    def __repr__(self):
        return f"LogForm(log_mag={mpmath.nstr(self.log_mag, 15)}, phase={mpmath.nstr(self.phase, 15)})"


def relative_deviation(exact: LogForm, approx: LogForm) -> mpf:
    """``|exact/approx - 1|`` computed without materialising either value."""
    ratio = exact / approx
    w = mpmath.expm1(mpmath.mpc(ratio.log_mag, ratio.phase))
    return abs(w)


def logform_linear_combination(
    terms: Sequence[Tuple[float, LogForm]], ctx: PrecisionContext = DEFAULT_CONTEXT
) -> LogForm:
    """Return ``sum c_i * L_i`` as a LogForm.

    Terms are rescaled by the largest magnitude before summing.  A result
    smaller than the rounding floor of the largest term raises
    :class:`TotalCancellation`; callers must then redo the sum in the HP domain
    at higher precision.
    """
    if not terms:
        raise ValueError("empty linear combination")
    with ctx.workprec():
        live = [(mpf(c), lf) for c, lf in terms if c != 0 and not lf.is_zero]
        if not live:
            return LogForm.zero()
        top = max(lf.log_mag for _, lf in live)
        acc = mpc(0)
        scale = mpf(0)
        for c, lf in live:
            w = c * mpmath.exp(mpc(lf.log_mag - top, lf.phase))
            acc += w
            scale += abs(w)
        if abs(acc) <= scale * mpf(2) ** (-(ctx.bits - 8)):
            raise TotalCancellation(
                "linear combination cancelled below the working precision"
            )
        out = LogForm(top + mpmath.log(abs(acc)), mpmath.arg(acc))
        eps = mpf(2) ** (-(ctx.bits - 8))
        if all(abs(mpmath.sin(lf.phase)) <= eps for _, lf in live):
            # real inputs give a real result; drop rounding noise in the phase
            out = LogForm(out.log_mag, mp.pi if acc.real < 0 else 0)
        return out


# --- series summation ------------------------------------------------------

TermFactory = Callable[[PrecisionContext], Iterable]


@dataclass(frozen=True)
class SeriesSum:
    value: HPComplex
    bits_used: int
    terms_used: int
    escalated: bool


_TRACKER: contextvars.ContextVar = contextvars.ContextVar("series_tracker", default=None)


@dataclass
class PrecisionUsage:
    """Largest precision and escalation status seen by tracked summations."""

    bits_used: int = 0
    escalated: bool = False

    def record(self, s: SeriesSum) -> None:
        self.bits_used = max(self.bits_used, s.bits_used)
        self.escalated = self.escalated or s.escalated


@contextlib.contextmanager
def track_precision():
    """Collect :class:`PrecisionUsage` over every ``sum_series`` call in the block."""
    usage = PrecisionUsage()
    token = _TRACKER.set(usage)
    try:
        yield usage
    finally:
        _TRACKER.reset(token)


def _finish(s: SeriesSum) -> SeriesSum:
    usage = _TRACKER.get()
    if usage is not None:
        usage.record(s)
    return s


def _round_context(ctx: PrecisionContext, bits: int) -> PrecisionContext:
    tol = min(mpf(ctx.rel_tol), mpf(2) ** (-(bits - GUARD_BITS // 2)))
    tol = max(tol, mpf(2) ** (-bits))
    return PrecisionContext(bits=bits, rel_tol=tol, max_bits=max(ctx.max_bits, bits))


def _sum_once(factory: TermFactory, peak_hint: int, rctx: PrecisionContext,
              max_terms: int, absolute_floor: bool):
    tol = rctx.tol
    acc = mpf(0)
    peak = mpf(0)
    prev_mag = None
    count = 0
    for k, item in enumerate(factory(rctx)):
        if isinstance(item, tuple):
            term, majorant = item
            majorant = mpf(majorant)
        else:
            term = item
            majorant = abs(term)
        acc += term
        count = k + 1
        if majorant > peak:
            peak = majorant
        if k >= max_terms:
            raise NonDecayingTail(f"no geometric tail after {max_terms} terms")
        if k >= peak_hint and prev_mag is not None and prev_mag > 0:
            ratio = majorant / prev_mag
            if ratio < 1:
                tail = majorant * ratio / (1 - ratio)
                scale = abs(acc)
                if absolute_floor:
                    scale = max(scale, peak)
                else:
                    scale = max(scale, peak * mpf(2) ** (-rctx.bits))
                if tail <= tol * scale:
                    break
        if k >= peak_hint and majorant == 0 and peak > 0 and prev_mag == 0:
            break
        prev_mag = majorant
    return acc, peak, count


def sum_series_detailed(
    term_factory: TermFactory,
    peak_hint: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    start_bits: int | None = None,
    max_terms: int = 200_000,
    absolute_floor: bool = False,
) -> SeriesSum:
    """Sum a series whose terms eventually decay super-geometrically.

    ``term_factory(rctx)`` must return a fresh iterable of terms computed at
    ``rctx.bits``; items may be ``(term, majorant)`` pairs where the majorant
    bounds ``|term|`` and is used for the tail test.  Finite iterables are
    summed completely.  The sum is recomputed at doubled precision until two
    successive rounds agree to ``ctx.rel_tol``.  With ``absolute_floor`` the
    agreement is measured against the largest term instead of the result,
    which is the meaningful test near zeros of the summed function.
    """
    bits = max(ctx.bits, start_bits or 0)
    if bits > ctx.max_bits:
        raise PrecisionExhausted(f"headroom needs {bits} bits > max_bits={ctx.max_bits}")
    schedule = [bits]
    while schedule[-1] < ctx.max_bits:
        schedule.append(min(2 * schedule[-1], ctx.max_bits))
    tol = mpf(ctx.rel_tol)
    prev = None
    for i, bits in enumerate(schedule):
        rctx = _round_context(ctx, bits)
        with mp.workprec(bits):
            value, peak, count = _sum_once(term_factory, peak_hint, rctx,
                                           max_terms, absolute_floor)
            if len(schedule) == 1:
                return _finish(SeriesSum(value, bits, count, False))
            if prev is not None:
                diff = abs(value - prev)
                scale = abs(value)
                if absolute_floor:
                    scale = max(scale, peak * tol)
                if diff <= tol * scale:
                    return _finish(SeriesSum(value, bits, count, i > 1))
        prev = value
    raise PrecisionExhausted(
        f"no agreement to rel_tol={ctx.rel_tol} within {ctx.max_bits} bits"
    )


def sum_series(term_factory: TermFactory, peak_hint: int,
               ctx: PrecisionContext = DEFAULT_CONTEXT, **kwargs) -> HPComplex:
    return sum_series_detailed(term_factory, peak_hint, ctx, **kwargs).value
