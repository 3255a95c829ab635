"""Leading-order q -> 1 approximants of the g/h families on admissible scales.

Each approximant returns an :class:`AsymResult` whose ``main`` LogForm holds
the exponential/power prefactor, with the oscillating cosine of the
``plus`` branches kept apart in ``oscillatory_factor`` so callers can detect
points near a zero of the cosine.

Branch ``minus`` is the series evaluated at ``-q^{-...} z`` and branch
``plus`` at ``+q^{-...} z``.

Two options reproduce alternative readings of the formulas:

``parity`` (h-families)
    ``"printed"`` uses the shift ``(n - chi(n)) / (2 lam)`` and the extra
    ``(n-1) chi(n)`` term; ``"uniform"`` uses ``n / (2 lam)`` for both
    parities, which is what the Gaussian sum actually produces for odd ``n``.
``form`` (confluent)
    ``"printed"`` multiplies the g approximant by ``(q, b; q)_inf / (a; q)_inf``;
    ``"reciprocal"`` divides by it, matching the definition of the series.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import mpmath
from mpmath import mp, mpf

from .numeric import LogForm
from .qkernel import _hp, euler_gamma, lemma2_qq_inf_asym, lemma3_qx_inf_asym
from .series import HypergeometricSpec


class InvalidParameters(ValueError):
    pass


def chi(n: int) -> int:
    """1 for odd ``n``, 0 for even ``n``."""
    return n & 1


@dataclass(frozen=True)
class AdmissibleScale:
    """``lam_n = n^beta log^gamma n`` (``power_log``) or ``log^gamma n``
    (``log_power``)."""

    kind: str = "power_log"
    beta: float = 0.4
    gamma: float = 0.0

    def __post_init__(self):
        if self.kind == "power_log":
            if not (0 < self.beta < 0.5 and self.gamma >= 0 and self.beta + self.gamma > 0):
                raise InvalidParameters(
                    f"power_log scale needs 0 < beta < 1/2 and gamma >= 0, got "
                    f"beta={self.beta}, gamma={self.gamma}")
        elif self.kind == "log_power":
            if not self.gamma > 1:
                raise InvalidParameters(f"log_power scale needs gamma > 1, got {self.gamma}")
        else:
            raise InvalidParameters(f"unknown scale kind {self.kind!r}")

    def value(self, n: int) -> mpf:
        if n < 2:
            raise InvalidParameters("scales are defined for n >= 2")
        ln = mpmath.log(n)
        if self.kind == "power_log":
            return mpf(n) ** _hp(self.beta) * ln ** _hp(self.gamma)
        return ln ** _hp(self.gamma)


def scale_value(s: AdmissibleScale, n: int) -> mpf:
    return s.value(n)


LamLike = Union[AdmissibleScale, float, str, mpf]


def _lam(s: LamLike, n: int) -> mpf:
    if isinstance(s, AdmissibleScale):
        return s.value(n)
    return mpf(_hp(s))


def _branch(branch: str) -> str:
    b = {"minus": "minus", "minus_argument": "minus",
         "plus": "plus", "plus_argument": "plus"}.get(branch)
    if b is None:
        raise ValueError(f"branch must be 'minus' or 'plus', got {branch!r}")
    return b


@dataclass(frozen=True)
class AsymResult:
    main: LogForm
    oscillatory_factor: mpf
    claimed_error_order: LogForm
    branch: str

    @property
    def prediction(self) -> LogForm:
        """``main * oscillatory_factor`` (zero LogForm at an exact cosine zero)."""
        if self.oscillatory_factor == 1:
            return self.main
        return self.main * LogForm.from_hp(self.oscillatory_factor)

    def near_zero(self, threshold=0.2) -> bool:
        return abs(self.oscillatory_factor) < threshold


def _exp_order(rate) -> LogForm:
    return LogForm(-rate)


def g_asym(branch: str, ell, v, n: int, s: LamLike) -> AsymResult:
    """Approximant of ``g(-+ q^{-4 n ell} e^{2 pi v}; q)`` with any a/b exponents."""
    b = _branch(branch)
    lam = _lam(s, n)
    ell = mpf(_hp(ell))
    v = mpf(_hp(v))
    base = mp.pi * lam / ell * (v + 2 * n * ell / lam) ** 2 + mpmath.log(lam / ell) / 2
    if b == "minus":
        return AsymResult(LogForm(base), mpf(1), _exp_order(mp.pi * lam / ell), b)
    main = LogForm(base - mp.pi * lam / (4 * ell) + mpmath.log(2))
    return AsymResult(main, mpmath.cos(mp.pi * lam * v / ell),
                      _exp_order(2 * mp.pi * lam / ell), b)


def aq_asym(branch: str, v, n: int, s: LamLike) -> AsymResult:
    """Approximant of Ramanujan's ``A_q(-+ q^{-4n} e^{2 pi v})``."""
    b = _branch(branch)
    lam = _lam(s, n)
    v = mpf(_hp(v))
    sq = mp.pi * lam * (v + 2 * n / lam) ** 2 - mp.pi / (24 * lam)
    if b == "minus":
        main = LogForm(sq + mp.pi * lam / 6 - mpmath.log(2) / 2)
        return AsymResult(main, mpf(1), _exp_order(mp.pi * lam), b)
    main = LogForm(sq - mp.pi * lam / 12 + mpmath.log(2) / 2)
    return AsymResult(main, mpmath.cos(mp.pi * lam * v), _exp_order(2 * mp.pi * lam), b)


def jackson_asym(branch: str, v, nu, n: int, s: LamLike) -> AsymResult:
    """Approximant of ``J_nu^(2)(2 i sqrt(z q^-nu) q^-2n; q)`` (minus) and
    ``J_nu^(2)(2 sqrt(z q^-nu) q^-2n; q)`` (plus), ``z = e^{2 pi v}``."""
    b = _branch(branch)
    lam = _lam(s, n)
    v = mpf(_hp(v))
    nu = mpf(_hp(nu))
    if not nu > -1:
        raise InvalidParameters("nu must exceed -1")
    sq = (mp.pi * lam * (v + (4 * n + nu) / (2 * lam)) ** 2
          - mp.pi / (12 * lam) + nu * nu * mp.pi / (4 * lam) - mpmath.log(lam) / 2)
    if b == "minus":
        main = LogForm(sq + mp.pi * lam / 3 - mpmath.log(2), nu * mp.pi / 2)
        return AsymResult(main, mpf(1), _exp_order(mp.pi * lam), b)
    main = LogForm(sq + mp.pi * lam / 12)
    return AsymResult(main, mpmath.cos(mp.pi * lam * v), _exp_order(2 * mp.pi * lam), b)


def _confluent_order(lam) -> LogForm:
    return LogForm(2 * mpmath.log(mpmath.log(lam)) - mpmath.log(lam))


def confluent_asym(branch: str, spec: HypergeometricSpec, v, n: int, s: LamLike,
                   gamma_denominator: bool = True, form: str = "printed") -> AsymResult:
    """Approximant of ``s-phi-r(q^alphas; q^betas | q, -+ z q^{-ell(4n-1)})``.

    ``gamma_denominator=False`` puts ``prod beta_j`` instead of
    ``prod Gamma(beta_j)`` in the plus-branch denominator.
    """
    b = _branch(branch)
    if form not in ("printed", "reciprocal"):
        raise ValueError("form must be 'printed' or 'reciprocal'")
    lam = _lam(s, n)
    v = mpf(_hp(v))
    ell = mpf(_hp(spec.ell))
    rho = mpf(spec.rho)
    log_ga = sum(mpmath.log(euler_gamma(_hp(a))) for a in spec.alphas)
    if b == "plus" and not gamma_denominator:
        log_gb = sum(mpmath.log(_hp(x)) for x in spec.betas)
    else:
        log_gb = sum(mpmath.log(euler_gamma(_hp(x))) for x in spec.betas)
    # (q, b; q)_inf / (a; q)_inf ~ 2^ell pi^(rho+ell) prod G(a) / (lam^rho e^{ell pi lam/3} prod G(b))
    pref = (ell * mpmath.log(2) + (rho + ell) * mpmath.log(mp.pi) + log_ga - log_gb
            - rho * mpmath.log(lam) - ell * mp.pi * lam / 3)
    if form == "reciprocal":
        pref = -pref
    g = g_asym(b, ell, v, n, lam)
    main = LogForm(pref) * g.main
    return AsymResult(main, g.oscillatory_factor, _confluent_order(lam), b)


def confluent_prefactor_composition(branch: str, spec: HypergeometricSpec, v, n: int,
                                    s: LamLike, form: str = "printed") -> LogForm:
    """The confluent main term rebuilt from the ``(q^x;q)_inf`` approximants
    and the g approximant."""
    lam = _lam(s, n)
    pref = lemma3_qx_inf_asym(1, lam)
    for x in spec.betas:
        pref = pref * lemma3_qx_inf_asym(x, lam)
    for x in spec.alphas:
        pref = pref / lemma3_qx_inf_asym(x, lam)
    if form == "reciprocal":
        pref = pref.inverse()
    return pref * g_asym(branch, spec.ell, v, n, lam).main


def _h_shift(n: int, lam, ell, parity: str):
    if parity == "printed":
        c = chi(n)
        return ell * (n - c) / (2 * lam), ell * mp.pi * (n - 1) * c / (2 * lam)
    if parity == "uniform":
        return ell * n / (2 * lam), mpf(0)
    raise ValueError("parity must be 'printed' or 'uniform'")


def h_asym(branch: str, ell, v, n: int, s: LamLike, parity: str = "printed") -> AsymResult:
    """Approximant of ``h_n(-+ z q^{-n ell}; q)``, ``z = e^{2 pi v}``."""
    b = _branch(branch)
    lam = _lam(s, n)
    ell = mpf(_hp(ell))
    v = mpf(_hp(v))
    shift, extra = _h_shift(n, lam, ell, parity)
    base = mp.pi * lam / ell * (v + shift) ** 2 + extra + mpmath.log(lam / ell) / 2
    if b == "minus":
        return AsymResult(LogForm(base), mpf(1), _exp_order(mp.pi * lam / ell), b)
    main = LogForm(base - mp.pi * lam / (4 * ell) + mpmath.log(2))
    return AsymResult(main, mpmath.cos(mp.pi * lam / ell * (v + shift)),
                      _exp_order(2 * mp.pi * lam / ell), b)


def im_asym(branch: str, v, n: int, s: LamLike, parity: str = "printed") -> AsymResult:
    """Approximant of ``h_n(sinh pi(v + i/2) | q)`` (minus) and
    ``h_n(sinh pi v | q)`` (plus)."""
    b = _branch(branch)
    lam = _lam(s, n)
    v = mpf(_hp(v))
    c = chi(n) if parity == "printed" else 0
    if parity not in ("printed", "uniform"):
        raise ValueError("parity must be 'printed' or 'uniform'")
    core = (mp.pi * n * n / (4 * lam) - mp.pi * (1 + 12 * c) / (24 * lam)
            + mp.pi * lam * (v - c / (2 * lam)) ** 2)
    if b == "minus":
        # 1/(-i)^n = i^n
        main = LogForm(core + mp.pi * lam / 6 - mpmath.log(2) / 2, n * mp.pi / 2)
        return AsymResult(main, mpf(1), _exp_order(mp.pi * lam), b)
    main = LogForm(core - mp.pi * lam / 12 + mpmath.log(2) / 2, n * mp.pi)
    osc = mpmath.cos(mp.pi * lam * (v + (n - c) / (2 * lam)))
    return AsymResult(main, osc, _exp_order(2 * mp.pi * lam), b)


def sw_asym(branch: str, v, n: int, s: LamLike, parity: str = "printed") -> AsymResult:
    """Approximant of the Stieltjes-Wigert ``S_n(-+ z q^{-n}; q)``, ``z = e^{2 pi v}``."""
    b = _branch(branch)
    lam = _lam(s, n)
    v = mpf(_hp(v))
    shift, extra = _h_shift(n, lam, mpf(1), parity)
    core = (extra - mp.pi / (12 * lam) + mp.pi * lam * (v + shift) ** 2
            - mpmath.log(lam) / 2)
    if b == "minus":
        main = LogForm(core + mp.pi * lam / 3 - mpmath.log(2))
        return AsymResult(main, mpf(1), _exp_order(mp.pi * lam), b)
    main = LogForm(core + mp.pi * lam / 12)
    return AsymResult(main, mpmath.cos(mp.pi * lam * (v + shift)),
                      _exp_order(2 * mp.pi * lam), b)


def laguerre_asym(branch: str, v, alpha, n: int, s: LamLike, parity: str = "printed") -> AsymResult:
    """Approximant of ``L_n^(alpha)(-+ z q^{-alpha-n}; q)``; the main term does
    not depend on ``alpha``."""
    if not _hp(alpha) > -1:
        raise InvalidParameters("alpha must exceed -1")
    return sw_asym(branch, v, n, s, parity)


def aq_composition(branch: str, v, n: int, s: LamLike) -> LogForm:
    """A_q main term rebuilt as the g main term over the ``(q;q)_inf`` approximant."""
    lam = _lam(s, n)
    return g_asym(branch, 1, v, n, lam).main / lemma2_qq_inf_asym(lam)
