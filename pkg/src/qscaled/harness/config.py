"""Study and bound-sweep configuration, plus the flat ``key = value`` file format.

A config file holds one ``key = value`` pair per line; ``#`` starts a comment.
Keys are the long CLI flag names without the leading dashes.  Keys that may
repeat on the command line (``v``, ``n``, ``lemma``) accumulate across lines
and also accept comma-separated values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

from ..asymptotics import AdmissibleScale, InvalidParameters
from ..numeric import PrecisionContext
from .families import FAMILIES

REPEATABLE = ("v", "n", "lemma", "n4", "n5")


class InvalidConfig(ValueError):
    pass


def parse_config_text(text: str) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfig(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if not key:
            raise InvalidConfig(f"line {lineno}: empty key")
        if key in REPEATABLE:
            out.setdefault(key, []).extend(x.strip() for x in value.split(",") if x.strip())
        else:
            out[key] = value
    return out


def parse_config_sections(text: str) -> List[Tuple[str, Dict[str, Any]]]:
    """Split a config into ``[name]`` sections.

    Keys above the first section header are shared; a section's own keys
    replace shared ones.  A file without headers is a single unnamed section.
    """
    shared_lines: List[str] = []
    sections: List[Tuple[str, List[str]]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise InvalidConfig("empty section name")
            if any(name == n for n, _ in sections):
                raise InvalidConfig(f"duplicate section [{name}]")
            sections.append((name, []))
        elif sections:
            sections[-1][1].append(raw)
        else:
            shared_lines.append(raw)
    shared = parse_config_text("\n".join(shared_lines))
    if not sections:
        return [("", shared)]
    out = []
    for name, lines in sections:
        merged = dict(shared)
        merged.update(parse_config_text("\n".join(lines)))
        out.append((name, merged))
    return out


def load_config_file(path) -> List[Tuple[str, Dict[str, Any]]]:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_sections(fh.read())
    except OSError as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc}") from exc


def _as_bool(x) -> bool:
    if isinstance(x, bool):
        return x
    s = str(x).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise InvalidConfig(f"not a boolean: {x!r}")


def _int_list(values) -> List[int]:
    try:
        return [int(x) for x in values]
    except ValueError as exc:
        raise InvalidConfig(f"bad integer list {values!r}") from exc


def _split(value) -> List[str]:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return [str(x) for x in value]
    return [x.strip() for x in str(value).split(",") if x.strip()]


def n_grid_from(opts: Mapping[str, Any]) -> List[int]:
    if opts.get("n"):
        return _int_list(_split(opts["n"]))
    if opts.get("n-start") is not None and opts.get("n-stop") is not None:
        start, stop = int(opts["n-start"]), int(opts["n-stop"])
        step = int(opts.get("n-step") or 1)
        if step <= 0:
            raise InvalidConfig("n-step must be positive")
        return list(range(start, stop + 1, step))
    return []


def precision_from(opts: Mapping[str, Any]) -> PrecisionContext:
    try:
        return PrecisionContext(
            bits=int(opts.get("precision-bits") or 256),
            rel_tol=float(opts.get("rel-tol") or 1e-50),
            max_bits=int(opts.get("max-bits") or 16384),
        )
    except ValueError as exc:
        raise InvalidConfig(str(exc)) from exc


def scale_from(opts: Mapping[str, Any]) -> AdmissibleScale:
    try:
        return AdmissibleScale(
            kind=str(opts.get("scale-kind") or "power_log"),
            beta=float(opts.get("scale-beta") if opts.get("scale-beta") is not None else 0.4),
            gamma=float(opts.get("scale-gamma") if opts.get("scale-gamma") is not None else 0.0),
        )
    except (InvalidParameters, ValueError) as exc:
        raise InvalidConfig(str(exc)) from exc


@dataclass(frozen=True)
class StudyConfig:
    family: str
    branch: str
    scale: AdmissibleScale
    v_grid: Tuple[str, ...]
    n_grid: Tuple[int, ...]
    family_params: Dict[str, Any] = field(default_factory=dict)
    precision: PrecisionContext = PrecisionContext()
    seed: int = 0
    cos_threshold: float = 0.2
    v_max: float = 1.0
    terminal_tol: Optional[float] = None
    workers: int = 1
    timings: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidConfig(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.branch not in ("plus", "minus"):
            raise InvalidConfig("branch must be 'plus' or 'minus'")
        if not self.v_grid:
            raise InvalidConfig("v grid is empty")
        if not self.n_grid:
            raise InvalidConfig("n grid is empty")
        vs = [float(v) for v in self.v_grid]
        if any(abs(v) > self.v_max for v in vs):
            raise InvalidConfig(f"v grid leaves [-{self.v_max}, {self.v_max}]")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise InvalidConfig("n grid must be strictly increasing")
        if self.n_grid[0] < 2:
            raise InvalidConfig("n grid must start at n >= 2")
        if self.workers < 1:
            raise InvalidConfig("workers must be >= 1")

    @classmethod
    def from_options(cls, opts: Mapping[str, Any]) -> "StudyConfig":
        if not opts.get("family"):
            raise InvalidConfig("family is required")
        params: Dict[str, Any] = {}
        if opts.get("ell") is not None:
            try:
                params["ell"] = Fraction(str(opts["ell"]))
            except (ValueError, ZeroDivisionError) as exc:
                raise InvalidConfig(f"bad ell {opts['ell']!r}") from exc
        for key in ("nu", "alpha"):
            if opts.get(key) is not None:
                params[key] = str(opts[key])
        for key in ("alphas", "betas", "gammas"):
            if opts.get(key) is not None:
                params[key] = tuple(_split(opts[key]))
        if opts.get("parity") is not None:
            if opts["parity"] not in ("printed", "uniform"):
                raise InvalidConfig("parity must be 'printed' or 'uniform'")
            params["parity"] = opts["parity"]
        if opts.get("form") is not None:
            if opts["form"] not in ("printed", "reciprocal"):
                raise InvalidConfig("form must be 'printed' or 'reciprocal'")
            params["form"] = opts["form"]
        if opts.get("gamma-denominator") is not None:
            params["gamma_denominator"] = _as_bool(opts["gamma-denominator"])
        if opts.get("laguerre-sign") is not None:
            sign = int(opts["laguerre-sign"])
            if sign not in (-1, 1):
                raise InvalidConfig("laguerre-sign must be -1 or 1")
            params["laguerre_sign"] = sign
        terminal = opts.get("terminal-tol")
        try:
            return cls(
                family=str(opts["family"]),
                branch=str(opts.get("branch") or "minus"),
                scale=scale_from(opts),
                v_grid=tuple(_split(opts.get("v"))),
                n_grid=tuple(n_grid_from(opts)),
                family_params=params,
                precision=precision_from(opts),
                seed=int(opts.get("seed") or 0),
                cos_threshold=float(opts.get("cos-threshold") or 0.2),
                v_max=float(opts.get("v-max") or 1.0),
                terminal_tol=float(terminal) if terminal is not None else None,
                workers=int(opts.get("workers") or 1),
                timings=_as_bool(opts.get("timings") or False),
            )
        except (ValueError, InvalidParameters) as exc:
            if isinstance(exc, InvalidConfig):
                raise
            raise InvalidConfig(str(exc)) from exc


CHECKS = ("1", "2", "3", "4", "5", "gamma_q")


@dataclass(frozen=True)
class BoundsConfig:
    """Remainder-bound sweeps.

    ``lemmas`` selects among ``1`` (Pochhammer tails), ``2`` and ``3`` (the
    ``(q;q)_inf`` and ``(q^x;q)_inf`` approximants), ``gamma_q`` (``Gamma_q``
    against ``Gamma``), ``4`` and ``5`` (theta reductions of g and h).
    """

    lemmas: Tuple[str, ...] = ("1", "4", "5")
    samples: int = 100
    seed: int = 0
    v_grid: Tuple[str, ...] = ("0.2", "0.3")
    n_grid_4: Tuple[int, ...] = tuple(range(6, 17))
    n_grid_5: Tuple[int, ...] = tuple(range(8, 25))
    ell: Fraction = Fraction(1)
    scale: AdmissibleScale = AdmissibleScale()
    precision: PrecisionContext = PrecisionContext()
    workers: int = 1

    def __post_init__(self):
        if not self.lemmas or any(k not in CHECKS for k in self.lemmas):
            raise InvalidConfig(f"lemma must be drawn from {', '.join(CHECKS)}")
        if self.samples < 1:
            raise InvalidConfig("samples must be >= 1")
        if "5" in self.lemmas and min(self.n_grid_5) < 4:
            raise InvalidConfig("the h reduction needs n >= 4")
        if not self.v_grid:
            raise InvalidConfig("v grid is empty")

    @classmethod
    def from_options(cls, opts: Mapping[str, Any]) -> "BoundsConfig":
        kw: Dict[str, Any] = {}
        if opts.get("lemma"):
            chosen = set(_split(opts["lemma"]))
            kw["lemmas"] = tuple(k for k in CHECKS if k in chosen)
            if len(kw["lemmas"]) != len(chosen):
                raise InvalidConfig(f"lemma must be drawn from {', '.join(CHECKS)}")
        if opts.get("samples") is not None:
            kw["samples"] = int(opts["samples"])
        if opts.get("seed") is not None:
            kw["seed"] = int(opts["seed"])
        if opts.get("v"):
            kw["v_grid"] = tuple(_split(opts["v"]))
        if opts.get("n4"):
            kw["n_grid_4"] = tuple(_int_list(_split(opts["n4"])))
        if opts.get("n5"):
            kw["n_grid_5"] = tuple(_int_list(_split(opts["n5"])))
        grid = n_grid_from(opts)
        if grid:
            kw.setdefault("n_grid_4", tuple(grid))
            kw.setdefault("n_grid_5", tuple(grid))
        if opts.get("workers") is not None:
            kw["workers"] = int(opts["workers"])
        try:
            if opts.get("ell") is not None:
                kw["ell"] = Fraction(str(opts["ell"]))
            return cls(scale=scale_from(opts), precision=precision_from(opts), **kw)
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InvalidConfig):
                raise
            raise InvalidConfig(str(exc)) from exc
