"""Command line entry point: ``qscaled study``, ``qscaled bounds`` and
``qscaled identities``.

Exit codes: 0 all criteria passed, 1 a criterion failed, 2 invalid
configuration, 3 precision exhausted on more than 10% of rows.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .config import BoundsConfig, InvalidConfig, StudyConfig, load_config_file, precision_from
from .emit import emit, emit_bounds, emit_identities, emit_results
from .identities import run_identity_suite
from .families import FAMILIES
from .study import exhausted_fraction, run_bound_checks, run_study

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_PRECISION = 0, 1, 2, 3


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file; command-line flags override it")
    p.add_argument("--scale-kind", choices=("power_log", "log_power"))
    p.add_argument("--scale-beta", type=float)
    p.add_argument("--scale-gamma", type=float)
    p.add_argument("--v", action="append", help="grid value of v (repeatable)")
    p.add_argument("--n", action="append", help="grid value of n (repeatable)")
    p.add_argument("--n-start", type=int)
    p.add_argument("--n-stop", type=int)
    p.add_argument("--n-step", type=int)
    p.add_argument("--ell", help="quadratic exponent, e.g. 1/2")
    p.add_argument("--precision-bits", type=int)
    p.add_argument("--max-bits", type=int)
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="worker processes (default 1)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output file (directory for multi-study CSV)")
    p.add_argument("--summary", help="also write the JSON summary here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qscaled",
        description="Compare q-series against their q -> 1 approximants on admissible scales.")
    sub = parser.add_subparsers(dest="command", required=True)

    st = sub.add_parser("study", help="exact vs. approximant over an (n, v) grid")
    _common(st)
    st.add_argument("--family", choices=FAMILIES)
    st.add_argument("--branch", choices=("plus", "minus"))
    st.add_argument("--nu")
    st.add_argument("--alpha")
    st.add_argument("--alphas", help="comma-separated exponents")
    st.add_argument("--betas", help="comma-separated exponents")
    st.add_argument("--gammas", help="comma-separated exponents (h family)")
    st.add_argument("--parity", choices=("printed", "uniform"))
    st.add_argument("--form", choices=("printed", "reciprocal"))
    st.add_argument("--gamma-denominator", choices=("true", "false"))
    st.add_argument("--laguerre-sign", choices=("-1", "1"))
    st.add_argument("--cos-threshold", type=float)
    st.add_argument("--terminal-tol", type=float,
                    help="also require rel_error < this at the largest n")
    st.add_argument("--timings", action="store_true", default=None,
                    help="record wall_time_ms (breaks byte-identical output)")

    bd = sub.add_parser("bounds", help="sweep the remainder bounds")
    _common(bd)
    bd.add_argument("--lemma", action="append", help="1, 2, 3, 4, 5 or gamma_q (repeatable)")
    bd.add_argument("--samples", type=int)
    bd.add_argument("--n4", action="append")
    bd.add_argument("--n5", action="append")

    idn = sub.add_parser("identities", help="exact identities and two-route agreement")
    idn.add_argument("--config")
    idn.add_argument("--precision-bits", type=int)
    idn.add_argument("--max-bits", type=int)
    idn.add_argument("--rel-tol", type=float)
    idn.add_argument("--seed", type=int)
    idn.add_argument("--samples", type=int, help="random points per grid cell (default 4)")
    idn.add_argument("--format", choices=("csv", "json"))
    idn.add_argument("--out")
    idn.add_argument("--summary")
    return parser


def _flag_options(ns: argparse.Namespace) -> Dict[str, Any]:
    skip = {"command", "config", "format", "out", "summary"}
    return {k.replace("_", "-"): v for k, v in vars(ns).items() if k not in skip and v is not None}


def _sections(ns: argparse.Namespace) -> List[Tuple[str, Dict[str, Any]]]:
    base = load_config_file(ns.config) if ns.config else [("", {})]
    flags = _flag_options(ns)
    out = []
    for name, opts in base:
        merged = dict(opts)
        merged.update(flags)
        out.append((name, merged))
    return out


def _write(data: bytes, path: Optional[str]) -> None:
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _output_settings(ns, sections) -> Tuple[str, Optional[str]]:
    first = sections[0][1]
    fmt = ns.format or first.get("format") or "csv"
    if fmt not in ("csv", "json"):
        raise InvalidConfig(f"unknown format {fmt!r}")
    return fmt, ns.out or first.get("out")


def _study(ns) -> int:
    sections = _sections(ns)
    cfgs = [(name, StudyConfig.from_options(opts)) for name, opts in sections]
    fmt, out = _output_settings(ns, sections)
    workers = max(c.workers for _, c in cfgs)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        results = [run_study(c, executor=pool, name=name) for name, c in cfgs]
    finally:
        if pool is not None:
            pool.shutdown()
    for r in results:
        label = r.name or f"{r.summary['family']}/{r.summary['branch']}"
        print(f"{'PASS' if r.passed else 'FAIL'} {label}", file=sys.stderr)
    if len(results) == 1:
        _write(emit(results[0].rows, fmt, results[0].summary), out)
        summary = results[0].summary
    elif fmt == "json":
        _write(emit_results(results, "json"), out)
        summary = {"studies": {r.name: r.summary for r in results}}
    else:
        if not out:
            raise InvalidConfig("multi-study CSV output needs --out DIRECTORY")
        os.makedirs(out, exist_ok=True)
        for r in results:
            _write(emit(r.rows, "csv"), os.path.join(out, f"{r.name}.csv"))
        summary = {"studies": {r.name: r.summary for r in results}}
        _write((json.dumps(summary, indent=1) + "\n").encode(), os.path.join(out, "summary.json"))
    if ns.summary:
        _write((json.dumps(summary, indent=1) + "\n").encode(), ns.summary)
    if exhausted_fraction(results) > 0.10:
        return EXIT_PRECISION
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _bounds(ns) -> int:
    sections = _sections(ns)
    if len(sections) != 1:
        raise InvalidConfig("bounds configs take no sections")
    cfg = BoundsConfig.from_options(sections[0][1])
    fmt, out = _output_settings(ns, sections)
    rows, summary = run_bound_checks(cfg)
    for k in cfg.lemmas:
        s = summary[k]
        print(f"{'PASS' if s['passed'] else 'FAIL'} {k}: {s['checks']} checks, "
              f"{len(s['violations'])} violations, min margin {s['min_margin']:.3g}", file=sys.stderr)
    _write(emit_bounds(rows, fmt, summary), out)
    if ns.summary:
        _write((json.dumps(summary, indent=1) + "\n").encode(), ns.summary)
    return EXIT_OK if summary["passed"] else EXIT_FAIL


def _identities(ns) -> int:
    sections = _sections(ns)
    if len(sections) != 1:
        raise InvalidConfig("identity configs take no sections")
    opts = sections[0][1]
    ctx = precision_from(opts)
    fmt, out = _output_settings(ns, sections)
    checks = run_identity_suite(ctx, seed=int(opts.get("seed") or 0),
                                per_cell=int(opts.get("samples") or 4))
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.cases} cases, "
              f"max error {c.max_error:.3g} (tolerance {c.tolerance:.3g})", file=sys.stderr)
    summary = {"passed": all(c.passed for c in checks)}
    _write(emit_identities(checks, fmt, summary), out)
    if ns.summary:
        _write((json.dumps(summary, indent=1) + "\n").encode(), ns.summary)
    return EXIT_OK if summary["passed"] else EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "study":
            return _study(ns)
        if ns.command == "identities":
            return _identities(ns)
        return _bounds(ns)
    except InvalidConfig as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
