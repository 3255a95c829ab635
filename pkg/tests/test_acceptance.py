"""Acceptance suite: one test per criterion, each driving the CLI with a
committed config and printing a single PASS/FAIL line."""
import json
import math
import subprocess
import sys
import time
from pathlib import Path

import pytest

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run_cli(*args, timeout=900):
    proc = subprocess.run([sys.executable, "-m", "qscaled", *map(str, args)],
                          capture_output=True, timeout=timeout)
    return proc.returncode, proc.stdout, proc.stderr.decode()


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {number} {'PASS' if ok else 'FAIL'}: {detail}")
    return emit


def _study(cfg, tmp_path, *extra):
    out = tmp_path / f"{cfg}.json"
    t0 = time.perf_counter()
    code, _, err = run_cli("study", "--config", CONFIGS / f"{cfg}.cfg", "--format", "json",
                           "--out", out, *extra)
    elapsed = time.perf_counter() - t0
    assert code in (0, 1), err
    return json.loads(out.read_text()), elapsed


def _study_failures(doc):
    return [s["name"] for s in doc["studies"] if not s["summary"]["passed"]]


def test_criterion_1_identities(tmp_path, report):
    out = tmp_path / "id.json"
    t0 = time.perf_counter()
    code, _, err = run_cli("identities", "--config", CONFIGS / "c1_identities.cfg",
                           "--format", "json", "--out", out)
    elapsed = time.perf_counter() - t0
    checks = json.loads(out.read_text())["checks"]
    failed = [c["name"] for c in checks if not c["passed"]]
    names = {c["name"] for c in checks}
    ok = code == 0 and not failed and elapsed < 60 and {
        "theta_product_vs_series", "eta_transform", "chi_parity_identities"} <= names
    report(1, ok, f"{len(checks)} identity checks, failed {failed or 'none'}, {elapsed:.1f}s")
    assert ok


def test_criterion_2_remainder_bounds(tmp_path, report):
    out = tmp_path / "b.json"
    t0 = time.perf_counter()
    code, _, err = run_cli("bounds", "--config", CONFIGS / "c2_bounds.cfg",
                           "--format", "json", "--out", out)
    elapsed = time.perf_counter() - t0
    summary = json.loads(out.read_text())["summary"]
    parts = []
    for k in ("1", "4", "5"):
        s = summary[k]
        worst = ", ".join(f"n={v['n']} v={v['v']:g}: {v['remainder']:.4g} > {v['bound']:.4g}"
                          for v in s["violations"])
        parts.append(f"{k}: {s['checks']} checks, {len(s['violations'])} violations"
                     + (f" ({worst})" if worst else ""))
    assert summary["1"]["checks"] == 200
    ok = code == 0 and summary["passed"] and elapsed < 300
    report(2, ok, "; ".join(parts) + f"; {elapsed:.1f}s")
    assert ok


def test_criterion_3_g_decay(tmp_path, report):
    doc, elapsed = _study("c3_g_decay", tmp_path)
    assert len(doc["studies"]) == 6
    failed = _study_failures(doc)
    detail = []
    for s in doc["studies"]:
        ratios = [f"{e['slope_over_rate']:.3f}" if e["slope_over_rate"] is not None else "excl"
                  for e in s["summary"]["per_v"]]
        detail.append(f"{s['name']} slope/rate [{', '.join(ratios)}]")
    ok = not failed and elapsed < 900
    report(3, ok, f"failed {failed or 'none'}; " + "; ".join(detail) + f"; {elapsed:.1f}s")
    assert ok


def test_criterion_4_named_families(tmp_path, report):
    doc, elapsed = _study("c4_families", tmp_path)
    assert len(doc["studies"]) == 14
    failed = _study_failures(doc)
    terminal = {s["name"]: s["summary"]["terminal_max_rel_error"] for s in doc["studies"]}
    worst = max(terminal, key=lambda k: terminal[k])
    ok = not failed
    report(4, ok, f"{14 - len(failed)}/14 studies pass; failed {failed or 'none'}; "
                  f"largest terminal rel_error {terminal[worst]:.3g} ({worst}); {elapsed:.1f}s")
    assert ok


def test_criterion_5_confluent(tmp_path, report):
    doc, elapsed = _study("c5_confluent", tmp_path)
    by_name = {s["name"]: s["summary"] for s in doc["studies"]}
    failed = _study_failures(doc)
    findings = []
    for pair in ("r0s1", "r1s2"):
        gamma = by_name[f"{pair}_plus_gamma"]["terminal_max_rel_error"]
        beta = by_name[f"{pair}_plus_beta"]["terminal_max_rel_error"]
        if not gamma < beta:
            findings.append(f"{pair}: Gamma(beta) terminal {gamma:.3g} is not below beta {beta:.3g}")
        else:
            findings.append(f"{pair}: Gamma(beta) terminal {gamma:.3g} < beta {beta:.3g}")
    ratios = {n: s["per_v"][0]["terminal_ratio"] for n, s in by_name.items()}
    ok = not failed
    report(5, ok, f"failed {failed or 'none'}; terminal eps/(log^2 lam/lam) "
                  + ", ".join(f"{n}={r:.3g}" for n, r in ratios.items())
                  + "; finding: " + "; ".join(findings))
    assert ok


def test_criterion_6_kernel_asymptotics(tmp_path, report):
    out = tmp_path / "k.json"
    code, _, err = run_cli("bounds", "--config", CONFIGS / "c6_kernel.cfg",
                           "--format", "json", "--out", out)
    doc = json.loads(out.read_text())
    summary, rows = doc["summary"], doc["rows"]
    lam2 = sorted(r["lam"] for r in rows if r["check"] == "2")
    assert lam2 == [5, 10, 20]
    for x in (0.5, 2.0):
        assert [r["lam"] for r in rows if r["check"] == "3" and r["x"] == x] == [10, 20, 40, 80]
    ok = code == 0 and all(summary[k]["passed"] for k in ("2", "3", "gamma_q"))
    report(6, ok, ", ".join(f"{k}: {summary[k]['checks']} checks, {len(summary[k]['violations'])} violations"
                            for k in ("2", "3", "gamma_q")))
    assert ok


def test_criterion_7_determinism(tmp_path, report):
    outputs = {}
    for label, workers in (("serial", 1), ("parallel", 4)):
        for run in (1, 2):
            out = tmp_path / f"{label}{run}.json"
            code, _, err = run_cli("study", "--config", CONFIGS / "c3_g_decay.cfg", "--format", "json",
                                   "--workers", workers, "--out", out)
            assert code in (0, 1), err
            outputs[(label, run)] = out.read_bytes()
    first = outputs[("serial", 1)]
    same = all(b == first for b in outputs.values())
    doc = json.loads(first)
    assert all(not math.isnan(r["rel_error"]) for s in doc["studies"] for r in s["rows"])
    report(7, same, f"{len(outputs)} runs (2 serial, 2 with 4 workers), "
                    f"{len(first)} bytes each, byte-identical={same}")
    assert same
