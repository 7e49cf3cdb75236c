"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines live.
Criteria with runtime budgets assert wall-clock time as well.
"""

import json
import time

import numpy as np
import pytest
import scipy.linalg
from click.testing import CliRunner

from rieszlab.cli import main as cli_main
from rieszlab.hardy import inner_product_quadrature
from rieszlab.inner import BlaschkeExpInner, validate_sequence
from rieszlab.kernels import build_kernel_system, gram_closed_form, gram_quadrature
from rieszlab.scenarios import run_scenario
from rieszlab.toeplitz import build_symbol, toeplitz_section, winding_number


def _report(num, name, passed, detail=""):
    mark = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {num:2d} [{mark}] {name}  {detail}")
    assert passed, f"criterion {num}: {name} ({detail})"


@pytest.fixture(scope="module")
def clark_identity_result():
    t0 = time.time()
    result = run_scenario("clark-identity")
    result.extras["elapsed"] = time.time() - t0
    return result


@pytest.fixture(scope="module")
def verify_lemmas_result():
    return run_scenario("verify-lemmas")


def _check(result, fragment):
    for c in result.checks:
        if fragment in c.name:
            return c
    raise AssertionError(f"no check matching {fragment!r}")


def test_criterion_1_clark_identity(clark_identity_result):
    r = clark_identity_result
    sample = _check(r, "max |I - e^{2 pi i z}|")
    anchor = _check(r, "plain-truncation anchor")
    elapsed = r.extras["elapsed"]
    ok = sample.passed and anchor.passed and elapsed < 30.0
    _report(1, "Clark lattice identity (M=10^4, 200 points, tol 1e-4)", ok,
            f"max={sample.value:.3e} anchor={anchor.value:.3e} t={elapsed:.1f}s")


def test_criterion_2_clark_node_values(clark_identity_result):
    r = clark_identity_result
    nodes = _check(r, "I(lambda_n) - 1")
    deriv = _check(r, "relative error of |I'(lambda_n)|")
    ok = nodes.passed and deriv.passed
    _report(2, "Clark node values and derivative identity", ok,
            f"node={nodes.value:.3e} deriv_rel={deriv.value:.3e}")


def test_criterion_3_kernel_normalization():
    theta = BlaschkeExpInner(2.0 * np.pi, [])
    rng = np.random.default_rng(7)
    lam = np.sort(rng.uniform(-5.0, 5.0, 10))
    lam += np.arange(10) * 0.35  # enforce separation
    seq = validate_sequence(lam, np.ones(10))
    system = build_kernel_system(theta, seq)
    worst_norm = 0.0
    for n in range(10):
        k = system.normalized_kernel(seq.first_index + n)
        val = inner_product_quadrature(k, k, tol=1e-7, max_radius=2048.0)
        worst_norm = max(worst_norm, abs(val.real - 1.0))
    positions = np.arange(8)
    g_closed = gram_closed_form(system, positions=positions)
    g_quad = gram_quadrature(system, positions=positions, tol=1e-7, max_radius=2048.0)
    gram_dev = float(np.max(np.abs(g_closed.entries - g_quad.entries)))
    ok = worst_norm < 1e-4 and gram_dev < 1e-4
    _report(3, "kernel normalization and Gram vs quadrature (tol 1e-4)", ok,
            f"norm_dev={worst_norm:.3e} gram_dev={gram_dev:.3e}")


def test_criterion_4_lattice_orthonormality():
    result = run_scenario("lattice-gram", params={"n_nodes": 64})
    check = _check(result, "max off-diagonal")
    _report(4, "lattice Gram off-diagonals < 1e-12 at N=64", check.passed,
            f"max={check.value:.3e}")


def test_criterion_5_key_identity(verify_lemmas_result):
    check = _check(verify_lemmas_result, "pairing identity residual")
    _report(5, "pairing identity residual < 1e-6 (50 vectors, 50 samples, M=10^4)",
            check.passed, f"residual={check.value:.3e}")


def test_criterion_6_strip_bound(verify_lemmas_result):
    check = _check(verify_lemmas_result, "strip bound margin")
    _report(6, "strip lower bound on 20 randomized specs (<= 8 zeros)",
            check.passed, f"worst_margin={check.value:.3e}")


def test_criterion_7_hilbert_transform():
    result = run_scenario("hilbert-pairs")
    double = _check(result, "double-transform")
    pair = _check(result, "Poisson pair")
    ok = double.passed and pair.passed and pair.value < 1e-3
    _report(7, "Hilbert transform: double-negation 1e-4, Poisson pair 1e-3", ok,
            f"double={double.value:.3e} pair={pair.value:.3e}")


def test_criterion_8_winding_and_shift():
    ok = True
    detail = []
    for k in range(-5, 6):
        u = lambda t, k=k: ((np.asarray(t, dtype=complex) - 1j) / (np.asarray(t, dtype=complex) + 1j)) ** k
        sym = build_symbol(u, resolution=512, max_resolution=512)
        w, resid = winding_number(sym)
        ok = ok and (w == k) and (resid < 1e-6)
    sym_phi = build_symbol(
        lambda t: (np.asarray(t, dtype=complex) - 1j) / (np.asarray(t, dtype=complex) + 1j),
        resolution=512, max_resolution=512,
    )
    for n in (16, 64):
        sv = scipy.linalg.svdvals(toeplitz_section(sym_phi, n))
        ok = ok and np.allclose(sv[:-1], 1.0, atol=1e-12) and sv[-1] < 1e-12
        detail.append(f"N={n}: sigma=({sv[0]:.1f}x{n-1},{sv[-1]:.1e})")
    _report(8, "winding of phi^k exact for k in -5..5; shift section spectrum", ok,
            "; ".join(detail))


def test_criterion_9_theorem4_echo():
    t0 = time.time()
    result = run_scenario("theorem4-crosscheck")
    elapsed = time.time() - t0
    dec = _check(result, "strictly decreasing")
    rank = _check(result, "rank correlation")
    ok = dec.passed and rank.passed and elapsed < 120.0
    _report(9, "Kadets sweep: c(delta) decreasing, rank correlation 1.0, < 2 min",
            ok, f"t={elapsed:.1f}s")


def test_criterion_10_theorem5_echo():
    result = run_scenario("theorem5-crosscheck")
    ok = result.passed
    sig = result.extras["decaying"]["signatures"]
    ctl = result.extras["control"]["signatures"]
    _report(10, "AOB signatures co-occur (decaying) and fail (control)", ok,
            f"decaying={sig} control={ctl}")


def test_criterion_11_determinism(tmp_path):
    runner = CliRunner()
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        res = runner.invoke(cli_main, [
            "scenario", "run", "kadets-sweep",
            "--param", "gram_window=60", "--param", "deltas=[0.1, 0.3]",
            "--out", str(out),
        ])
        assert res.exit_code == 0, res.output
        outs.append(out)
    identical = all(
        (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
        for name in ("report.json", "kadets-sweep_bounds.csv", "summary.txt")
    )
    # config echoed in the report for reproducibility
    report = json.loads((outs[0] / "report.json").read_text())
    ok = identical and "params" in report and "version" in report
    _report(11, "byte-identical reruns of scenario run", ok)
