"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""
import csv

import numpy as np
import pytest

from dqcdiscord import dqc1
from dqcdiscord.cli import main
from dqcdiscord.dqc1 import (
    DQC1Instance,
    analytic_discord,
    assemble_state,
    conditional_entropy,
    conditional_entropy_grid,
    discord,
    post_measurement,
    typical_conditional_entropy,
)
from dqcdiscord.entropy import spectrum_entropy
from dqcdiscord.gdiscord import general_discord
from dqcdiscord.haar import derive_substream, haar_state
from dqcdiscord.matcore import density_matrix, partial_trace, pure_state
from dqcdiscord.ppt import all_splits, min_pt_eigenvalue, negativity
from dqcdiscord.tracesim import simulate_trace_estimation

from conftest import X, Y, record

pytestmark = pytest.mark.acceptance


def test_criterion_01_analytic_endpoints():
    d1, d0 = analytic_discord(1.0), analytic_discord(0.0)
    ok = abs(d1 - 0.557305) <= 1e-4 and d0 == 0.0
    record(1, ok, f"analytic_discord(1)={d1:.6f} (0.557305 +- 1e-4), analytic_discord(0)={d0!r}")
    assert ok


def test_criterion_02_reference_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--n", "5", "--samples", "500", "--seed", "42", "--out", str(out)])
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    alphas = [float(r["alpha"]) for r in rows]
    gaps = [abs(float(r["mean_discord"]) - analytic_discord(float(r["alpha"]))) for r in rows]
    ok = len(rows) == 20 and np.allclose(alphas, np.linspace(0.05, 1.0, 20)) and max(gaps) <= 0.03
    worst = int(np.argmax(gaps))
    record(2, ok, f"reference sweep n=5, 500 samples: max |mean - analytic| = {max(gaps):.4f} "
                  f"at alpha={alphas[worst]:.2f} (tol 0.03)")
    assert ok


def test_criterion_03_oracle_equivalence():
    worst = 0.0
    for n in (1, 2, 3):
        for i in range(20):
            base = DQC1Instance.haar(n, 1.0, derive_substream(303, 100 * n + i))
            for alpha in (0.3, 0.7, 1.0):
                inst = base.with_alpha(alpha)
                brute = general_discord(assemble_state(inst), 0).discord
                worst = max(worst, abs(brute - discord(inst).discord))
    ok = worst <= 1e-5
    record(3, ok, f"brute-force vs closed-form discord, 180 cases: max diff {worst:.2e} (tol 1e-5)")
    assert ok


def _dense_conditional_spectra(inst, phi):
    rho = assemble_state(inst)
    out = []
    for sign in (1, -1):
        proj = 0.5 * (np.eye(2) + sign * (np.cos(phi) * X + np.sin(phi) * Y))
        big = np.kron(proj, np.eye(2**inst.n))
        unnorm = big @ rho.mat @ big
        p = np.trace(unnorm).real
        red = partial_trace(density_matrix(unnorm / p, rho.dims, check_psd=False), range(1, inst.n + 1))
        out.append(np.linalg.eigvalsh(red.mat))
    return out


def test_criterion_04_spectrum_formula():
    rng = np.random.default_rng(404)
    worst = 0.0
    for k in range(50):
        n = int(rng.integers(1, 6))
        alpha = float(rng.uniform(0, 1))
        phi = float(rng.uniform(0, 2 * np.pi))
        inst = DQC1Instance.haar(n, alpha, derive_substream(404, k))
        post = post_measurement(inst, phi)
        dense_p, dense_m = _dense_conditional_spectra(inst, phi)
        worst = max(worst,
                    np.max(np.abs(np.sort(post.spectrum_plus) - dense_p)),
                    np.max(np.abs(np.sort(post.spectrum_minus) - dense_m)))
    ok = worst <= 1e-9
    record(4, ok, f"closed-form vs dense post-measurement spectra, 50 tuples: max diff {worst:.2e} (tol 1e-9)")
    assert ok


def test_criterion_05_pure_state_identity():
    worst = 0.0
    for i in range(200):
        rho = pure_state(haar_state(4, derive_substream(505, i)))
        bd = general_discord(rho, 0, coarse_grid=(64, 128))
        worst = max(worst, abs(bd.discord - bd.h_m))
    ok = worst <= 1e-4
    record(5, ok, f"200 pure two-qubit states: max |D - H(M)| = {worst:.2e} (tol 1e-4)")
    assert ok


def test_criterion_06_bounds():
    rng = np.random.default_rng(606)
    tol = 1e-9
    violations = []
    for k in range(300):
        n = int(rng.integers(1, 7))
        alpha = float(rng.uniform(0, 1))
        inst = DQC1Instance.haar(n, alpha, derive_substream(606, k))
        bd = discord(inst)
        phi = float(rng.uniform(0, 2 * np.pi))
        post = post_measurement(inst, phi)
        avg = sum(p * spectrum_entropy(q) for p, q in
                  ((post.p_plus, post.spectrum_plus), (post.p_minus, post.spectrum_minus)) if p > 0)
        checks = (
            bd.discord >= -tol,
            bd.discord <= bd.h_m + tol,
            bd.h_m <= 1 + tol,
            bd.classical_j >= -tol,
            bd.h_s >= bd.cond.value - tol,
            bd.h_s >= avg - tol,
        )
        if not all(checks):
            violations.append(k)
    ok = not violations
    record(6, ok, f"0<=D<=H(M)<=1, J>=0, H(S)>=H~(S|M) over 300 instances: {len(violations)} violations (tol 1e-9)")
    assert ok


def test_criterion_07_ppt_claims():
    worst_neg = 0.0
    for n in range(1, 6):
        for i in range(50):
            base = DQC1Instance.haar(n, 1.0, derive_substream(707, 10 * n + i))
            for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
                worst_neg = max(worst_neg, negativity(assemble_state(base.with_alpha(alpha)), [0]))
    worst_eig = np.inf
    for n in range(1, 5):
        splits = all_splits(n + 1)
        for i in range(50):
            base = DQC1Instance.haar(n, 0.5, derive_substream(708, 10 * n + i))
            for alpha in (0.1, 0.3, 0.5):
                rho = assemble_state(base.with_alpha(alpha))
                worst_eig = min(worst_eig, min(min_pt_eigenvalue(rho, s) for s in splits))
    ok = worst_neg == 0.0 and worst_eig >= -1e-10
    record(7, ok, f"(a) control split max negativity {worst_neg:.1e} (must be 0); "
                  f"(b) alpha<=1/2 all splits min PT eigenvalue {worst_eig:.3e} (>= -1e-10)")
    assert ok


def test_criterion_08_typicality():
    alpha = 0.5
    phis = np.linspace(0, 2 * np.pi, dqc1.DEFAULT_GRID_POINTS, endpoint=False)
    parts = []
    ok = True
    for n in (6, 8):
        inst = DQC1Instance.haar(n, alpha, derive_substream(808, n))
        gap = abs(conditional_entropy(inst, 0.0) - typical_conditional_entropy(n, alpha))
        vals = conditional_entropy_grid(inst, phis)
        spread = vals.max() - vals.min()
        ok &= gap <= 0.05 and spread <= 0.02
        parts.append(f"n={n}: |H(phi=0) - typical|={gap:.4f}, phi-spread={spread:.4f}")
    record(8, ok, f"alpha={alpha}; " + "; ".join(parts) + " (tol 0.05 / 0.02)")
    assert ok


def test_criterion_09_trace_statistics():
    tau = 0.2 + 0.1j
    shots = 10_000
    estimates = np.array([
        simulate_trace_estimation(tau, 0.5, shots, derive_substream(909, r)).est_tau_r
        for r in range(200)
    ])
    se_mean = estimates.std(ddof=1) / np.sqrt(len(estimates))
    bias_ok = abs(estimates.mean() - tau.real) <= 4 * se_mean

    errs = {a: simulate_trace_estimation(tau, a, shots, derive_substream(910, int(a * 100))).stderr_r
            for a in (0.25, 0.5, 1.0)}
    # stderr * alpha * sqrt(shots) should be the same for every alpha
    scaled = np.array([errs[a] * a * np.sqrt(shots) for a in errs])
    scaling_ok = np.all(np.abs(scaled / scaled[-1] - 1) <= 0.10)
    ok = bool(bias_ok and scaling_ok)
    record(9, ok, f"bias {abs(estimates.mean() - tau.real):.2e} vs 4 SE {4 * se_mean:.2e}; "
                  f"stderr*alpha*sqrt(shots) = {np.round(scaled, 4).tolist()} (within 10%)")
    assert ok


def test_criterion_10_determinism(tmp_path, capsys):
    commands = [
        ["sweep", "--n", "3", "--samples", "20", "--alpha-steps", "5", "--seed", "10"],
        ["ppt", "--n", "3", "--alpha-list", "0.5,1", "--samples", "10", "--splits", "all", "--seed", "10"],
        ["trace", "--n", "4", "--seed", "10", "--alpha", "0.6", "--shots", "5000"],
        ["trace", "--tau-r", "0.3", "--tau-i", "-0.2", "--seed", "10", "--alpha", "0.6", "--shots", "5000"],
        ["analytic", "--alpha-steps", "11"],
    ]
    same = True
    for k, cmd in enumerate(commands):
        blobs = []
        for rep in range(2):
            path = tmp_path / f"{k}_{rep}.csv"
            assert main(cmd + ["--out", str(path)]) == 0
            blobs.append(path.read_bytes())
        same &= blobs[0] == blobs[1]
    singles = []
    for rep in range(2):
        assert main(["single", "--n", "3", "--alpha", "0.8", "--seed", "10", "--report-phi"]) == 0
        singles.append(capsys.readouterr().out)
    same &= singles[0] == singles[1]
    record(10, same, "repeated sweep/single/ppt/trace/analytic runs with fixed seed are byte-identical")
    assert same
