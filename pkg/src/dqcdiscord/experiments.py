"""Ensemble experiments behind the command-line tool.

Every experiment draws unitary number ``i`` from substream ``i`` of the
master seed, and the same unitary is reused for every ``alpha`` value, so
only the control purity changes along a sweep.  Rows always come back in
``(alpha, ...)`` order regardless of how many worker processes were used.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from . import dqc1, ppt, tracesim
from .errors import ValidationError
from .haar import derive_substream, haar_unitary
from .matcore import MAX_DIM, PSD_TOL

DEFAULT_SEED = 42
DEFAULT_N = 5
DEFAULT_SAMPLES = 500
DEFAULT_ALPHA_MIN = 0.05
DEFAULT_ALPHA_MAX = 1.0
DEFAULT_ALPHA_STEPS = 20
# dense eigensolves of 2^(n+1) matrices for every split and sample
PPT_MAX_N = 8

SWEEP_HEADER = ("alpha", "n", "samples", "mean_discord", "stddev_discord", "analytic_discord")
PPT_HEADER = ("alpha", "split", "min_pt_eig", "max_negativity")
TRACE_HEADER = (
    "alpha", "shots", "est_tau_r", "est_tau_i", "stderr_r", "stderr_i", "true_tau_r", "true_tau_i",
)
ANALYTIC_HEADER = ("alpha", "analytic_discord")
SINGLE_HEADER = ("n", "alpha", "tau_r", "tau_i", "h_m", "h_sm", "h_s", "cond_entropy",
                 "p_plus", "mutual_i", "classical_j", "discord")


def make_alpha_grid(alpha_min: float, alpha_max: float, steps: int) -> list[float]:
    if steps < 1:
        raise ValidationError("alpha-steps must be at least 1")
    if steps == 1:
        if alpha_min != alpha_max:
            raise ValidationError("a single step needs alpha-min == alpha-max")
        return [float(alpha_min)]
    return [float(a) for a in np.linspace(alpha_min, alpha_max, steps)]


def _check_alphas(alphas: Sequence[float]) -> None:
    if not alphas:
        raise ValidationError("alpha grid is empty")
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise ValidationError(f"alpha={a!r} outside [0, 1]")


def _check_n(n: int, limit: int | None = None) -> None:
    limit = int(np.log2(MAX_DIM)) - 1 if limit is None else limit
    if not 1 <= n <= limit:
        raise ValidationError(f"n={n} outside 1..{limit}")


@dataclass(frozen=True)
class SweepConfig:
    n: int = DEFAULT_N
    samples: int = DEFAULT_SAMPLES
    alpha_grid: tuple[float, ...] = tuple(
        make_alpha_grid(DEFAULT_ALPHA_MIN, DEFAULT_ALPHA_MAX, DEFAULT_ALPHA_STEPS)
    )
    master_seed: int = DEFAULT_SEED
    grid_points: int = dqc1.DEFAULT_GRID_POINTS
    output_path: str | None = None

    def __post_init__(self):
        _check_n(self.n)
        if self.samples < 1:
            raise ValidationError("samples must be at least 1")
        _check_alphas(self.alpha_grid)
        if self.grid_points < 8:
            raise ValidationError("grid must be at least 8")


def _map(fn, items: Iterable, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=8))


def _sweep_sample(args) -> list[float]:
    n, seed, index, alphas, grid = args
    inst = dqc1.DQC1Instance.haar(n, alphas[0], derive_substream(seed, index))
    return [dqc1.discord(inst.with_alpha(a), grid).discord for a in alphas]


def run_sweep(cfg: SweepConfig, workers: int = 1) -> list[dict]:
    """Ensemble-averaged exact discord next to the closed form, per alpha."""
    alphas = tuple(cfg.alpha_grid)
    tasks = [(cfg.n, cfg.master_seed, i, alphas, cfg.grid_points) for i in range(cfg.samples)]
    values = np.array(_map(_sweep_sample, tasks, workers))  # (samples, alphas)
    rows = []
    for j, a in enumerate(alphas):
        col = values[:, j]
        std = float(np.std(col, ddof=1)) if cfg.samples > 1 else 0.0
        rows.append({
            "alpha": a,
            "n": cfg.n,
            "samples": cfg.samples,
            "mean_discord": float(np.mean(col)),
            "stddev_discord": std,
            "analytic_discord": dqc1.analytic_discord(a),
        })
    return rows


def run_single(
    n: int | None,
    alpha: float,
    seed: int | None = None,
    unitary: np.ndarray | None = None,
    grid_points: int = dqc1.DEFAULT_GRID_POINTS,
    refine_tol: float = dqc1.DEFAULT_REFINE_TOL,
) -> tuple[dqc1.DQC1Instance, dqc1.DiscordBreakdown]:
    """Discord breakdown of one instance, from a seed or an explicit unitary."""
    if (seed is None) == (unitary is None):
        raise ValidationError("give exactly one of seed or unitary")
    if unitary is not None:
        inst = dqc1.DQC1Instance.from_unitary(unitary, alpha)
        if n is not None and n != inst.n:
            raise ValidationError(f"--n {n} does not match unitary dimension 2^{inst.n}")
    else:
        if n is None:
            raise ValidationError("n is required with a seed")
        _check_n(n)
        inst = dqc1.DQC1Instance.haar(n, alpha, derive_substream(seed, 0))
    return inst, dqc1.discord(inst, grid_points, refine_tol)


def single_row(inst: dqc1.DQC1Instance, bd: dqc1.DiscordBreakdown, report_phi: bool) -> dict:
    row = {
        "n": inst.n,
        "alpha": inst.alpha,
        "tau_r": inst.tau_r,
        "tau_i": inst.tau_i,
        "h_m": bd.h_m,
        "h_sm": bd.h_sm,
        "h_s": bd.h_s,
        "cond_entropy": bd.cond.value,
        "p_plus": bd.cond.p_plus,
        "mutual_i": bd.mutual_i,
        "classical_j": bd.classical_j,
        "discord": bd.discord,
    }
    if report_phi:
        row["phi_star"] = bd.cond.phi_star
    return row


def parse_splits(text: str, num_qubits: int) -> list[tuple[int, ...]]:
    """``"all"`` or ``;``-separated groups of comma-separated qubit indices."""
    text = text.strip()
    if text == "all":
        return ppt.all_splits(num_qubits)
    out = []
    for group in text.split(";"):
        try:
            idx = [int(tok) for tok in group.split(",") if tok.strip()]
        except ValueError as exc:
            raise ValidationError(f"bad split group {group!r}") from exc
        out.append(ppt.validate_split(idx, num_qubits))
    return out


def format_split(split: Sequence[int]) -> str:
    return "|".join(str(i) for i in split)


def _ppt_sample(args) -> list[tuple[float, float]]:
    n, seed, index, alphas, splits = args
    base = dqc1.DQC1Instance.haar(n, alphas[0], derive_substream(seed, index))
    out = []
    for a in alphas:
        rho = dqc1.assemble_state(base.with_alpha(a))
        for s in splits:
            ev = ppt.pt_spectrum(rho, s)
            out.append((float(ev[0]), float(-ev[ev < -PSD_TOL].sum())))
    return out


def run_ppt_scan(
    n: int,
    alphas: Sequence[float],
    samples: int,
    splits: Sequence[Sequence[int]],
    seed: int,
    workers: int = 1,
) -> list[dict]:
    """Ensemble minimum PT eigenvalue and maximum negativity per (alpha, split)."""
    _check_n(n, PPT_MAX_N)
    _check_alphas(alphas)
    if samples < 1:
        raise ValidationError("samples must be at least 1")
    splits = [ppt.validate_split(s, n + 1) for s in splits]
    if not splits:
        raise ValidationError("no splits given")
    tasks = [(n, seed, i, tuple(alphas), splits) for i in range(samples)]
    res = np.array(_map(_ppt_sample, tasks, workers))  # (samples, alphas*splits, 2)
    rows = []
    for j, (a, s) in enumerate((a, s) for a in alphas for s in splits):
        rows.append({
            "alpha": float(a),
            "split": format_split(s),
            "min_pt_eig": float(res[:, j, 0].min()),
            "max_negativity": float(res[:, j, 1].max()),
        })
    return rows


def run_trace(
    alpha: float,
    shots: int,
    seed: int = DEFAULT_SEED,
    tau: complex | None = None,
    n: int | None = None,
) -> tracesim.TraceEstimate:
    """One trace-estimation run.

    ``tau`` is used directly if given; otherwise it is the normalised trace of
    a Haar unitary on ``n`` qubits from substream 0.  Measurement outcomes
    come from substream 1.
    """
    if (tau is None) == (n is None):
        raise ValidationError("give exactly one of tau or n")
    if tau is None:
        _check_n(n)
        u = haar_unitary(2**n, derive_substream(seed, 0))
        tau = complex(np.trace(u) / 2**n)
    if abs(tau) > 1.0 + 1e-12:
        raise ValidationError(f"|tau|={abs(tau)!r} exceeds 1")
    return tracesim.simulate_trace_estimation(tau, alpha, shots, derive_substream(seed, 1))


def trace_row(alpha: float, est: tracesim.TraceEstimate) -> dict:
    return {
        "alpha": alpha,
        "shots": est.shots_x,
        "est_tau_r": est.est_tau_r,
        "est_tau_i": est.est_tau_i,
        "stderr_r": est.stderr_r,
        "stderr_i": est.stderr_i,
        "true_tau_r": est.true_tau.real,
        "true_tau_i": est.true_tau.imag,
    }


def analytic_rows(alphas: Sequence[float]) -> list[dict]:
    _check_alphas(alphas)
    return [{"alpha": a, "analytic_discord": dqc1.analytic_discord(a)} for a in alphas]


def format_value(v) -> str:
    """Integers verbatim, floats with 9 significant digits."""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        out = f"{float(v):.9g}"
        return "0" if out == "-0" else out
    return str(v)


def write_csv(rows: Sequence[dict], header: Sequence[str], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(row[h]) for h in header])


def csv_text(rows: Sequence[dict], header: Sequence[str]) -> str:
    buf = io.StringIO()
    write_csv(rows, header, buf)
    return buf.getvalue()
