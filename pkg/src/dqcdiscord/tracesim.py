"""Monte Carlo simulation of DQC1 trace estimation.

Each run of the circuit ends with an X or Y measurement of the control qubit.
The outcome is +1 with probability ``(1 + alpha tau_R) / 2`` for X and
``(1 + alpha tau_I) / 2`` for Y, so ``<X> = alpha tau_R`` and
``<Y> = alpha tau_I``.  Outcomes are drawn from that Bernoulli law directly
instead of simulating the full ``2^(n+1)``-dimensional state per shot.

Shots are split into fixed batches of ``BATCH_SHOTS``; batch ``b`` draws from
``stream.child(b)``, so totals are reproducible whatever order the batches
are evaluated in.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ValidationError
from .haar import RandomStream

Axis = Literal["X", "Y"]
BATCH_SHOTS = 1 << 20
_PROB_TOL = 1e-12


@dataclass(frozen=True)
class TraceEstimate:
    shots_x: int
    shots_y: int
    est_tau_r: float
    est_tau_i: float
    stderr_r: float
    stderr_i: float
    true_tau: complex | None = None


def outcome_probability(tau: complex, alpha: float, axis: Axis) -> float:
    """Probability of the +1 outcome for an X or Y measurement of the control."""
    if axis == "X":
        component = complex(tau).real
    elif axis == "Y":
        component = complex(tau).imag
    else:
        raise ValidationError(f"axis must be 'X' or 'Y', got {axis!r}")
    p = 0.5 * (1.0 + alpha * component)
    if not -_PROB_TOL <= p <= 1.0 + _PROB_TOL:
        raise ValidationError(f"tau={tau!r}, alpha={alpha!r} give P(+)={p!r} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def sample_outcomes(
    tau: complex, alpha: float, axis: Axis, shots: int, stream: RandomStream
) -> tuple[int, int]:
    """Return ``(n_plus, n_minus)`` after ``shots`` measurements along ``axis``."""
    if shots < 1:
        raise ValidationError("shots must be positive")
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha={alpha!r} outside [0, 1]")
    p = outcome_probability(tau, alpha, axis)
    n_plus = 0
    for b, start in enumerate(range(0, shots, BATCH_SHOTS)):
        size = min(BATCH_SHOTS, shots - start)
        n_plus += int(stream.child(b).generator().binomial(size, p))
    return n_plus, shots - n_plus


def _axis_estimate(counts: tuple[int, int], alpha: float) -> tuple[float, float, int]:
    n_plus, n_minus = counts
    shots = n_plus + n_minus
    if n_plus < 0 or n_minus < 0 or shots < 2:
        raise ValidationError("need at least two shots per axis")
    mean = (n_plus - n_minus) / shots
    # sample variance of the +-1 outcomes
    var = max(1.0 - mean * mean, 0.0) * shots / (shots - 1)
    return mean / alpha, np.sqrt(var) / (alpha * np.sqrt(shots)), shots


def estimate_trace(
    counts_x: tuple[int, int],
    counts_y: tuple[int, int],
    alpha: float,
    true_tau: complex | None = None,
) -> TraceEstimate:
    """Turn X and Y outcome counts into estimates of ``tau_R`` and ``tau_I``.

    Raises
    ------
    ValidationError
        If ``alpha`` is not in ``(0, 1]``: with a fully mixed control the
        outcomes carry no information about the trace.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValidationError("alpha must be in (0, 1] to estimate the trace")
    est_r, err_r, shots_x = _axis_estimate(counts_x, alpha)
    est_i, err_i, shots_y = _axis_estimate(counts_y, alpha)
    return TraceEstimate(shots_x, shots_y, est_r, est_i, float(err_r), float(err_i), true_tau)


def simulate_trace_estimation(
    tau: complex, alpha: float, shots: int, stream: RandomStream
) -> TraceEstimate:
    """Run ``shots`` X and ``shots`` Y measurements and estimate ``tau``."""
    if not 0.0 < alpha <= 1.0:
        raise ValidationError("alpha must be in (0, 1] to estimate the trace")
    cx = sample_outcomes(tau, alpha, "X", shots, stream.child(0))
    cy = sample_outcomes(tau, alpha, "Y", shots, stream.child(1))
    return estimate_trace(cx, cy, alpha, true_tau=complex(tau))
