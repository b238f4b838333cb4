"""Quantum discord of the DQC1 output state across the control/mixed split.

The output of the one-clean-qubit circuit is

    rho = 2^-(n+1) [[I, alpha U^H], [alpha U, I]]

with the control qubit as the leftmost factor.  Everything needed for the
discord follows from ``alpha``, the normalised trace ``tau = Tr U / 2^n`` and
the eigenphases of ``U``:

* the joint spectrum is ``(1 +- alpha) / 2^(n+1)``, each ``2^n`` times;
* the control marginal has eigenvalues ``(1 +- alpha |tau|) / 2``;
* a projective measurement along the equatorial direction ``phi`` leaves the
  mixed register with spectra
  ``q_k(+-) = (1 +- alpha cos(theta_k - phi)) / (2^n (1 +- alpha m))`` where
  ``m = tau_R cos(phi) + tau_I sin(phi)``, with outcome probabilities
  ``(1 +- alpha m) / 2``.

The exact path keeps both outcome branches and minimises over ``phi``.  The
closed forms :func:`typical_conditional_entropy` and
:func:`analytic_discord` assume the eigenphases are spread uniformly round
the circle and ``|tau|`` is negligible.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from .entropy import LOG2_E, binary_entropy
from .errors import DimensionError, ValidationError
from .haar import RandomStream, haar_unitary
from .matcore import MAX_DIM, TWO_PI, DensityMatrix, density_matrix, unitary_eigenphases

DEFAULT_GRID_POINTS = 256
DEFAULT_REFINE_TOL = 1e-8
# grid-local minima that get a refinement pass
_MAX_REFINED = 4
_LN2 = np.log(2.0)


@dataclass(frozen=True)
class DQC1Instance:
    """One problem instance: ``n`` mixed qubits, control purity, unitary.

    Build it with :meth:`from_unitary` or :meth:`haar`; both compute and cache
    the eigenphases and the normalised trace.
    """

    n: int
    alpha: float
    unitary: np.ndarray = field(repr=False)
    eigenphases: np.ndarray = field(repr=False)
    tau: complex

    @classmethod
    def from_unitary(cls, unitary: np.ndarray, alpha: float) -> "DQC1Instance":
        u = np.array(unitary, dtype=complex, copy=True)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValidationError("unitary must be a square matrix")
        dim = u.shape[0]
        n = int(round(np.log2(dim))) if dim > 0 else 0
        if n < 1 or 2**n != dim:
            raise ValidationError(f"unitary dimension {dim} is not 2^n with n >= 1")
        if 2 * dim > MAX_DIM:
            raise DimensionError(f"n={n} exceeds the configured maximum")
        _check_alpha(alpha)
        theta = unitary_eigenphases(u)
        u.setflags(write=False)
        theta.setflags(write=False)
        tau = complex(np.trace(u) / dim)
        return cls(n, float(alpha), u, theta, tau)

    @classmethod
    def haar(cls, n: int, alpha: float, stream: RandomStream) -> "DQC1Instance":
        if n < 1 or 2 ** (n + 1) > MAX_DIM:
            raise DimensionError(f"n={n} outside 1..{int(np.log2(MAX_DIM)) - 1}")
        return cls.from_unitary(haar_unitary(2**n, stream), alpha)

    def with_alpha(self, alpha: float) -> "DQC1Instance":
        """Same unitary (and cached phases) at a different control purity."""
        _check_alpha(alpha)
        return replace(self, alpha=float(alpha))

    @property
    def tau_r(self) -> float:
        return self.tau.real

    @property
    def tau_i(self) -> float:
        return self.tau.imag


class PostMeasurement(NamedTuple):
    p_plus: float
    spectrum_plus: np.ndarray
    p_minus: float
    spectrum_minus: np.ndarray


@dataclass(frozen=True)
class ConditionalEntropyResult:
    """Minimised measured conditional entropy and the optimal measurement.

    ``phi_star`` is the azimuth of the optimal Bloch direction and
    ``direction`` the full unit vector (``a3 = 0`` for the DQC1 path).
    """

    phi_star: float
    value: float
    p_plus: float
    spectrum_plus: np.ndarray = field(repr=False)
    spectrum_minus: np.ndarray = field(repr=False)
    direction: tuple[float, float, float] = (1.0, 0.0, 0.0)


@dataclass(frozen=True)
class DiscordBreakdown:
    """Every entropy term of the discord, in bits."""

    h_m: float
    h_sm: float
    h_s: float
    cond: ConditionalEntropyResult
    mutual_i: float
    classical_j: float
    discord: float


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha={alpha!r} outside [0, 1]")


def canonical_angle(phi: float) -> float:
    phi = float(np.mod(phi, TWO_PI))
    return 0.0 if phi >= TWO_PI else phi


def assemble_state(inst: DQC1Instance) -> DensityMatrix:
    """Dense ``2^(n+1)`` output state, control qubit first."""
    dim = 2**inst.n
    if 2 * dim > MAX_DIM:
        raise DimensionError(f"state dimension {2 * dim} exceeds MAX_DIM={MAX_DIM}")
    eye = np.eye(dim, dtype=complex)
    u = inst.unitary
    mat = np.block([[eye, inst.alpha * u.conj().T], [inst.alpha * u, eye]]) / (2 * dim)
    return density_matrix(mat, (2,) * (inst.n + 1), check_psd=False)


def joint_entropy(n: int, alpha: float) -> float:
    """Entropy of the full output state; independent of the unitary."""
    _check_alpha(alpha)
    return n + binary_entropy((1.0 - alpha) / 2.0)


def marginal_entropy_M(alpha: float, tau: complex) -> float:
    _check_alpha(alpha)
    r = min(abs(tau), 1.0)
    return binary_entropy((1.0 - alpha * r) / 2.0)


def _outcome_bias(inst: DQC1Instance, phi: np.ndarray) -> np.ndarray:
    return inst.tau.real * np.cos(phi) + inst.tau.imag * np.sin(phi)


def post_measurement(inst: DQC1Instance, phi: float) -> PostMeasurement:
    """Outcome probabilities and post-measurement spectra for direction ``phi``.

    A branch with zero probability gets an all-zero spectrum.
    """
    m = float(_outcome_bias(inst, np.float64(phi)))
    c = np.cos(inst.eigenphases - phi)
    dim = 2**inst.n
    out = []
    for sign in (1.0, -1.0):
        p = 0.5 * (1.0 + sign * inst.alpha * m)
        num = np.clip(1.0 + sign * inst.alpha * c, 0.0, None)
        den = 1.0 + sign * inst.alpha * m
        q = num / (dim * den) if den > 0.0 else np.zeros(dim)
        out.extend([max(p, 0.0), q])
    return PostMeasurement(*out)


def conditional_entropy_grid(inst: DQC1Instance, phis) -> np.ndarray:
    """Measured conditional entropy ``p+ H(q+) + p- H(q-)`` at each angle.

    Uses ``p H(w/p) = -sum w log w + p log p`` with ``w = p q``, which is
    finite as ``p -> 0`` and gives zero weight to an empty branch.
    """
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    dim = 2**inst.n
    c = np.cos(inst.eigenphases[None, :] - phis[:, None])
    m = _outcome_bias(inst, phis)
    total = np.zeros(len(phis))
    for sign in (1.0, -1.0):
        w = np.clip(1.0 + sign * inst.alpha * c, 0.0, None) / (2.0 * dim)
        p = np.clip(0.5 * (1.0 + sign * inst.alpha * m), 0.0, None)
        total += -xlogy(w, w).sum(axis=1) + xlogy(p, p)
    return np.clip(total / _LN2, 0.0, None)


def conditional_entropy(inst: DQC1Instance, phi: float) -> float:
    return float(conditional_entropy_grid(inst, [phi])[0])


def minimize_conditional_entropy(
    inst: DQC1Instance,
    grid_points: int = DEFAULT_GRID_POINTS,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> ConditionalEntropyResult:
    """Global minimum over equatorial measurements.

    A uniform grid on ``[0, 2 pi)`` locates the basins; the best few
    grid-local minima are then refined with bounded Brent search (golden
    section with parabolic steps) over one grid cell either side.
    """
    if grid_points < 8:
        raise ValidationError("grid_points must be at least 8")
    step = TWO_PI / grid_points
    phis = step * np.arange(grid_points)
    vals = conditional_entropy_grid(inst, phis)

    is_local = (vals <= np.roll(vals, 1)) & (vals <= np.roll(vals, -1))
    candidates = np.flatnonzero(is_local)
    candidates = candidates[np.argsort(vals[candidates], kind="stable")][:_MAX_REFINED]

    best_phi = phis[candidates[0]]
    best_val = vals[candidates[0]]
    for i in candidates:
        res = minimize_scalar(
            lambda x: conditional_entropy_grid(inst, [x])[0],
            bounds=(phis[i] - step, phis[i] + step),
            method="bounded",
            options={"xatol": refine_tol},
        )
        if res.fun < best_val:
            best_phi, best_val = res.x, float(res.fun)

    phi_star = canonical_angle(best_phi)
    post = post_measurement(inst, phi_star)
    return ConditionalEntropyResult(
        phi_star=phi_star,
        value=float(best_val),
        p_plus=post.p_plus,
        spectrum_plus=post.spectrum_plus,
        spectrum_minus=post.spectrum_minus,
        direction=(float(np.cos(phi_star)), float(np.sin(phi_star)), 0.0),
    )


def discord(
    inst: DQC1Instance,
    grid_points: int = DEFAULT_GRID_POINTS,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> DiscordBreakdown:
    """Exact discord with the control qubit as the measured party.

    The mixed register's reduced state is exactly ``I / 2^n`` so its entropy
    is ``n`` without an eigensolve.
    """
    h_m = marginal_entropy_M(inst.alpha, inst.tau)
    h_sm = joint_entropy(inst.n, inst.alpha)
    h_s = float(inst.n)
    cond = minimize_conditional_entropy(inst, grid_points, refine_tol)
    return DiscordBreakdown(
        h_m=h_m,
        h_sm=h_sm,
        h_s=h_s,
        cond=cond,
        mutual_i=h_s + h_m - h_sm,
        classical_j=h_s - cond.value,
        discord=h_m - h_sm + cond.value,
    )


def typical_conditional_entropy(n: int, alpha: float) -> float:
    """Large-``n`` conditional entropy for uniformly spread eigenphases."""
    _check_alpha(alpha)
    s = np.sqrt(1.0 - alpha * alpha)
    return float(n + 1.0 - np.log2(1.0 + s) - (1.0 - s) * LOG2_E)


def analytic_discord(alpha: float) -> float:
    """Closed-form discord for a typical unitary with ``|tau|`` negligible."""
    _check_alpha(alpha)
    s = np.sqrt(1.0 - alpha * alpha)
    return float(
        2.0 - binary_entropy((1.0 - alpha) / 2.0) - np.log2(1.0 + s) - (1.0 - s) * LOG2_E
    )
