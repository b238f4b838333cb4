"""Brute-force discord for any state whose measured party is one qubit.

The measured qubit is probed with projectors ``(I +- a.sigma) / 2`` for unit
vectors ``a`` covering the whole Bloch sphere, so nothing about the state's
structure is assumed.  This is slow compared with :mod:`dqcdiscord.dqc1` but
serves as an independent check of it.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from .dqc1 import ConditionalEntropyResult, DiscordBreakdown, canonical_angle
from .entropy import clamp_spectrum, von_neumann_entropy
from .errors import ValidationError
from .matcore import DensityMatrix, density_matrix, partial_trace

DEFAULT_GRID = (64, 128)
DEFAULT_REFINE_TOL = 1e-8
_MAX_REFINED = 4
_MAX_SWEEPS = 60
_CHUNK = 2048
_LN2 = np.log(2.0)


def bloch_direction(theta, phi) -> np.ndarray:
    """Unit vectors ``(sin t cos p, sin t sin p, cos t)``, stacked on the last axis."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )


def _measured_blocks(rho: DensityMatrix, qubit: int) -> np.ndarray:
    """``blocks[i, j] = <i| rho |j>`` on the measured qubit, shape (2, 2, dS, dS)."""
    k = rho.num_subsystems
    if not 0 <= qubit < k:
        raise ValidationError(f"measured index {qubit} out of range for {k} subsystems")
    if rho.dims[qubit] != 2:
        raise ValidationError("the measured subsystem must be a qubit")
    if k == 1:
        raise ValidationError("need at least one unmeasured subsystem")
    rest = [i for i in range(k) if i != qubit]
    ds = rho.dim // 2
    perm = [qubit] + rest
    t = rho.mat.reshape(rho.dims + rho.dims).transpose(perm + [k + i for i in perm])
    return t.reshape(2, ds, 2, ds).transpose(0, 2, 1, 3)


def _conditional_entropy_dirs(blocks: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """``sum_+- p H(rho_S|+-)`` for each row of ``dirs`` (shape (N, 3))."""
    out = np.empty(len(dirs))
    b00, b01, b10, b11 = blocks[0, 0], blocks[0, 1], blocks[1, 0], blocks[1, 1]
    for lo in range(0, len(dirs), _CHUNK):
        a = dirs[lo:lo + _CHUNK]
        total = np.zeros(len(a))
        for sign in (1.0, -1.0):
            a1, a2, a3 = (sign * a).T
            # Tr_M(Pi rho) = sum_{k,i} Pi[k, i] <i|rho|k>
            pi00 = (1 + a3) / 2
            pi11 = (1 - a3) / 2
            pi01 = (a1 - 1j * a2) / 2
            pi10 = (a1 + 1j * a2) / 2
            sigma = (
                pi00[:, None, None] * b00
                + pi11[:, None, None] * b11
                + pi01[:, None, None] * b10
                + pi10[:, None, None] * b01
            )
            lam = np.clip(np.linalg.eigvalsh(sigma), 0.0, None)
            p = lam.sum(axis=1)
            total += -xlogy(lam, lam).sum(axis=1) + xlogy(p, p)
        out[lo:lo + _CHUNK] = total / _LN2
    return np.clip(out, 0.0, None)


def conditional_entropy_bloch(rho: DensityMatrix, measured_qubit: int, direction) -> float:
    """Measured conditional entropy for one Bloch direction ``(a1, a2, a3)``."""
    a = np.asarray(direction, dtype=float).reshape(1, 3)
    norm = np.linalg.norm(a)
    if abs(norm - 1.0) > 1e-12:
        raise ValidationError("Bloch direction must be a unit vector")
    return float(_conditional_entropy_dirs(_measured_blocks(rho, measured_qubit), a)[0])


def _grid_local_minima(vals: np.ndarray) -> np.ndarray:
    """Flat indices of grid-local minima (periodic in phi), best first."""
    nt = vals.shape[0]
    local = (vals <= np.roll(vals, 1, axis=1)) & (vals <= np.roll(vals, -1, axis=1))
    if nt > 1:
        up = np.vstack([vals[1:], np.full((1, vals.shape[1]), np.inf)])
        down = np.vstack([np.full((1, vals.shape[1]), np.inf), vals[:-1]])
        local &= (vals <= up) & (vals <= down)
    flat = np.flatnonzero(local)
    return flat[np.argsort(vals.ravel()[flat], kind="stable")]


def _refine(f, theta: float, phi: float, value: float, h_theta: float, h_phi: float, tol: float):
    """Alternate bounded golden-section searches in theta and phi."""
    for _ in range(_MAX_SWEEPS):
        old = (theta, phi, value)
        r = minimize_scalar(lambda t: f(t, phi), bounds=(theta - h_theta, theta + h_theta),
                            method="bounded", options={"xatol": tol})
        if r.fun < value:
            theta, value = r.x, float(r.fun)
        r = minimize_scalar(lambda p: f(theta, p), bounds=(phi - h_phi, phi + h_phi),
                            method="bounded", options={"xatol": tol})
        if r.fun < value:
            phi, value = r.x, float(r.fun)
        moved = max(abs(theta - old[0]), abs(phi - old[1]))
        if moved <= tol or old[2] - value <= 1e-15:
            break
        h_theta = max(min(h_theta, 4 * abs(theta - old[0])), 10 * tol)
        h_phi = max(min(h_phi, 4 * abs(phi - old[1])), 10 * tol)
    return theta, phi, value


def minimize_bloch(
    rho: DensityMatrix,
    measured_qubit: int = 0,
    coarse_grid: tuple[int, int] = DEFAULT_GRID,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> ConditionalEntropyResult:
    """Minimise the measured conditional entropy over the Bloch sphere.

    Antipodal directions give the same projector pair, so the grid covers the
    upper hemisphere ``theta in [0, pi/2]`` (equator included) times
    ``phi in [0, 2 pi)``.  Refinement works in unconstrained angles, so it can
    cross the equator freely.  Grid ties go to the smallest ``(theta, phi)``.
    """
    n_theta, n_phi = coarse_grid
    if n_theta < 2 or n_phi < 4:
        raise ValidationError("coarse grid too small")
    blocks = _measured_blocks(rho, measured_qubit)
    thetas = np.linspace(0.0, np.pi / 2, n_theta)
    phis = 2 * np.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    vals = _conditional_entropy_dirs(blocks, bloch_direction(tt, pp).reshape(-1, 3))
    vals = vals.reshape(n_theta, n_phi)

    def f(t, p):
        return _conditional_entropy_dirs(blocks, bloch_direction(t, p).reshape(1, 3))[0]

    h_theta = thetas[1] - thetas[0]
    h_phi = phis[1] - phis[0]
    best = None
    for flat in _grid_local_minima(vals)[:_MAX_REFINED]:
        i, j = divmod(int(flat), n_phi)
        cand = _refine(f, thetas[i], phis[j], vals[i, j], h_theta, h_phi, refine_tol)
        if best is None or cand[2] < best[2]:
            best = cand
    theta, phi, value = best

    a = bloch_direction(theta, phi)
    plus = _measured_spectrum(blocks, a)
    minus = _measured_spectrum(blocks, -a)
    p_plus = float(plus.sum())
    return ConditionalEntropyResult(
        phi_star=canonical_angle(phi),
        value=float(value),
        p_plus=p_plus,
        spectrum_plus=plus / p_plus if p_plus > 0 else plus,
        spectrum_minus=minus / minus.sum() if minus.sum() > 0 else minus,
        direction=tuple(float(x) for x in a),
    )


def _measured_spectrum(blocks: np.ndarray, a: np.ndarray) -> np.ndarray:
    a1, a2, a3 = a
    sigma = (
        (1 + a3) / 2 * blocks[0, 0]
        + (1 - a3) / 2 * blocks[1, 1]
        + (a1 - 1j * a2) / 2 * blocks[1, 0]
        + (a1 + 1j * a2) / 2 * blocks[0, 1]
    )
    return clamp_spectrum(np.linalg.eigvalsh(sigma))


def _split(rho: DensityMatrix, measured: Iterable[int]) -> tuple[list[int], list[int]]:
    m = sorted(set(int(i) for i in measured))
    k = rho.num_subsystems
    if not m or m[0] < 0 or m[-1] >= k or len(m) == k:
        raise ValidationError(f"invalid bipartition {m} of {k} subsystems")
    return [i for i in range(k) if i not in m], m


def mutual_information(rho: DensityMatrix, split: Sequence[int]) -> float:
    """``H(S) + H(M) - H(S,M)`` where ``split`` lists the subsystems of ``M``."""
    s, m = _split(rho, split)
    return (
        von_neumann_entropy(partial_trace(rho, s))
        + von_neumann_entropy(partial_trace(rho, m))
        - von_neumann_entropy(rho)
    )


def general_discord(
    rho: DensityMatrix,
    measured_qubit: int = 0,
    coarse_grid: tuple[int, int] = DEFAULT_GRID,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> DiscordBreakdown:
    s, m = _split(rho, [measured_qubit])
    h_s = von_neumann_entropy(partial_trace(rho, s))
    h_m = von_neumann_entropy(partial_trace(rho, m))
    h_sm = von_neumann_entropy(rho)
    cond = minimize_bloch(rho, measured_qubit, coarse_grid, refine_tol)
    return DiscordBreakdown(
        h_m=h_m,
        h_sm=h_sm,
        h_s=h_s,
        cond=cond,
        mutual_i=h_s + h_m - h_sm,
        classical_j=h_s - cond.value,
        discord=h_m - h_sm + cond.value,
    )


def nonorthogonal_mixture_state() -> DensityMatrix:
    """Equal mixture of ``|+><+|(x)|0><0|``, ``|-><-|(x)|1><1|``,
    ``|0><0|(x)|-><-|`` and ``|1><1|(x)|+><+|``.

    Separable, yet the nonorthogonal local states make its discord nonzero.
    """
    zero = np.array([1, 0], dtype=complex)
    one = np.array([0, 1], dtype=complex)
    plus = (zero + one) / np.sqrt(2)
    minus = (zero - one) / np.sqrt(2)

    def proj(v):
        return np.outer(v, v.conj())

    mat = 0.25 * (
        np.kron(proj(plus), proj(zero))
        + np.kron(proj(minus), proj(one))
        + np.kron(proj(zero), proj(minus))
        + np.kron(proj(one), proj(plus))
    )
    return density_matrix(mat, (2, 2))
