"""Shannon, binary and von Neumann entropies, in bits.

Conventions: base-2 logarithms, ``0 log 0 = 0``, and spectrum entries in
``[-1e-10, 0)`` are treated as eigensolver noise and clamped to zero.
"""
from __future__ import annotations

import numpy as np

from .errors import NumericError, ValidationError
from .matcore import DensityMatrix, hermitian_eigenvalues

#: log2(e); the natural-log term of the closed-form discord expressed in bits.
LOG2_E = float(np.log2(np.e))

NEGATIVE_CLAMP = 1e-10
PROB_NEG_TOL = 1e-12
NORM_TOL = 1e-9


def _plogp_sum(p: np.ndarray) -> float:
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def clamp_spectrum(values: np.ndarray) -> np.ndarray:
    """Zero out tiny negative eigenvalues; reject genuine PSD violations."""
    values = np.asarray(values, dtype=float)
    if values.size and values.min() < -NEGATIVE_CLAMP:
        raise NumericError(f"spectrum has negative entry {values.min():.3e}")
    return np.where(values < 0.0, 0.0, values)


def shannon_entropy(p) -> float:
    """``-sum p_j log2 p_j`` of a probability vector.

    Raises
    ------
    ValidationError
        Entries outside ``[-1e-12, 1]`` or total differing from 1 by more
        than ``1e-9``.
    """
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0:
        raise ValidationError("empty probability vector")
    if p.min() < -PROB_NEG_TOL or p.max() > 1.0 + PROB_NEG_TOL:
        raise ValidationError("probabilities must lie in [0, 1]")
    if abs(p.sum() - 1.0) > NORM_TOL:
        raise ValidationError(f"probabilities sum to {p.sum()!r}, not 1")
    return _plogp_sum(np.clip(p, 0.0, 1.0))


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"binary entropy argument {p!r} outside [0, 1]")
    return _plogp_sum(np.array([p, 1.0 - p]))


def spectrum_entropy(values) -> float:
    """Entropy of an eigenvalue spectrum after clamping; no renormalisation."""
    return _plogp_sum(clamp_spectrum(values))


def von_neumann_entropy(rho: DensityMatrix | np.ndarray) -> float:
    """``-Tr(rho log2 rho)`` computed from the eigenvalue spectrum."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else rho
    return spectrum_entropy(hermitian_eigenvalues(mat))
