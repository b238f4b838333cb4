"""Partial-transpose (PPT) tests and negativity across qubit bipartitions."""
from __future__ import annotations

from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import ValidationError
from .matcore import PSD_TOL, DensityMatrix, partial_transpose


def validate_split(group_a: Iterable[int], num_qubits: int) -> tuple[int, ...]:
    """Normalise a split to a sorted tuple; must be a nonempty proper subset."""
    a = tuple(sorted(set(int(i) for i in group_a)))
    if not a or a[0] < 0 or a[-1] >= num_qubits or len(a) == num_qubits:
        raise ValidationError(f"invalid split {a} of {num_qubits} qubits")
    return a


def all_splits(num_qubits: int) -> list[tuple[int, ...]]:
    """Every bipartition, each listed once by the side holding qubit 0."""
    rest = range(1, num_qubits)
    return [
        (0, *others)
        for r in range(num_qubits - 1)
        for others in combinations(rest, r)
    ]


def pt_spectrum(rho: DensityMatrix, split: Iterable[int]) -> np.ndarray:
    a = validate_split(split, rho.num_subsystems)
    return np.linalg.eigvalsh(partial_transpose(rho, a))


def min_pt_eigenvalue(rho: DensityMatrix, split: Iterable[int]) -> float:
    """Smallest eigenvalue of the partial transpose on ``split`` (unclamped)."""
    return float(pt_spectrum(rho, split)[0])


def negativity(rho: DensityMatrix, split: Iterable[int]) -> float:
    """Sum of the magnitudes of the negative partial-transpose eigenvalues.

    Eigenvalues above ``-1e-10`` are counted as zero.
    """
    ev = pt_spectrum(rho, split)
    return float(-ev[ev < -PSD_TOL].sum())


def is_ppt(rho: DensityMatrix, split: Iterable[int]) -> bool:
    return min_pt_eigenvalue(rho, split) >= -PSD_TOL
