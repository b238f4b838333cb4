"""Dense complex matrix algebra on qubit (or general) tensor-product spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Density
matrices additionally carry the list of subsystem dimensions so that partial
traces and partial transposes know how to reshape them.  Subsystem 0 is the
leftmost Kronecker factor, which for DQC1 states is the control qubit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, NumericError, ValidationError

#: Largest matrix dimension any operation will build (n = 11 mixed qubits
#: plus the control qubit).
MAX_DIM = 4096

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
UNITARY_TOL = 1e-10
EIGEN_HERMITIAN_TOL = 1e-10
PHASE_CLUSTER_TOL = 1e-8

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix together with its subsystem dimensions.

    Use :func:`density_matrix` to build one; it checks the invariants and
    freezes the underlying array.
    """

    mat: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def num_subsystems(self) -> int:
        return len(self.dims)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def _check_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValidationError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericError("matrix has non-finite entries")


def hermiticity_residual(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


def unitarity_residual(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def qubit_dims(dim: int) -> tuple[int, ...]:
    """Subsystem dimensions ``(2, 2, ..., 2)`` for a ``dim``-dimensional space."""
    k = int(round(np.log2(dim)))
    if dim < 2 or 2**k != dim:
        raise ValidationError(f"dimension {dim} is not a power of two")
    return (2,) * k


def density_matrix(
    mat: np.ndarray,
    dims: Sequence[int] | None = None,
    *,
    check_psd: bool = True,
) -> DensityMatrix:
    """Validate ``mat`` as a density matrix and wrap it.

    Parameters
    ----------
    mat : array_like
        Square complex matrix.
    dims : sequence of int, optional
        Subsystem dimensions; their product must equal the matrix dimension.
        Defaults to all qubits.
    check_psd : bool
        Run an eigensolve to confirm positivity.  Callers that construct a
        state which is PSD by construction may skip it.

    Raises
    ------
    ValidationError
        Shape or ``dims`` mismatch.
    NumericError
        Hermiticity, trace or positivity outside tolerance.
    """
    a = np.asarray(mat, dtype=complex)
    _check_square(a)
    if a.shape[0] > MAX_DIM:
        raise DimensionError(f"dimension {a.shape[0]} exceeds MAX_DIM={MAX_DIM}")
    dims = qubit_dims(a.shape[0]) if dims is None else tuple(int(d) for d in dims)
    if any(d < 1 for d in dims) or int(np.prod(dims)) != a.shape[0]:
        raise ValidationError(f"dims {dims} do not multiply to {a.shape[0]}")
    if hermiticity_residual(a) > HERMITIAN_TOL:
        raise NumericError("density matrix is not Hermitian")
    if abs(np.trace(a) - 1.0) > TRACE_TOL:
        raise NumericError(f"density matrix trace {np.trace(a).real!r} != 1")
    if check_psd and np.linalg.eigvalsh(a)[0] < -PSD_TOL:
        raise NumericError("density matrix is not positive semidefinite")
    return DensityMatrix(_frozen(a), dims)


def pure_state(psi: np.ndarray, dims: Sequence[int] | None = None) -> DensityMatrix:
    """Projector onto the normalised vector ``psi``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return density_matrix(np.outer(psi, psi.conj()), dims, check_psd=False)


def tensor_product(a: np.ndarray, b: np.ndarray, *, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker product with ``a``'s indices major."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_square(a)
    _check_square(b)
    if a.shape[0] * b.shape[0] > max_dim:
        raise DimensionError(
            f"tensor product dimension {a.shape[0] * b.shape[0]} exceeds {max_dim}"
        )
    return np.kron(a, b)


def tensor_states(*states: DensityMatrix) -> DensityMatrix:
    """Tensor product of density matrices, concatenating their ``dims``."""
    mat = states[0].mat
    dims = list(states[0].dims)
    for s in states[1:]:
        mat = tensor_product(mat, s.mat)
        dims.extend(s.dims)
    return density_matrix(mat, dims, check_psd=False)


def _index_set(indices: Iterable[int], k: int, *, allow_full: bool) -> list[int]:
    idx = sorted(set(int(i) for i in indices))
    if not idx:
        raise ValidationError("index set must be nonempty")
    if idx[0] < 0 or idx[-1] >= k:
        raise ValidationError(f"subsystem indices {idx} out of range for {k} subsystems")
    if not allow_full and len(idx) == k:
        raise ValidationError("index set must be a proper subset")
    return idx


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the subsystems listed in ``keep`` (order preserved)."""
    k = rho.num_subsystems
    kept = _index_set(keep, k, allow_full=True)
    if len(kept) == k:
        return rho
    traced = [i for i in range(k) if i not in kept]
    dk = int(np.prod([rho.dims[i] for i in kept]))
    dt = int(np.prod([rho.dims[i] for i in traced]))
    t = rho.mat.reshape(rho.dims + rho.dims)
    perm = kept + traced
    t = t.transpose(perm + [k + i for i in perm]).reshape(dk, dt, dk, dt)
    reduced = np.einsum("ijkj->ik", t)
    return density_matrix(reduced, [rho.dims[i] for i in kept], check_psd=False)


def partial_transpose(rho: DensityMatrix, transposed: Iterable[int]) -> np.ndarray:
    """Transpose the listed subsystems, leaving the others untouched.

    The result is Hermitian with unit trace but need not be positive.
    """
    k = rho.num_subsystems
    idx = _index_set(transposed, k, allow_full=False)
    t = rho.mat.reshape(rho.dims + rho.dims)
    axes = list(range(2 * k))
    for i in idx:
        axes[i], axes[k + i] = axes[k + i], axes[i]
    return t.transpose(axes).reshape(rho.dim, rho.dim)


def hermitian_eigenvalues(h: np.ndarray) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, ascending, with multiplicity."""
    h = np.asarray(h, dtype=complex)
    _check_square(h)
    if hermiticity_residual(h) > EIGEN_HERMITIAN_TOL:
        raise NumericError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(h)


def unitary_eigenphases(u: np.ndarray, *, cluster_tol: float = PHASE_CLUSTER_TOL) -> np.ndarray:
    """Angles ``theta_k`` in ``[0, 2*pi)`` with ``exp(1j*theta_k)`` the eigenvalues of ``u``.

    Only Hermitian eigensolves are used.  The Hermitian part
    ``A = (U + U^H)/2`` is diagonalised first; eigenvalues of ``A`` closer
    than ``cluster_tol`` form a cluster, inside which the anti-Hermitian part
    ``B = (U - U^H)/2i`` is diagonalised to separate ``theta`` from
    ``-theta``.  Because ``U`` is normal, every resulting vector is an
    eigenvector of ``U`` and the phase is read off its Rayleigh quotient.

    Returns
    -------
    np.ndarray
        Phases sorted ascending.
    """
    u = np.asarray(u, dtype=complex)
    _check_square(u)
    if unitarity_residual(u) > UNITARY_TOL:
        raise NumericError("matrix is not unitary within tolerance")
    a = 0.5 * (u + u.conj().T)
    b = -0.5j * (u - u.conj().T)
    w, v = np.linalg.eigh(a)

    start = 0
    dim = len(w)
    while start < dim:
        stop = start + 1
        while stop < dim and w[stop] - w[stop - 1] <= cluster_tol:
            stop += 1
        if stop - start > 1:
            block = v[:, start:stop]
            bc = block.conj().T @ b @ block
            _, rot = np.linalg.eigh(0.5 * (bc + bc.conj().T))
            v[:, start:stop] = block @ rot
        start = stop

    rayleigh = np.einsum("ik,ij,jk->k", v.conj(), u, v)
    theta = np.mod(np.angle(rayleigh), TWO_PI)
    theta[theta >= TWO_PI] = 0.0
    return np.sort(theta)
