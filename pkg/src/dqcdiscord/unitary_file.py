"""Plain-text unitary interchange format.

The first line holds the dimension ``d``.  It is followed by ``d`` lines, one
per matrix row, each with ``d`` whitespace-separated ``re im`` pairs.  Blank
lines and lines starting with ``#`` are ignored.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import NumericError, ValidationError
from .matcore import unitarity_residual

LOAD_TOL = 1e-8


class UnitaryFileError(ValidationError):
    """The file does not follow the unitary text format."""


def parse_unitary(text: str) -> np.ndarray:
    """Parse the text format and return the matrix.

    Matrices within ``1e-8`` of unitary are snapped to the nearest unitary
    (polar factor) so downstream ``1e-10`` checks hold.

    Raises
    ------
    UnitaryFileError
        Malformed content.
    NumericError
        Unitarity residual above ``1e-8``.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise UnitaryFileError("empty unitary file")
    try:
        dim = int(lines[0])
    except ValueError as exc:
        raise UnitaryFileError(f"bad dimension line {lines[0]!r}") from exc
    if dim < 1 or len(lines) != dim + 1:
        raise UnitaryFileError(f"expected {dim} matrix rows, found {len(lines) - 1}")
    rows = []
    for r, ln in enumerate(lines[1:]):
        try:
            vals = [float(tok) for tok in ln.split()]
        except ValueError as exc:
            raise UnitaryFileError(f"row {r}: non-numeric entry") from exc
        if len(vals) != 2 * dim:
            raise UnitaryFileError(f"row {r}: expected {2 * dim} numbers, got {len(vals)}")
        pairs = np.asarray(vals).reshape(dim, 2)
        rows.append(pairs[:, 0] + 1j * pairs[:, 1])
    u = np.array(rows)
    if not np.all(np.isfinite(u)):
        raise UnitaryFileError("non-finite entry")
    if unitarity_residual(u) > LOAD_TOL:
        raise NumericError(f"matrix is not unitary (residual {unitarity_residual(u):.2e})")
    w, _, vh = np.linalg.svd(u)
    return w @ vh


def load_unitary(path: str | Path) -> np.ndarray:
    return parse_unitary(Path(path).read_text())


def format_unitary(u: np.ndarray) -> str:
    u = np.asarray(u, dtype=complex)
    lines = [str(u.shape[0])]
    for row in u:
        lines.append(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"


def save_unitary(u: np.ndarray, path: str | Path) -> None:
    Path(path).write_text(format_unitary(u))
