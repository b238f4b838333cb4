"""Reproducible Haar-random unitaries and seeded substreams.

Randomness comes from numpy's ``PCG64`` bit generator seeded through
``numpy.random.SeedSequence``.  A stream is identified by a 64-bit master
seed and a substream index; the pair is fed to ``SeedSequence`` as
``entropy=master_seed, spawn_key=(index, *path)``, which is the same
hash-based mixing numpy uses for ``SeedSequence.spawn``.  Distinct keys give
independent, non-overlapping PCG64 streams.  Gaussian variates come from
``Generator.standard_normal`` (numpy's ziggurat method).

With numpy >= 2 the sequence produced for a given ``(seed, index)`` is fixed,
so ensembles can be rerun bit-for-bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class RandomStream:
    """Immutable handle to one deterministic random stream.

    Every call to :meth:`generator` starts the stream from the beginning,
    so a ``RandomStream`` can be shared freely between workers.
    """

    master_seed: int
    stream_index: int = 0
    path: tuple[int, ...] = ()

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(
            entropy=self.master_seed & SEED_MASK,
            spawn_key=(self.stream_index, *self.path),
        )

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed_sequence()))

    def child(self, key: int) -> "RandomStream":
        """A further independent stream nested under this one."""
        if key < 0:
            raise ValidationError("child key must be nonnegative")
        return RandomStream(self.master_seed, self.stream_index, (*self.path, int(key)))


def derive_substream(master_seed: int, index: int) -> RandomStream:
    if index < 0:
        raise ValidationError("substream index must be nonnegative")
    return RandomStream(int(master_seed), int(index))


def haar_unitary(dim: int, stream: RandomStream | np.random.Generator) -> np.ndarray:
    """Sample a ``dim x dim`` unitary from the Haar measure.

    A complex Ginibre matrix is QR-factorised and each column of ``Q`` is
    multiplied by the phase of the matching diagonal entry of ``R``.  Without
    that correction the distribution of ``Q`` depends on LAPACK's sign
    convention and is not Haar.
    """
    if dim < 1:
        raise ValidationError("dimension must be positive")
    rng = stream.generator() if isinstance(stream, RandomStream) else stream
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_state(dim: int, stream: RandomStream | np.random.Generator) -> np.ndarray:
    """Unit vector uniformly distributed on the complex sphere (Haar pure state)."""
    rng = stream.generator() if isinstance(stream, RandomStream) else stream
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)
