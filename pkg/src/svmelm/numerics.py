"""Dense linear algebra and reproducible random streams.

Matrices are plain C-contiguous float64 numpy arrays.
"""

import hashlib
import struct
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from svmelm import _backend
from svmelm.exceptions import (
    DimensionMismatch,
    InvalidRange,
    NotPositiveDefinite,
    NotSymmetric,
)

JITTER_SCALE = 1e-12
JITTER_DOUBLINGS = 3
SYMMETRY_RTOL = 1e-8

_MASK64 = (1 << 64) - 1


def stable_hash(*parts):
    """64-bit hash of ``parts`` that is identical across processes and platforms.

    Python's built-in ``hash`` is salted per process for strings, so it cannot
    be used to derive stream ids.
    """
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        token = repr(p).encode()
        h.update(struct.pack("<I", len(token)))
        h.update(token)
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream id) pair naming one independent random sequence.

    Backed by numpy's counter-based Philox generator, keyed through a
    ``SeedSequence`` whose spawn key is the stream id. Every call to
    :meth:`generator` restarts the sequence from the beginning.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        object.__setattr__(self, "stream_id", int(self.stream_id) & _MASK64)

    def generator(self):
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))

    def substream(self, *key):
        return RngStream(self.seed, stable_hash(self.stream_id, *key))


def as_matrix(a, name="matrix"):
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {a.shape}")
    return a


def cholesky_factor(A):
    """Lower Cholesky factor of a symmetric positive-definite matrix.

    On a non-positive pivot, adds ``1e-12 * trace(A) / n`` to the diagonal and
    retries, doubling the jitter up to three times.
    """
    A = as_matrix(A, "A")
    n = A.shape[0]
    if A.shape[1] != n or n < 1:
        raise DimensionMismatch(f"A must be square and non-empty, got {A.shape}")
    scale = max(np.abs(A).max(), np.finfo(float).tiny)
    if np.abs(A - A.T).max() > SYMMETRY_RTOL * scale:
        raise NotSymmetric("A is not symmetric within 1e-8 relative")

    try:
        return scipy.linalg.cholesky(A, lower=True, check_finite=True)
    except np.linalg.LinAlgError:
        pass
    base = JITTER_SCALE * abs(np.trace(A)) / n
    if base == 0.0:
        base = JITTER_SCALE
    jitter = base
    for _ in range(JITTER_DOUBLINGS + 1):
        try:
            return scipy.linalg.cholesky(A + jitter * np.eye(n), lower=True)
        except np.linalg.LinAlgError:
            jitter *= 2.0
    raise NotPositiveDefinite(
        f"Cholesky failed with diagonal jitter up to {jitter / 2.0:.3g}; "
        "kernel/regularization combination is ill-conditioned"
    )


def cholesky_solve(A, B):
    """Solve ``A X = B`` for symmetric positive-definite ``A``."""
    L = cholesky_factor(A)
    B = as_matrix(B, "B")
    if B.shape[0] != L.shape[0]:
        raise DimensionMismatch(f"A is {L.shape}, B has {B.shape[0]} rows")
    return scipy.linalg.cho_solve((L, True), B)


def uniform_matrix(rng, rows, cols, lo, hi):
    """``rows x cols`` matrix with entries uniform on ``[lo, hi)``."""
    if not lo < hi:
        raise InvalidRange(f"need lo < hi, got lo={lo}, hi={hi}")
    if rows < 0 or cols < 0:
        raise InvalidRange(f"negative shape ({rows}, {cols})")
    out = rng.generator().uniform(lo, hi, size=(rows, cols))
    # lo + (hi - lo) * u can round up to hi
    return np.minimum(out, np.nextafter(hi, lo))


def pairwise_sq_dists(X, Y):
    """Squared Euclidean distances between the rows of ``X`` and ``Y``.

    Computed from explicit coordinate differences, so identical rows give
    exactly zero and every entry is non-negative.
    """
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    if X.shape[1] != Y.shape[1]:
        raise DimensionMismatch(
            f"column counts differ: {X.shape[1]} vs {Y.shape[1]}"
        )
    return _backend.sq_dists(X, Y)
