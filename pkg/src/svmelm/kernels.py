"""Linear and RBF kernels.

The RBF width follows ``exp(-||x - y||^2 / sigma^2)``: the denominator is
``sigma**2``, *not* ``2 * sigma**2`` and not a ``gamma`` multiplier. A value
``sigma`` here equals ``gamma = 1 / sigma**2`` in scikit-learn/libsvm terms.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from svmelm.exceptions import DimensionMismatch, InvalidConfig
from svmelm.numerics import as_matrix, pairwise_sq_dists


class KernelKind(str, enum.Enum):
    LINEAR = "linear"
    RBF = "rbf"


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind = KernelKind.RBF
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        if self.kind is KernelKind.RBF:
            if not (self.sigma > 0 and math.isfinite(self.sigma)):
                raise InvalidConfig(f"RBF sigma must be positive, got {self.sigma}", "sigma")

    @classmethod
    def linear(cls):
        return cls(KernelKind.LINEAR, 1.0)

    @classmethod
    def rbf(cls, sigma):
        return cls(KernelKind.RBF, float(sigma))

    def __str__(self):
        if self.kind is KernelKind.LINEAR:
            return "linear"
        return f"rbf(sigma={self.sigma:g})"


def kernel_matrix(spec, X, Y):
    """Gram matrix ``K[i, j] = k(X[i], Y[j])``."""
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    if spec.kind is KernelKind.LINEAR:
        if X.shape[1] != Y.shape[1]:
            raise DimensionMismatch(f"column counts differ: {X.shape[1]} vs {Y.shape[1]}")
        return X @ Y.T
    D = pairwise_sq_dists(X, Y)
    np.maximum(D, 0.0, out=D)
    D /= -(spec.sigma * spec.sigma)
    return np.exp(D, out=D)
