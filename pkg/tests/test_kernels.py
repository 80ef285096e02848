import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svmelm.exceptions import DimensionMismatch, InvalidConfig
from svmelm.kernels import KernelKind, KernelSpec, kernel_matrix


def test_rbf_identical_rows_is_one(rng):
    X = rng.normal(size=(4, 3))
    for sigma in (1e-3, 1.0, 50.0):
        np.testing.assert_array_equal(np.diag(kernel_matrix(KernelSpec.rbf(sigma), X, X)), 1.0)


def test_linear_orthonormal_rows_give_identity():
    E = np.eye(2)
    np.testing.assert_array_equal(kernel_matrix(KernelSpec.linear(), E, E), np.eye(2))


def test_rbf_denominator_is_sigma_squared():
    # exp(-||0 - 1||^2 / 1^2) = e^-1; the 2*sigma^2 convention would give e^-0.5
    k = kernel_matrix(KernelSpec.rbf(1.0), [[0.0]], [[1.0]])[0, 0]
    assert abs(k - math.exp(-1.0)) < 1e-12
    k2 = kernel_matrix(KernelSpec.rbf(2.0), [[0.0, 0.0]], [[1.0, 1.0]])[0, 0]
    assert abs(k2 - math.exp(-2.0 / 4.0)) < 1e-12


def test_linear_matches_matmul(rng):
    X, Y = rng.normal(size=(5, 4)), rng.normal(size=(3, 4))
    np.testing.assert_allclose(kernel_matrix(KernelSpec.linear(), X, Y), X @ Y.T, atol=1e-10)


def test_dimension_mismatch():
    for spec in (KernelSpec.linear(), KernelSpec.rbf(1.0)):
        with pytest.raises(DimensionMismatch):
            kernel_matrix(spec, np.ones((2, 3)), np.ones((2, 2)))


@pytest.mark.parametrize("sigma", [0.0, -1.0, float("nan")])
def test_invalid_sigma(sigma):
    with pytest.raises(InvalidConfig):
        KernelSpec.rbf(sigma)


def test_linear_ignores_sigma():
    assert KernelSpec(KernelKind.LINEAR, -3.0).kind is KernelKind.LINEAR


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 12),
    st.integers(1, 6),
    st.sampled_from(["linear", 0.1, 1.0, 10.0]),
    st.integers(0, 2**32 - 1),
)
def test_gram_symmetric_psd(n, d, kind, seed):
    g = np.random.default_rng(seed)
    X = g.normal(size=(n, d))
    spec = KernelSpec.linear() if kind == "linear" else KernelSpec.rbf(kind)
    K = kernel_matrix(spec, X, X)
    assert np.array_equal(K, K.T)
    for _ in range(5):
        v = g.normal(size=n)
        assert v @ K @ v >= -1e-8 * (v @ v)
    if spec.kind is KernelKind.RBF:
        # strictly positive unless exp underflows for far-apart rows
        assert np.all(K >= 0) and np.all(K <= 1.0)
        if spec.sigma >= 1.0:
            assert np.all(K > 0)
