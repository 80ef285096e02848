import numpy as np
import pytest

from oracles import blobs, lssvm_bordered_matrix
from svmelm.classifiers import lssvm_fit, lssvm_predict, lssvm_scores, lssvm_solve
from svmelm.classifiers.lssvm import lssvm_fit_grid, lssvm_grid_search, stratified_folds
from svmelm.exceptions import SingleClass
from svmelm.kernels import KernelSpec, kernel_matrix
from svmelm.numerics import RngStream


def kkt_errors(K, y, C, b, a):
    """Max violations of: sum a*y = 0 and a_i = C * xi_i with xi recomputed from outputs."""
    f = K @ (a * y) + b
    xi = 1.0 - y * f
    return abs(a @ y), np.abs(a - C * xi).max()


def test_symmetric_two_points_zero_bias():
    X = np.array([[-1.0], [1.0]])
    y = np.array([-1.0, 1.0])
    b, A = lssvm_solve(kernel_matrix(KernelSpec.linear(), X, X), y, 10.0)
    assert b[0] == pytest.approx(0.0, abs=1e-14)
    np.testing.assert_allclose(A[:, 0], A[0, 0])


@pytest.mark.parametrize("seed", range(5))
def test_bordered_system_residual(seed):
    g = np.random.default_rng(seed)
    X = g.normal(size=(25, 3))
    y = np.where(g.random(25) < 0.5, 1.0, -1.0)
    y[:2] = [1, -1]
    C = float(g.choice([0.1, 1.0, 100.0]))
    K = kernel_matrix(KernelSpec.rbf(1.5), X, X)
    b, A = lssvm_solve(K, y, C)
    M = lssvm_bordered_matrix(K, y, C)
    rhs = np.concatenate([[0.0], np.ones(25)])
    assert np.abs(M @ np.concatenate([b, A[:, 0]]) - rhs).max() < 1e-8


def test_kkt_recomputation_20_points():
    g = np.random.default_rng(20)
    X = g.normal(size=(20, 2))
    y = np.where(X[:, 0] > 0, 1.0, -1.0)
    K = kernel_matrix(KernelSpec.rbf(1.0), X, X)
    b, A = lssvm_solve(K, y, 10.0)
    eq, stat = kkt_errors(K, y, 10.0, b[0], A[:, 0])
    assert eq < 1e-8
    assert stat < 1e-6


def test_one_vs_rest_machines_satisfy_kkt():
    X, labels = blobs(3, 10, 2, sep=4.0, seed=1)
    model = lssvm_fit(X, labels, KernelSpec.rbf(2.0), 10.0)
    K = kernel_matrix(model.spec, X, X)
    for k in range(3):
        eq, stat = kkt_errors(K, model.signs[:, k], 10.0, model.biases[k], model.alphas[:, k])
        assert eq < 1e-8 and stat < 1e-6


def test_separable_training_points():
    X, labels = blobs(4, 15, 2, sep=10.0, seed=2)
    model = lssvm_fit(X, labels, KernelSpec.rbf(3.0), 100.0)
    assert np.array_equal(lssvm_predict(model, X), labels)


def test_binary_argmax_matches_sign():
    g = np.random.default_rng(3)
    X = g.normal(size=(30, 2))
    labels = np.where(X[:, 1] > 0, 2, 5)
    model = lssvm_fit(X, labels, KernelSpec.rbf(1.0), 10.0)
    Q = g.normal(size=(40, 2))
    S = lssvm_scores(model, Q)
    np.testing.assert_allclose(S[:, 1], -S[:, 0], atol=1e-10)
    np.testing.assert_array_equal(lssvm_predict(model, Q), np.where(S[:, 0] >= S[:, 1], 2, 5))


def test_duplicate_queries_identical():
    X, labels = blobs(3, 10, 2, sep=3.0, seed=4)
    model = lssvm_fit(X, labels, KernelSpec.rbf(1.0), 1.0)
    q = np.repeat(X[:1], 5, axis=0)
    assert len(set(lssvm_predict(model, q))) == 1


def test_single_class_rejected():
    with pytest.raises(SingleClass):
        lssvm_fit(np.ones((3, 2)), [1, 1, 1])


def test_stratified_folds_balanced():
    labels = np.repeat([1, 2, 3], 10)
    fold = stratified_folds(labels, 5, RngStream(0, 1))
    for cls in (1, 2, 3):
        assert np.bincount(fold[labels == cls], minlength=5).tolist() == [2] * 5


def test_grid_search_picks_sensible_width():
    X, labels = blobs(4, 10, 2, sep=10.0, seed=7)
    C, spec, table = lssvm_grid_search(X, labels, RngStream(3, 0))
    assert len(table) == 12
    assert table[(C, spec)] == max(table.values())
    # sigma = 1e-4 makes K the identity and cannot generalize
    assert spec.sigma >= 1.0
    model = lssvm_fit_grid(X, labels, RngStream(3, 0))
    assert model.C == C and model.spec == spec


def test_grid_search_deterministic():
    X, labels = blobs(3, 8, 2, sep=2.0, seed=8)
    a = lssvm_grid_search(X, labels, RngStream(5, 2))
    b = lssvm_grid_search(X, labels, RngStream(5, 2))
    assert a == b
