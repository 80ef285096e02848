"""The compiled core and the numpy fallback must agree bit for bit."""

import numpy as np

from svmelm import _backend, _kernels_py
from svmelm.kernels import KernelSpec, kernel_matrix


def _problem(seed, n=60):
    g = np.random.default_rng(seed)
    X = g.normal(size=(n, 4))
    y = np.where(X[:, 0] + 0.5 * g.normal(size=n) > 0, 1.0, -1.0)
    K = kernel_matrix(KernelSpec.rbf(1.5), X, X)
    return np.ascontiguousarray(np.outer(y, y) * K), y


def test_sq_dists_each_backend(backend_impl, rng):
    X, Y = rng.normal(size=(7, 5)), rng.normal(size=(3, 5))
    ref = ((X[:, None, :] - Y[None, :, :]) ** 2).sum(-1)
    np.testing.assert_allclose(backend_impl.sq_dists(X, Y), ref, atol=1e-12)


def test_smo_each_backend_converges(backend_impl):
    Q, y = _problem(0)
    a, G, it, ok = backend_impl.smo(Q, y, 10.0, 1e-3, 600_000)
    assert ok and it > 0
    assert np.all((a >= 0) & (a <= 10.0))
    assert abs(a @ y) < 1e-9
    np.testing.assert_allclose(G, Q @ a - 1.0, atol=1e-9)


def test_backends_bit_identical():
    try:
        from svmelm import _ext
    except ImportError:
        import pytest

        pytest.skip("compiled core not built")
    for seed in range(5):
        Q, y = _problem(seed)
        r1 = _ext.smo(Q, y, 5.0, 1e-3, 600_000)
        r2 = _kernels_py.smo(Q, y, 5.0, 1e-3, 600_000)
        assert r1[2] == r2[2]
        assert r1[0].tobytes() == r2[0].tobytes()
        assert r1[1].tobytes() == r2[1].tobytes()
    g = np.random.default_rng(9)
    X, Y = g.normal(size=(20, 33)), g.normal(size=(15, 33))
    assert _ext.sq_dists(X, Y).tobytes() == _kernels_py.sq_dists(X, Y).tobytes()


def test_iteration_cap_respected(backend_impl):
    Q, y = _problem(1)
    a, G, it, ok = backend_impl.smo(Q, y, 10.0, 1e-3, 3)
    assert it == 3 and not ok


def test_backend_name():
    assert _backend.NAME in ("compiled", "python")
