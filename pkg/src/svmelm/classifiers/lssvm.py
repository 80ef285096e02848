"""Least-squares SVM, one-vs-rest for multiclass, with a CV grid search.

Each binary machine solves the bordered system

    [ 0   -y^T         ] [b]   [0]
    [ y   Omega + I/C  ] [a] = [1],   Omega_kl = y_k y_l K_kl.

With D = diag(y), Omega + I/C = D (K + I/C) D, so one Cholesky factor of
``K + I/C`` serves every one-vs-rest machine. Eliminating ``b`` gives

    u = (K + I/C)^-1 y,   v = (K + I/C)^-1 1,
    b = sum(u) / sum(v),  a = y * (u - b v).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from svmelm.classifiers.common import LabelEncoding, argmax_labels, check_query, check_training_data
from svmelm.exceptions import InvalidConfig, SingleClass
from svmelm.kernels import KernelKind, KernelSpec, kernel_matrix
from svmelm.numerics import cholesky_factor, pairwise_sq_dists

GRID_C = (1.0, 100.0, 10000.0)
GRID_SIGMA = (0.0001, 0.01, 1.0, 100.0)
CV_FOLDS = 5


@dataclass(frozen=True)
class TrainedLssvm:
    """One binary machine per column: class k against the rest."""

    anchors: np.ndarray
    alphas: np.ndarray  # N x c, sign-unconstrained
    biases: np.ndarray  # c
    signs: np.ndarray  # N x c of +/-1
    spec: KernelSpec
    C: float
    classes: np.ndarray

    @property
    def dual_coef(self):
        return self.alphas * self.signs


def lssvm_solve(K, Y, C):
    """Bias and multipliers for each column of ``Y`` (N x m, entries +/-1)."""
    if not C > 0:
        raise InvalidConfig(f"C must be positive, got {C}", "C")
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    n = K.shape[0]
    G = 0.5 * (K + K.T) + np.eye(n) / C
    L = cholesky_factor(G)
    rhs = np.column_stack([Y, np.ones(n)])
    sol = scipy.linalg.cho_solve((L, True), rhs)
    U, v = sol[:, :-1], sol[:, -1]
    b = U.sum(axis=0) / v.sum()
    A = Y * (U - np.outer(v, b))
    return b, A


def _fit_from_gram(K, labels, spec, C, X):
    enc = LabelEncoding.fit(labels)
    if enc.n_classes < 2:
        raise SingleClass("LSSVM needs at least two classes")
    b, A = lssvm_solve(K, enc.targets, C)
    return TrainedLssvm(X, A, b, enc.targets, spec, float(C), enc.classes)


def lssvm_fit(X, labels, spec=None, C=1.0):
    X, labels = check_training_data(X, labels, min_classes=2)
    spec = spec or KernelSpec.rbf(1.0)
    return _fit_from_gram(kernel_matrix(spec, X, X), labels, spec, C, X)


def lssvm_scores(model, Q):
    """Real-valued ``sum_i a_i y_i k(x_i, q) + b`` for every one-vs-rest machine."""
    Q = check_query(Q, model.anchors.shape[1])
    return kernel_matrix(model.spec, Q, model.anchors) @ model.dual_coef + model.biases


def lssvm_predict(model, Q):
    return argmax_labels(lssvm_scores(model, Q), model.classes)


def stratified_folds(labels, n_folds, rng):
    """Fold id per row; each class is spread round-robin over a random permutation."""
    gen = rng.generator()
    fold = np.empty(labels.shape[0], dtype=np.int64)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        idx = idx[gen.permutation(idx.shape[0])]
        fold[idx] = np.arange(idx.shape[0]) % n_folds
    return fold


def lssvm_grid_search(X, labels, rng, Cs=GRID_C, sigmas=GRID_SIGMA, kind=KernelKind.RBF,
                      n_folds=CV_FOLDS):
    """Pick (C, sigma) by stratified k-fold accuracy.

    Accuracy ties are broken by the lower mean squared error between held-out
    scores and their +/-1 targets, then by grid order.

    Returns ``(best_C, best_spec, table)`` where ``table`` maps each grid point
    to its mean fold accuracy.
    """
    X, labels = check_training_data(X, labels, min_classes=2)
    kind = KernelKind(kind)
    fold = stratified_folds(labels, n_folds, rng)
    if kind is KernelKind.LINEAR:
        specs = [KernelSpec.linear()]
        grams = [X @ X.T]
    else:
        D = pairwise_sq_dists(X, X)
        specs = [KernelSpec.rbf(s) for s in sigmas]
        grams = [np.exp(-D / (s.sigma * s.sigma)) for s in specs]

    table = {}
    best = None
    for spec, K in zip(specs, grams):
        for C in Cs:
            accs, errs = [], []
            for f in range(n_folds):
                te = np.flatnonzero(fold == f)
                tr = np.flatnonzero(fold != f)
                if te.size == 0 or np.unique(labels[tr]).shape[0] < 2:
                    continue
                m = _fit_from_gram(K[np.ix_(tr, tr)], labels[tr], spec, C, X[tr])
                scores = K[np.ix_(te, tr)] @ m.dual_coef + m.biases
                accs.append(np.mean(argmax_labels(scores, m.classes) == labels[te]))
                target = np.where(labels[te][:, None] == m.classes[None, :], 1.0, -1.0)
                errs.append(np.mean((scores - target) ** 2))
            acc = float(np.mean(accs)) if accs else 0.0
            err = float(np.mean(errs)) if errs else np.inf
            table[(float(C), spec)] = acc
            if best is None or (acc, -err) > (best[0], -best[1]):
                best = (acc, err, float(C), spec)
    return best[2], best[3], table


def lssvm_fit_grid(X, labels, rng, Cs=GRID_C, sigmas=GRID_SIGMA, kind=KernelKind.RBF,
                   n_folds=CV_FOLDS):
    """Grid-search (C, sigma) on the training rows, then refit on all of them."""
    C, spec, _ = lssvm_grid_search(X, labels, rng, Cs, sigmas, kind, n_folds)
    return lssvm_fit(X, labels, spec, C)
