"""C-SVM trained by SMO, with one-vs-one voting for more than two classes."""

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from svmelm import _backend
from svmelm.classifiers.common import check_query, check_training_data
from svmelm.exceptions import (
    DimensionMismatch,
    InvalidConfig,
    MaxIterations,
    SingleClass,
    SvmElmError,
)
from svmelm.kernels import KernelSpec, kernel_matrix
from svmelm.numerics import as_matrix

SMO_TOL = 1e-3
SMO_ITER_PER_ROW = 10_000


@dataclass(frozen=True)
class SmoResult:
    alphas: np.ndarray
    bias: float
    objective: float
    iterations: int
    converged: bool


def dual_objective(K, y, alphas):
    """sum(a) - 1/2 sum_ij y_i y_j a_i a_j K_ij."""
    ay = alphas * y
    return float(alphas.sum() - 0.5 * ay @ K @ ay)


def _bias(y, grad, alphas, C):
    # b = -y_i * grad_i on free vectors; bracket midpoint if none are free
    yg = y * grad
    at_upper = alphas >= C
    at_lower = alphas <= 0
    free = ~(at_upper | at_lower)
    if free.any():
        return -float(yg[free].mean())
    upper_side = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lower_side = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = yg[upper_side].min() if upper_side.any() else np.inf
    lb = yg[lower_side].max() if lower_side.any() else -np.inf
    if not np.isfinite(ub):
        ub = lb
    if not np.isfinite(lb):
        lb = ub
    return -float((ub + lb) / 2.0)


def smo_solve(K, y, C, tol=SMO_TOL, max_iter=None):
    """Solve the SVM dual

        max_a  sum(a) - 1/2 sum_ij y_i y_j a_i a_j K_ij
        s.t.   sum(a * y) = 0,  0 <= a <= C

    by sequential minimal optimization with maximal-violating-pair selection.
    Stops once the KKT violation of the worst pair drops below ``tol`` or
    after ``10000 * N`` pair updates, in which case a :class:`MaxIterations`
    warning is issued and ``converged`` is False.
    """
    K = as_matrix(K, "K")
    y = np.asarray(y, dtype=np.float64).ravel()
    n = K.shape[0]
    if K.shape != (n, n) or y.shape[0] != n:
        raise DimensionMismatch(f"K is {K.shape}, y has {y.shape[0]} entries")
    if not np.all(np.abs(y) == 1.0):
        raise ValueError("labels must be +1 or -1")
    if not (y > 0).any() or not (y < 0).any():
        raise SingleClass("SMO needs both +1 and -1 labels")
    if not C > 0:
        raise InvalidConfig(f"C must be positive, got {C}", "C")
    if max_iter is None:
        max_iter = SMO_ITER_PER_ROW * n

    Ks = 0.5 * (K + K.T)
    Q = np.ascontiguousarray(np.outer(y, y) * Ks)
    alphas, grad, iterations, converged = _backend.smo(Q, y, float(C), float(tol), int(max_iter))
    np.clip(alphas, 0.0, C, out=alphas)
    if not converged:
        warnings.warn(
            f"SMO stopped after {iterations} pair updates without reaching tol={tol}",
            MaxIterations,
            stacklevel=2,
        )
    return SmoResult(
        alphas=alphas,
        bias=_bias(y, grad, alphas, C),
        objective=dual_objective(Ks, y, alphas),
        iterations=int(iterations),
        converged=bool(converged),
    )


@dataclass(frozen=True)
class TrainedSvmBinary:
    alphas: np.ndarray
    bias: float
    support: np.ndarray
    support_vectors: np.ndarray
    support_labels: np.ndarray
    spec: KernelSpec
    C: float
    converged: bool = True

    @property
    def dual_coef(self):
        return self.alphas[self.support] * self.support_labels

    def decision_function(self, Q):
        Q = check_query(Q, self.support_vectors.shape[1])
        if self.support.size == 0:
            return np.full(Q.shape[0], self.bias)
        return kernel_matrix(self.spec, Q, self.support_vectors) @ self.dual_coef + self.bias

    def predict(self, Q):
        # sgn(0) counts as +1 so every query gets a label
        return np.where(self.decision_function(Q) >= 0, 1, -1)


def svm_fit_binary(X, y, spec, C, tol=SMO_TOL, K=None):
    """Fit one binary machine on labels ``y`` in {+1, -1}."""
    X = as_matrix(X, "X")
    y = np.asarray(y, dtype=np.float64).ravel()
    if K is None:
        K = kernel_matrix(spec, X, X)
    res = smo_solve(K, y, C, tol=tol)
    support = np.flatnonzero(res.alphas > 0)
    return TrainedSvmBinary(
        alphas=res.alphas,
        bias=res.bias,
        support=support,
        support_vectors=X[support],
        support_labels=y[support],
        spec=spec,
        C=float(C),
        converged=res.converged,
    )


@dataclass(frozen=True)
class TrainedSvmMulticlass:
    classes: np.ndarray
    pairs: tuple
    machines: tuple
    # per machine, rows of train_x that are its support vectors
    machine_rows: tuple
    train_x: np.ndarray
    spec: KernelSpec
    C: float


def svm_fit(X, labels, spec=None, C=1000.0, tol=SMO_TOL):
    """One-vs-one multiclass SVM: one binary machine per unordered class pair."""
    X, labels = check_training_data(X, labels, min_classes=2)
    spec = spec or KernelSpec.rbf(1.0)
    classes = np.unique(labels)
    K_full = kernel_matrix(spec, X, X)
    pairs, machines, rows = [], [], []
    for a, b in itertools.combinations(range(classes.shape[0]), 2):
        idx = np.flatnonzero((labels == classes[a]) | (labels == classes[b]))
        y = np.where(labels[idx] == classes[a], 1.0, -1.0)
        try:
            m = svm_fit_binary(X[idx], y, spec, C, tol=tol, K=K_full[np.ix_(idx, idx)])
        except SvmElmError as exc:
            exc.args = (f"class pair ({classes[a]}, {classes[b]}): {exc}",) + exc.args[1:]
            raise
        pairs.append((a, b))
        machines.append(m)
        rows.append(idx[m.support])
    return TrainedSvmMulticlass(
        classes=classes,
        pairs=tuple(pairs),
        machines=tuple(machines),
        machine_rows=tuple(rows),
        train_x=X,
        spec=spec,
        C=float(C),
    )


def svm_votes(model, Q):
    Q = check_query(Q, model.train_x.shape[1])
    used = np.unique(np.concatenate(model.machine_rows)) if model.machine_rows else np.array([], int)
    Kq = kernel_matrix(model.spec, Q, model.train_x[used])
    col = np.searchsorted(used, np.arange(model.train_x.shape[0]))
    votes = np.zeros((Q.shape[0], model.classes.shape[0]), dtype=np.int64)
    rows = np.arange(Q.shape[0])
    for (a, b), m, r in zip(model.pairs, model.machines, model.machine_rows):
        f = Kq[:, col[r]] @ m.dual_coef + m.bias
        winner = np.where(f >= 0, a, b)
        votes[rows, winner] += 1
    return votes


def svm_predict(model, Q):
    """Majority vote over the pairwise machines; vote ties go to the lowest class index."""
    votes = svm_votes(model, Q)
    return model.classes[np.argmax(votes, axis=1)]
