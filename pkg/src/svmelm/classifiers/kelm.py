"""Kernel ELM: closed-form ``k(z, X) (Omega + I/C)^-1 T`` predictor."""

from dataclasses import dataclass

import numpy as np

from svmelm.classifiers.common import LabelEncoding, argmax_labels, check_query, check_training_data
from svmelm.exceptions import InvalidConfig
from svmelm.kernels import KernelSpec, kernel_matrix
from svmelm.numerics import cholesky_solve


@dataclass(frozen=True)
class TrainedKelm:
    anchors: np.ndarray
    coeff: np.ndarray  # N x c
    spec: KernelSpec
    C: float
    classes: np.ndarray


def kelm_fit(X, labels, spec=None, C=100.0):
    X, labels = check_training_data(X, labels, min_classes=2)
    if not C > 0:
        raise InvalidConfig(f"C must be positive, got {C}", "C")
    spec = spec or KernelSpec.rbf(0.01)
    enc = LabelEncoding.fit(labels)
    omega = kernel_matrix(spec, X, X)
    coeff = cholesky_solve(omega + np.eye(X.shape[0]) / C, enc.targets)
    return TrainedKelm(X, coeff, spec, float(C), enc.classes)


def kelm_scores(model, Q):
    Q = check_query(Q, model.anchors.shape[1])
    return kernel_matrix(model.spec, Q, model.anchors) @ model.coeff


def kelm_predict(model, Q):
    return argmax_labels(kelm_scores(model, Q), model.classes)
