"""Input validation and the +/-1 one-hot label encoding."""

from dataclasses import dataclass

import numpy as np

from svmelm.exceptions import DimensionMismatch, EmptyDataset, SingleClass
from svmelm.numerics import as_matrix


@dataclass(frozen=True)
class LabelEncoding:
    """Sorted class ids and the matching N x c target matrix of +/-1."""

    classes: np.ndarray
    targets: np.ndarray

    @classmethod
    def fit(cls, labels):
        labels = np.asarray(labels)
        classes, index = np.unique(labels, return_inverse=True)
        T = -np.ones((labels.shape[0], classes.shape[0]))
        T[np.arange(labels.shape[0]), index] = 1.0
        return cls(classes, T)

    @property
    def n_classes(self):
        return self.classes.shape[0]


def check_training_data(X, labels, min_classes=1):
    X = as_matrix(X, "X")
    labels = np.asarray(labels).ravel()
    if X.shape[0] == 0:
        raise EmptyDataset("no training rows")
    if labels.shape[0] != X.shape[0]:
        raise DimensionMismatch(f"{X.shape[0]} rows but {labels.shape[0]} labels")
    if X.shape[1] == 0:
        raise EmptyDataset("training rows have zero features")
    if not np.all(np.isfinite(X)):
        raise ValueError("training features contain NaN or Inf")
    if min_classes > 1 and np.unique(labels).shape[0] < min_classes:
        raise SingleClass(f"need at least {min_classes} classes, got labels {np.unique(labels)}")
    return X, labels


def check_query(Q, d):
    Q = as_matrix(Q, "Q")
    if Q.shape[1] != d:
        raise DimensionMismatch(f"query has {Q.shape[1]} features, model expects {d}")
    return Q


def argmax_labels(scores, classes):
    # np.argmax returns the first maximum, i.e. the lowest class index on ties
    return classes[np.argmax(scores, axis=1)]
