"""1-nearest-neighbour under Euclidean distance."""

from dataclasses import dataclass

import numpy as np

from svmelm.classifiers.common import check_query, check_training_data
from svmelm.numerics import pairwise_sq_dists


@dataclass(frozen=True)
class TrainedNN:
    train_x: np.ndarray
    train_labels: np.ndarray


def nn_fit(X, labels):
    X, labels = check_training_data(X, labels)
    return TrainedNN(X, labels)


def nn_predict(model, Q):
    """Label of the closest training row; ties go to the lowest row index."""
    Q = check_query(Q, model.train_x.shape[1])
    D = pairwise_sq_dists(Q, model.train_x)
    return model.train_labels[np.argmin(D, axis=1)]
