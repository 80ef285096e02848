"""Extreme learning machine: random hidden layer, regularized least-squares output."""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from svmelm.classifiers.common import LabelEncoding, argmax_labels, check_query, check_training_data
from svmelm.exceptions import DimensionMismatch, InvalidConfig
from svmelm.numerics import as_matrix, cholesky_solve, uniform_matrix

ACTIVATIONS = {
    "sigmoid": expit,
    "tanh": np.tanh,
}

# sampling ranges for the random hidden layer
WEIGHT_RANGE = (-1.0, 1.0)
BIAS_RANGE = (0.0, 1.0)


@dataclass(frozen=True)
class TrainedElm:
    input_weights: np.ndarray  # d x L
    biases: np.ndarray  # L
    beta: np.ndarray  # L x c
    activation: str
    C: float
    classes: np.ndarray
    form: str  # "primal" (L x L solve) or "dual" (N x N solve)


def elm_hidden(X, W, B, activation="sigmoid"):
    """Hidden-layer output ``h(X W + B)``, one row per sample."""
    X = as_matrix(X, "X")
    W = as_matrix(W, "W")
    B = np.asarray(B, dtype=np.float64).ravel()
    if X.shape[1] != W.shape[0] or W.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"X {X.shape}, W {W.shape}, B {B.shape} do not chain")
    try:
        h = ACTIVATIONS[activation]
    except KeyError:
        raise InvalidConfig(f"unknown activation {activation!r}", "activation") from None
    return h(X @ W + B)


def elm_output_weights(H, T, C, form="auto"):
    """Regularized least-squares output weights.

    ``primal``: (H'H + I/C)^-1 H'T, an L x L solve.
    ``dual``:   H'(HH' + I/C)^-1 T, an N x N solve.
    ``auto`` picks primal when N >= L.
    """
    if not C > 0:
        raise InvalidConfig(f"C must be positive, got {C}", "C")
    n, L = H.shape
    if form == "auto":
        form = "primal" if n >= L else "dual"
    if form == "primal":
        return cholesky_solve(H.T @ H + np.eye(L) / C, H.T @ T)
    if form == "dual":
        return H.T @ cholesky_solve(H @ H.T + np.eye(n) / C, T)
    raise InvalidConfig(f"unknown form {form!r}", "form")


def draw_hidden_layer(rng, d, L):
    W = uniform_matrix(rng.substream("W"), d, L, *WEIGHT_RANGE)
    B = uniform_matrix(rng.substream("B"), 1, L, *BIAS_RANGE).ravel()
    return W, B


def elm_fit(X, labels, L=5000, C=100.0, rng=None, activation="sigmoid", weights=None,
            form="auto"):
    """Fit an ELM.

    ``weights`` may supply a fixed ``(W, B)`` pair instead of drawing them from
    ``rng``; ``form`` forces one of the two closed forms.
    """
    X, labels = check_training_data(X, labels, min_classes=2)
    if L < 1:
        raise InvalidConfig(f"L must be >= 1, got {L}", "L")
    if weights is None:
        if rng is None:
            raise InvalidConfig("an RngStream is required to draw hidden weights", "rng")
        W, B = draw_hidden_layer(rng, X.shape[1], L)
    else:
        W, B = as_matrix(weights[0], "W"), np.asarray(weights[1], dtype=np.float64).ravel()
    enc = LabelEncoding.fit(labels)
    H = elm_hidden(X, W, B, activation)
    if form == "auto":
        form = "primal" if H.shape[0] >= H.shape[1] else "dual"
    beta = elm_output_weights(H, enc.targets, C, form)
    return TrainedElm(W, B, beta, activation, float(C), enc.classes, form)


def elm_scores(model, Q):
    Q = check_query(Q, model.input_weights.shape[0])
    return elm_hidden(Q, model.input_weights, model.biases, model.activation) @ model.beta


def elm_predict(model, Q):
    return argmax_labels(elm_scores(model, Q), model.classes)
