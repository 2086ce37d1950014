"""Linear models: multinomial softmax regression and a binary hinge-loss SGD.

Both expose their loss/gradient as module-level functions so the analytic
gradients can be checked against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..vectorize import LabeledDataset, SparseVector
from . import dense_matrix, dense_vector


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_loss_grad(
    W: np.ndarray, b: np.ndarray, X: np.ndarray, y: np.ndarray, ridge: float
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy + (ridge/2)*||W||^2; bias unregularized.

    Returns (loss, dW, db).
    """
    n = X.shape[0]
    P = softmax(X @ W + b)
    eps = 1e-300
    loss = -np.mean(np.log(P[np.arange(n), y] + eps)) + 0.5 * ridge * np.sum(W * W)
    P[np.arange(n), y] -= 1.0
    dW = X.T @ P / n + ridge * W
    db = P.sum(axis=0) / n
    return float(loss), dW, db


def hinge_loss_grad(
    w: np.ndarray, b: float, X: np.ndarray, y_pm: np.ndarray, ridge: float
) -> tuple[float, np.ndarray, float]:
    """Mean hinge loss + (ridge/2)*||w||^2 for labels in {-1, +1}.

    Subgradient at the hinge point uses the zero branch. Returns
    (loss, dw, db).
    """
    n = X.shape[0]
    margins = y_pm * (X @ w + b)
    active = margins < 1.0
    loss = float(np.mean(np.maximum(0.0, 1.0 - margins)) + 0.5 * ridge * np.dot(w, w))
    coef = np.where(active, -y_pm, 0.0)
    dw = X.T @ coef / n + ridge * w
    db = float(coef.sum() / n)
    return loss, dw, db


@dataclass(frozen=True)
class SoftmaxRegression:
    """L2-regularized multinomial logistic regression.

    Mini-batch gradient descent with per-epoch seeded shuffling; stops at
    max epochs or when the full-data gradient norm drops below tol.
    """

    columns: tuple[int, ...]
    W: np.ndarray
    b: np.ndarray

    @classmethod
    def fit(cls, data: LabeledDataset, hyper: dict, seed: int) -> "SoftmaxRegression":
        ridge = float(hyper.get("ridge", 1e-4))
        lr = float(hyper.get("learning_rate", 0.5))
        epochs = int(hyper.get("epochs", 200))
        batch = int(hyper.get("batch_size", 32))
        tol = float(hyper.get("tol", 1e-6))
        X, y, columns = dense_matrix(data)
        n, d = X.shape
        k = len(data.label_set)
        W = np.zeros((d, k))
        b = np.zeros(k)
        rng = np.random.default_rng(seed)
        for _ in range(epochs):
            order = rng.permutation(n)
            for start in range(0, n, batch):
                idx = order[start:start + batch]
                _, dW, db = softmax_loss_grad(W, b, X[idx], y[idx], ridge)
                W -= lr * dW
                b -= lr * db
            _, dW, db = softmax_loss_grad(W, b, X, y, ridge)
            gnorm = np.sqrt(np.sum(dW * dW) + np.sum(db * db))
            if gnorm < tol:
                break
        return cls(columns=columns, W=W, b=b)

    def scores(self, vector: SparseVector) -> np.ndarray:
        x = dense_vector(vector, self.columns)
        return softmax(x @ self.W + self.b)

    def to_params(self) -> dict:
        return {"columns": list(self.columns), "W": self.W.tolist(),
                "b": self.b.tolist()}

    @classmethod
    def from_params(cls, params: dict) -> "SoftmaxRegression":
        return cls(columns=tuple(params["columns"]),
                   W=np.array(params["W"]), b=np.array(params["b"]))


@dataclass(frozen=True)
class HingeSGD:
    """Binary linear classifier, hinge loss, trained by plain SGD.

    Labels map to -1 (first of label_set) and +1 (second). The reported
    distribution squashes the margin through a logistic so scores stay in
    [0, 1] and sum to one.
    """

    columns: tuple[int, ...]
    w: np.ndarray
    b: float

    @classmethod
    def fit(cls, data: LabeledDataset, hyper: dict, seed: int) -> "HingeSGD":
        ridge = float(hyper.get("ridge", 1e-4))
        lr = float(hyper.get("learning_rate", 0.05))
        epochs = int(hyper.get("epochs", 200))
        X, y, columns = dense_matrix(data)
        y_pm = np.where(y == 1, 1.0, -1.0)
        n, d = X.shape
        w = np.zeros(d)
        b = 0.0
        rng = np.random.default_rng(seed)
        for _ in range(epochs):
            for i in rng.permutation(n):
                margin = y_pm[i] * (X[i] @ w + b)
                if margin < 1.0:
                    w += lr * (y_pm[i] * X[i] - ridge * w)
                    b += lr * y_pm[i]
                else:
                    w -= lr * ridge * w
        return cls(columns=columns, w=w, b=float(b))

    def scores(self, vector: SparseVector) -> np.ndarray:
        x = dense_vector(vector, self.columns)
        margin = float(x @ self.w + self.b)
        p_second = 1.0 / (1.0 + np.exp(-margin))
        return np.array([1.0 - p_second, p_second])

    def to_params(self) -> dict:
        return {"columns": list(self.columns), "w": self.w.tolist(), "b": self.b}

    @classmethod
    def from_params(cls, params: dict) -> "HingeSGD":
        return cls(columns=tuple(params["columns"]),
                   w=np.array(params["w"]), b=float(params["b"]))
