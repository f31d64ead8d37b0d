"""Linear learners with internally cross-validated regularization.

Ridge regression is solved in closed form with an unpenalized intercept.
Logistic regression is multinomial, fitted by full-batch gradient descent
whose step is halved whenever a step would increase the loss, so the loss
sequence never goes up.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp, softmax

from .errors import ConfigError, DataError

__all__ = [
    "RidgeModel",
    "LogisticModel",
    "cv_folds",
    "r2_score",
    "ridge_solve",
    "ridge_fit",
    "ridge_predict",
    "logistic_loss_grad",
    "logistic_fit",
    "logistic_predict_proba",
    "logistic_predict",
]

DEFAULT_LAMBDA_GRID = (0.1, 1.0, 10.0)
DEFAULT_REG_GRID = (0.001, 0.01, 0.1)


def cv_folds(n: int, folds: int, seed: int) -> list:
    """Validation index sets of a seeded ``folds``-way partition of ``range(n)``."""
    if not 2 <= folds <= n:
        raise DataError(f"cannot make {folds} folds from {n} samples")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(part) for part in np.array_split(perm, folds)]


def r2_score(y_true, y_pred) -> float:
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    ss_res = float(np.sum((y_true - y_pred) ** 2))
    ss_tot = float(np.sum((y_true - y_true.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def _check_xy(X, y):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise DataError(f"degenerate feature matrix of shape {X.shape}")
    if len(y) != X.shape[0]:
        raise DataError(f"{len(y)} targets for {X.shape[0]} rows")
    return X


# --------------------------------------------------------------------------
# ridge

@dataclass(frozen=True)
class RidgeModel:
    weights: np.ndarray
    intercept: float
    chosen_lambda: float
    lambda_grid: tuple
    cv_folds: int
    cv_scores: tuple = ()

    def predict(self, X) -> np.ndarray:
        return ridge_predict(self, X)

    def to_dict(self) -> dict:
        return {"kind": "ridge", "weights": self.weights.tolist(),
                "intercept": self.intercept, "chosen_lambda": self.chosen_lambda,
                "lambda_grid": list(self.lambda_grid), "cv_folds": self.cv_folds,
                "cv_scores": list(self.cv_scores)}

    @classmethod
    def from_dict(cls, d: dict) -> "RidgeModel":
        return cls(np.asarray(d["weights"], dtype=np.float64), float(d["intercept"]),
                   float(d["chosen_lambda"]), tuple(d["lambda_grid"]), int(d["cv_folds"]),
                   tuple(d["cv_scores"]))


def ridge_solve(X, y, lam: float):
    """Closed-form ridge on centered data; returns ``(weights, intercept)``.

    The dual form is used when there are more columns than rows.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    x_mean = X.mean(axis=0)
    y_mean = y.mean()
    Xc = X - x_mean
    yc = y - y_mean
    n, p = Xc.shape
    if p <= n:
        gram = Xc.T @ Xc
        gram[np.diag_indices_from(gram)] += lam
        w = np.linalg.solve(gram, Xc.T @ yc)
    else:
        gram = Xc @ Xc.T
        gram[np.diag_indices_from(gram)] += lam
        w = Xc.T @ np.linalg.solve(gram, yc)
    return w, float(y_mean - x_mean @ w)


def ridge_fit(X, y, lambda_grid=DEFAULT_LAMBDA_GRID, folds: int = 3, seed: int = 0) -> RidgeModel:
    """Ridge with the penalty picked by k-fold validation R^2.

    Ties between penalties go to the larger one.
    """
    X = _check_xy(X, y)
    y = np.asarray(y, dtype=np.float64)
    grid = tuple(float(g) for g in lambda_grid)
    if not grid or min(grid) <= 0:
        raise ConfigError("lambda grid must hold positive values")
    splits = cv_folds(X.shape[0], folds, seed)
    scores = []
    for lam in grid:
        fold_scores = []
        for val in splits:
            train = np.setdiff1d(np.arange(X.shape[0]), val, assume_unique=True)
            w, b = ridge_solve(X[train], y[train], lam)
            fold_scores.append(r2_score(y[val], X[val] @ w + b))
        scores.append(float(np.mean(fold_scores)))
    best = max(range(len(grid)), key=lambda i: (scores[i], grid[i]))
    w, b = ridge_solve(X, y, grid[best])
    return RidgeModel(w, b, grid[best], grid, folds, tuple(scores))


def ridge_predict(model: RidgeModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.weights.shape[0]:
        raise DataError(f"expected {model.weights.shape[0]} columns, got shape {X.shape}")
    return X @ model.weights + model.intercept


# --------------------------------------------------------------------------
# logistic

@dataclass(frozen=True)
class LogisticModel:
    classes: tuple
    weights: np.ndarray
    intercepts: np.ndarray
    reg: float
    reg_grid: tuple
    class_weighting: str
    cv_scores: tuple = ()
    loss_history: tuple = field(default=(), repr=False)

    def predict_proba(self, X) -> np.ndarray:
        return logistic_predict_proba(self, X)

    def predict(self, X) -> np.ndarray:
        return logistic_predict(self, X)

    def to_dict(self) -> dict:
        return {"kind": "logistic", "classes": list(self.classes),
                "weights": self.weights.tolist(), "intercepts": self.intercepts.tolist(),
                "reg": self.reg, "reg_grid": list(self.reg_grid),
                "class_weighting": self.class_weighting, "cv_scores": list(self.cv_scores)}

    @classmethod
    def from_dict(cls, d: dict) -> "LogisticModel":
        return cls(tuple(d["classes"]), np.asarray(d["weights"], dtype=np.float64),
                   np.asarray(d["intercepts"], dtype=np.float64), float(d["reg"]),
                   tuple(d["reg_grid"]), d["class_weighting"], tuple(d["cv_scores"]))


def logistic_loss_grad(W, b, X, Y, sample_weight, reg):
    """Weighted mean cross-entropy plus ``reg / 2 * ||W||^2``, and its gradient.

    ``Y`` is the one-hot label matrix. Returns ``(loss, grad_W, grad_b)``.
    """
    scores = X @ W + b
    log_norm = logsumexp(scores, axis=1, keepdims=True)
    log_p = scores - log_norm
    sw = sample_weight / sample_weight.sum()
    loss = -float(np.sum(sw[:, None] * Y * log_p)) + 0.5 * reg * float(np.sum(W * W))
    resid = (np.exp(log_p) - Y) * sw[:, None]
    return loss, X.T @ resid + reg * W, resid.sum(axis=0)


def _class_weights(y_idx, n_classes, class_weighting):
    if class_weighting == "none":
        return np.ones(y_idx.shape[0])
    if class_weighting != "inverse_frequency":
        raise ConfigError(f"unknown class weighting {class_weighting!r}")
    counts = np.bincount(y_idx, minlength=n_classes).astype(np.float64)
    present = np.count_nonzero(counts)
    return y_idx.shape[0] / (present * counts[y_idx])


def _gradient_descent(X, Y, sw, reg, max_iter, step, tol):
    p, k = X.shape[1], Y.shape[1]
    W = np.zeros((p, k))
    b = np.zeros(k)
    loss, gW, gb = logistic_loss_grad(W, b, X, Y, sw, reg)
    history = [loss]
    for _ in range(max_iter):
        while True:
            W_new = W - step * gW
            b_new = b - step * gb
            new_loss, new_gW, new_gb = logistic_loss_grad(W_new, b_new, X, Y, sw, reg)
            if new_loss <= loss or step < 1e-12:
                break
            step *= 0.5
        if new_loss > loss:
            break
        W, b, gW, gb = W_new, b_new, new_gW, new_gb
        delta = loss - new_loss
        loss = new_loss
        history.append(loss)
        if delta < tol:
            break
    return W, b, tuple(history)


def logistic_fit(X, y, reg_grid=DEFAULT_REG_GRID, folds: int = 3,
                 class_weighting: str = "none", seed: int = 0,
                 max_iter: int = 500, step: float = 0.1, tol: float = 1e-6) -> LogisticModel:
    """L2-regularized multinomial logistic regression.

    The penalty is chosen by ``folds``-way validation accuracy (ties go to the
    stronger penalty). ``class_weighting="inverse_frequency"`` weights each
    sample by ``n / (n_classes * n_class)``.
    """
    X = _check_xy(X, y)
    classes, y_idx = np.unique(np.asarray(y), return_inverse=True)
    y_idx = y_idx.reshape(-1)
    if len(classes) < 2:
        raise DataError("logistic regression needs at least 2 classes")
    grid = tuple(float(g) for g in reg_grid)
    if not grid or min(grid) < 0:
        raise ConfigError("regularization grid must hold non-negative values")
    k = len(classes)
    Y = np.eye(k)[y_idx]
    sw = _class_weights(y_idx, k, class_weighting)
    splits = cv_folds(X.shape[0], folds, seed)
    scores = []
    for reg in grid:
        accs = []
        for val in splits:
            train = np.setdiff1d(np.arange(X.shape[0]), val, assume_unique=True)
            sw_train = _class_weights(y_idx[train], k, class_weighting)
            W, b, _ = _gradient_descent(X[train], Y[train], sw_train, reg, max_iter, step, tol)
            pred = np.argmax(X[val] @ W + b, axis=1)
            accs.append(float(np.mean(pred == y_idx[val])))
        scores.append(float(np.mean(accs)))
    best = max(range(len(grid)), key=lambda i: (scores[i], grid[i]))
    W, b, history = _gradient_descent(X, Y, sw, grid[best], max_iter, step, tol)
    return LogisticModel(tuple(classes.tolist()), W, b, grid[best], grid,
                         class_weighting, tuple(scores), history)


def logistic_predict_proba(model: LogisticModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.weights.shape[0]:
        raise DataError(f"expected {model.weights.shape[0]} columns, got shape {X.shape}")
    return softmax(X @ model.weights + model.intercepts, axis=1)


def logistic_predict(model: LogisticModel, X) -> np.ndarray:
    proba = logistic_predict_proba(model, X)
    return np.asarray(model.classes, dtype=object)[np.argmax(proba, axis=1)]
