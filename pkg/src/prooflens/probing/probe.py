"""Linear probes: standardized L2 logistic regression with group-aware CV."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

C_GRID = (0.01, 0.1, 1.0, 10.0, 100.0)
GRADIENT_TOL = 1e-8


class SingleClassTrainingSet(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class MissingClass(ValueError):
    pass


class ConvergenceFailure(RuntimeError):
    """The optimizer did not reach the gradient tolerance."""


def _fold_of(problem_id: str, seed: int, folds: int) -> int:
    # pure function of (problem-id hash, seed): same problem never straddles folds
    digest = hashlib.sha256(f"{seed}:{problem_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big") % folds


def fit_logistic(X: np.ndarray, y: np.ndarray, C: float) -> tuple[np.ndarray, float]:
    """Minimize mean log(1+exp(-z (Xw+b))) + ||w||^2 / (2Cn); z in {-1,+1}.

    Same minimizer as the sum-scaled objective with penalty 1/(2C), but kept
    at unit scale so the gradient tolerance is meaningful in double
    precision.  Full-batch quasi-newton; the intercept is unpenalized.
    """
    n, d = X.shape
    z = y.astype(np.float64) * 2.0 - 1.0

    def loss_grad(theta):
        w, b = theta[:d], theta[d]
        margins = z * (X @ w + b)
        # log(1+exp(-m)) via logaddexp for overflow safety
        loss = np.logaddexp(0.0, -margins).mean() + (w @ w) / (2.0 * C * n)
        s = -z / (1.0 + np.exp(margins))
        grad_w = X.T @ s / n + w / (C * n)
        grad_b = s.mean()
        return loss, np.concatenate([grad_w, [grad_b]])

    # ftol=0 so the only stopping rules are the gradient test and maxiter;
    # the default function-decrease rule quits while the gradient is ~1e-6
    result = minimize(loss_grad, np.zeros(d + 1), jac=True, method="L-BFGS-B",
                      options={"gtol": GRADIENT_TOL, "ftol": 0.0, "maxiter": 5000})
    grad_norm = float(np.max(np.abs(result.jac)))
    if grad_norm > GRADIENT_TOL * 10:
        raise ConvergenceFailure(
            f"gradient norm {grad_norm:.3e} above tolerance after {result.nit} iters")
    return result.x[:d], float(result.x[d])


@dataclass
class Probe:
    mean: np.ndarray
    scale: np.ndarray
    weights: np.ndarray
    bias: float
    C: float
    classes: tuple[str, str]  # (negative, positive)
    seed: int
    folds: int = 5
    cv_scores: dict = field(default_factory=dict, repr=False)

    def _standardize(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.scale

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        scores = self._standardize(X) @ self.weights + self.bias
        return 1.0 / (1.0 + np.exp(-scores))

    def predict(self, X: np.ndarray) -> list[str]:
        # ties at exactly 0.5 go to the negative class
        proba = self.predict_proba(X)
        return [self.classes[1] if p > 0.5 else self.classes[0] for p in proba]


def _design(records) -> tuple[np.ndarray, np.ndarray, list[str], tuple[str, str]]:
    vectors = [np.asarray(r.vector, dtype=np.float64) for r in records]
    dims = {v.shape for v in vectors}
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed vector shapes: {sorted(dims)}")
    classes = tuple(sorted({r.label for r in records}))
    if len(classes) < 2:
        raise SingleClassTrainingSet(f"only class {classes} present")
    if len(classes) > 2:
        raise ValueError(f"probe is binary, got classes {classes}")
    X = np.stack(vectors)
    y = np.array([classes.index(r.label) for r in records], dtype=np.int64)
    groups = [r.problem_id for r in records]
    return X, y, groups, classes


def train_probe(records, seed: int = 0, grid=C_GRID, folds: int = 5) -> Probe:
    """Standardize on the training split, pick C by group-aware CV mean
    accuracy (ties toward the smallest C), then refit on everything."""
    X, y, groups, classes = _design(records)
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0.0] = 1.0  # constant features carry no signal
    Xs = (X - mean) / scale

    fold_ids = np.array([_fold_of(g, seed, folds) for g in groups])
    cv_scores = {}
    for C in grid:
        accs = []
        for f in range(folds):
            val = fold_ids == f
            if not val.any() or val.all():
                continue
            if len(np.unique(y[~val])) < 2:
                continue
            w, b = fit_logistic(Xs[~val], y[~val], C)
            pred = (Xs[val] @ w + b > 0.0).astype(np.int64)
            accs.append(float((pred == y[val]).mean()))
        cv_scores[C] = float(np.mean(accs)) if accs else 0.0
    best_C = max(grid, key=lambda C: (cv_scores[C], -C))
    weights, bias = fit_logistic(Xs, y, best_C)
    return Probe(mean=mean, scale=scale, weights=weights, bias=bias, C=best_C,
                 classes=classes, seed=seed, folds=folds, cv_scores=cv_scores)


def balanced_accuracy(predictions, labels) -> float:
    """Mean of the true-positive and true-negative rates."""
    labels = list(labels)
    predictions = list(predictions)
    classes = sorted(set(labels))
    if len(classes) != 2:
        raise MissingClass(f"need both classes in labels, got {classes}")
    neg, pos = classes
    tpr = sum(p == pos for p, t in zip(predictions, labels) if t == pos) / labels.count(pos)
    tnr = sum(p == neg for p, t in zip(predictions, labels) if t == neg) / labels.count(neg)
    return 0.5 * (tpr + tnr)
