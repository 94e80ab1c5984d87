"""Baseline multi-layer perceptron used to score feature extraction quality.

Softmax output under cross-entropy loss, trained with minibatch gradient
descent using adaptive moment estimates (decay 0.9/0.999, epsilon 1e-8).
Four hidden activations are supported: ``m_arcsinh``, ``identity``, ``tanh``
and ``relu``.  Binary problems still use a 2-way softmax so every dataset
takes the same code path.

The early-stopping holdout is always the trailing ``validation_fraction``
of the rows (no shuffling of the holdout boundary), and minibatch order is
drawn from the seeded PRNG, so a seed fully determines the run.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .contrast import m_arcsinh_derivative, m_arcsinh_value

ACTIVATIONS = ("m_arcsinh", "identity", "tanh", "relu")

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


class TrainingError(ValueError):
    """Raised when a fit cannot proceed (degenerate labels, diverging loss)."""


def act_forward(kind, x):
    """Activation value; ``kind`` is one of ``ACTIVATIONS``."""
    if kind == "m_arcsinh":
        return m_arcsinh_value(x)
    if kind == "identity":
        return np.asarray(x, dtype=np.float64) if np.ndim(x) else float(x)
    if kind == "tanh":
        return np.tanh(x)
    if kind == "relu":
        return np.maximum(x, 0.0)
    raise ValueError(f"unknown activation {kind!r}; expected one of {ACTIVATIONS}")


def act_derivative(kind, x):
    """Activation derivative; relu uses the subgradient 0 at exactly 0."""
    if kind == "m_arcsinh":
        return m_arcsinh_derivative(x)
    if kind == "identity":
        return np.ones_like(np.asarray(x, dtype=np.float64)) if np.ndim(x) else 1.0
    if kind == "tanh":
        t = np.tanh(x)
        return 1.0 - t * t
    if kind == "relu":
        out = np.where(np.asarray(x, dtype=np.float64) > 0.0, 1.0, 0.0)
        return out if np.ndim(x) else float(out)
    raise ValueError(f"unknown activation {kind!r}; expected one of {ACTIVATIONS}")


@dataclass(frozen=True)
class MLPConfig:
    hidden_sizes: tuple = (100,)
    activation: str = "relu"
    seed: int = 1
    max_iter: int = 250          # epochs over the training set
    learning_rate: float = 1e-3
    batch_size: int | None = None  # None -> min(200, n_samples)
    early_stopping: bool = True
    validation_fraction: float = 0.1
    patience: int = 10
    tol: float = 1e-4

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}; expected one of {ACTIVATIONS}")
        if any(int(h) < 1 for h in self.hidden_sizes) or not self.hidden_sizes:
            raise ValueError("hidden_sizes must be a non-empty tuple of positive counts")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ValueError("validation_fraction must be in (0, 1)")
        if self.max_iter < 1 or self.patience < 1:
            raise ValueError("max_iter and patience must be >= 1")


@dataclass
class MLPModel:
    weights: list            # per layer, (fan_in, fan_out)
    biases: list             # per layer, (fan_out,)
    activation: str
    classes: np.ndarray      # original labels, sorted ascending
    loss_curve: list
    validation_scores: list | None   # per-epoch holdout accuracy, None without early stopping
    n_epochs: int
    fit_seconds: float       # wall-clock fit time, monotonic

    @property
    def n_classes(self):
        return len(self.classes)


def _init_params(layer_units, rng):
    # Glorot-style uniform init, same recipe for weights and biases
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_units[:-1], layer_units[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))
    return weights, biases


def _forward(X, weights, biases, activation):
    """Return the list of layer activations, softmax probabilities last."""
    acts = [X]
    a = X
    last = len(weights) - 1
    for i, (W, b) in enumerate(zip(weights, biases)):
        z = a @ W + b
        a = _softmax(z) if i == last else act_forward(activation, z)
        acts.append(a)
    return acts


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _cross_entropy(proba, onehot):
    p = np.clip(proba, 1e-12, None)
    return float(-(onehot * np.log(p)).sum() / len(proba))


def _backprop(X, onehot, weights, biases, activation):
    """Loss and gradients for one batch.

    Uses the softmax/cross-entropy shortcut ``delta = proba - onehot``;
    hidden deltas need the activation derivative at the pre-activation, which
    is recomputed from the cached post-activation input.
    """
    m = len(X)
    acts = [X]
    zs = []
    a = X
    last = len(weights) - 1
    for i, (W, b) in enumerate(zip(weights, biases)):
        z = a @ W + b
        zs.append(z)
        a = _softmax(z) if i == last else act_forward(activation, z)
        acts.append(a)
    loss = _cross_entropy(acts[-1], onehot)

    grads_w = [None] * len(weights)
    grads_b = [None] * len(weights)
    delta = (acts[-1] - onehot) / m
    for i in range(last, -1, -1):
        grads_w[i] = acts[i].T @ delta
        grads_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ weights[i].T) * act_derivative(activation, zs[i - 1])
    return loss, grads_w, grads_b


def fit(X, y, config):
    """Train the perceptron; deterministic for a fixed config.

    With early stopping on, the LAST ``validation_fraction`` of the rows is
    held out (no shuffling, so the boundary is reproducible) and training
    stops once the validation accuracy has not improved by more than ``tol``
    for ``patience`` consecutive epochs; the best-scoring parameters are
    restored.  With early stopping off, exactly ``max_iter`` epochs run.

    Raises
    ------
    TrainingError
        For single-class targets or a non-finite loss.
    """
    started = time.perf_counter()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be 2-D with one label per row")
    classes = np.unique(y)
    if len(classes) < 2:
        raise TrainingError("training labels contain a single class")
    class_index = {c: i for i, c in enumerate(classes)}
    y_idx = np.array([class_index[v] for v in y])

    if config.early_stopping:
        n_val = max(1, int(config.validation_fraction * len(X)))
        if n_val >= len(X):
            raise TrainingError("validation holdout would consume every row")
        X_train, y_train = X[:-n_val], y_idx[:-n_val]
        X_val, y_val = X[-n_val:], y_idx[-n_val:]
    else:
        X_train, y_train = X, y_idx
        X_val = y_val = None

    n = len(X_train)
    onehot = np.zeros((n, len(classes)))
    onehot[np.arange(n), y_train] = 1.0

    layer_units = [X.shape[1]] + [int(h) for h in config.hidden_sizes] + [len(classes)]
    rng = np.random.default_rng(config.seed)
    weights, biases = _init_params(layer_units, rng)

    moments = [
        [np.zeros_like(p) for p in weights + biases],
        [np.zeros_like(p) for p in weights + biases],
    ]
    batch = min(200, n) if config.batch_size is None else min(int(config.batch_size), n)
    step = 0
    loss_curve = []
    validation_scores = [] if config.early_stopping else None
    best_score = -np.inf
    best_params = None
    no_improve = 0
    n_epochs = 0

    for epoch in range(config.max_iter):
        epoch_loss = 0.0
        order = rng.permutation(n)
        for start in range(0, n, batch):
            idx = order[start:min(start + batch, n)]
            loss, grads_w, grads_b = _backprop(
                X_train[idx], onehot[idx], weights, biases, config.activation
            )
            epoch_loss += loss * len(idx)
            step += 1
            params = weights + biases
            grads = grads_w + grads_b
            lr = config.learning_rate * np.sqrt(1.0 - ADAM_BETA2**step) / (1.0 - ADAM_BETA1**step)
            for p, g, m1, m2 in zip(params, grads, moments[0], moments[1]):
                m1 *= ADAM_BETA1
                m1 += (1.0 - ADAM_BETA1) * g
                m2 *= ADAM_BETA2
                m2 += (1.0 - ADAM_BETA2) * g * g
                p -= lr * m1 / (np.sqrt(m2) + ADAM_EPS)
        n_epochs = epoch + 1
        epoch_loss /= n
        if not np.isfinite(epoch_loss):
            raise TrainingError(f"loss diverged at epoch {n_epochs}")
        loss_curve.append(epoch_loss)

        if config.early_stopping:
            proba = _forward(X_val, weights, biases, config.activation)[-1]
            score = float(np.mean(proba.argmax(axis=1) == y_val))
            validation_scores.append(score)
            no_improve = no_improve + 1 if score < best_score + config.tol else 0
            if score > best_score:
                best_score = score
                best_params = ([w.copy() for w in weights], [b.copy() for b in biases])
            if no_improve > config.patience:
                break

    if config.early_stopping and best_params is not None:
        weights, biases = best_params
    if not all(np.all(np.isfinite(p)) for p in weights + biases):
        raise TrainingError("fit produced non-finite parameters")

    return MLPModel(
        weights=weights,
        biases=biases,
        activation=config.activation,
        classes=classes,
        loss_curve=loss_curve,
        validation_scores=validation_scores,
        n_epochs=n_epochs,
        fit_seconds=time.perf_counter() - started,
    )


def predict_proba(model, X):
    """Softmax class probabilities; rows sum to 1."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.weights[0].shape[0]:
        raise ValueError(
            f"X must be 2-D with {model.weights[0].shape[0]} columns, got {X.shape}"
        )
    return _forward(X, model.weights, model.biases, model.activation)[-1]


def predict(model, X):
    """Predicted labels; ties resolve to the lowest class index."""
    proba = predict_proba(model, X)
    return model.classes[proba.argmax(axis=1)]
