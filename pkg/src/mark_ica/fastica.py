"""FastICA estimator: whitening, parallel fixed-point loop, fit/transform.

The parallel (symmetric) variant estimates all components at once.  The
whitened data ``Z`` satisfies ``Z.T @ Z / n = I``; the returned unmixing
matrix ``W`` has orthonormal rows, so recovered sources keep unit variance.

Randomness enters only through the initial unmixing guess, drawn from
``numpy.random.default_rng(seed)`` (PCG64) so the same seed reproduces the
same model on any platform.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .contrast import ContrastFunction


@dataclass(frozen=True)
class FastICAConfig:
    """Settings for one FastICA fit."""

    n_components: int
    fun: ContrastFunction = field(default_factory=lambda: ContrastFunction("logcosh"))
    tol: float = 1e-4
    max_iter: int = 200
    seed: int = 42
    whiten: bool = True

    def __post_init__(self):
        if self.n_components < 1:
            raise ValueError("n_components must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass
class FastICAModel:
    """Fitted extraction state.

    ``transform`` maps new rows through centering, whitening and unmixing:
    ``S = (X - mean) @ K.T @ W.T``.
    """

    mean: np.ndarray          # (n_features,)
    K: np.ndarray             # (n_components, n_features) whitening
    W: np.ndarray             # (n_components, n_components), orthonormal rows
    n_iter: int
    converged: bool
    config: FastICAConfig

    @property
    def n_components(self):
        return self.W.shape[0]

    @property
    def n_features(self):
        return self.K.shape[1]

    def transform(self, X):
        return transform(self, X)


def whiten(X, n_components):
    """Center and project ``X`` onto its top principal axes at unit variance.

    Returns
    -------
    Z : ndarray, shape (rows, n_components)
        Whitened data with ``Z.T @ Z / rows = I``.
    K : ndarray, shape (n_components, cols)
        Whitening matrix ``diag(1/sqrt(w)) @ V_top.T`` from the covariance
        eigendecomposition.
    mean : ndarray, shape (cols,)
        Column means removed before projection.

    Raises
    ------
    ValueError
        If fewer than 2 rows, ``n_components`` exceeds ``min(rows, cols)``,
        or the ``n_components``-th eigenvalue falls below the floor
        (rank-deficient input).
    """
    X = linalg.as_matrix(X, "X")
    n, p = X.shape
    if n < 2:
        raise ValueError("whitening requires at least 2 rows")
    if not 1 <= n_components <= min(n, p):
        raise ValueError(
            f"n_components must be in [1, {min(n, p)}] for data of shape {X.shape}, "
            f"got {n_components}"
        )
    Xc, mean = linalg.center_columns(X)
    C = linalg.covariance(Xc)
    w, V = linalg.sym_eig(C)
    if w[n_components - 1] < linalg.EIGENVALUE_FLOOR:
        raise ValueError(
            f"covariance is rank deficient: eigenvalue {n_components} is "
            f"{w[n_components - 1]:.3e} (< {linalg.EIGENVALUE_FLOOR:.0e})"
        )
    top = slice(0, n_components)
    K = (V[:, top] / np.sqrt(w[top])).T
    Z = Xc @ K.T
    return Z, K, mean


def sym_decorrelate(W):
    """Symmetric orthogonalization ``(W @ W.T)^(-1/2) @ W``.

    Orthonormalizes all rows simultaneously without privileging any of them.
    Rank-deficient input is rejected.
    """
    W = linalg.as_matrix(W, "W")
    if W.shape[0] != W.shape[1]:
        raise ValueError(f"expected a square matrix, got {W.shape}")
    M = W @ W.T
    w, V = linalg.sym_eig((M + M.T) / 2)
    if w[-1] <= linalg.EIGENVALUE_FLOOR * max(1.0, w[0]):
        raise ValueError("matrix is rank deficient, cannot decorrelate")
    R = (V / np.sqrt(w)) @ V.T
    return R @ W


def ica_parallel(Z, fun, tol=1e-4, max_iter=200, seed=42):
    """Parallel fixed-point iteration on whitened data.

    Starting from a seeded random-normal guess (symmetrically decorrelated),
    repeats

        W <- decorrelate( g(W Z.T) @ Z / rows  -  diag(mean g') @ W )

    until every row direction is stable: ``max_i |1 - |<w_i_new, w_i_old>||``
    below ``tol``.  Non-convergence is reported, not raised; the last
    (still orthonormal) ``W`` is returned with ``converged=False``.

    Returns
    -------
    (W, n_iter, converged)
    """
    Z = linalg.as_matrix(Z, "Z")
    n, k = Z.shape
    rng = np.random.default_rng(seed)
    W = sym_decorrelate(rng.standard_normal((k, k)))

    converged = False
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        G, gprime_mean = fun(W @ Z.T)
        W1 = sym_decorrelate(G @ Z / n - gprime_mean[:, None] * W)
        lim = np.max(np.abs(np.abs(np.einsum("ij,ij->i", W1, W)) - 1.0))
        W = W1
        if lim < tol:
            converged = True
            break
    return W, n_iter, converged


def fit(X, config):
    """Fit a FastICA model: whitening followed by the fixed-point loop.

    Deterministic: identical ``(X, config)`` produce an identical model on
    the same platform.  With ``whiten=False`` the data is assumed already
    centered and white, and ``n_components`` must equal the column count.
    """
    X = linalg.as_matrix(X, "X")
    if config.whiten:
        Z, K, mean = whiten(X, config.n_components)
    else:
        if config.n_components != X.shape[1]:
            raise ValueError("whiten=False requires n_components == number of columns")
        Z = X
        K = np.eye(X.shape[1])
        mean = np.zeros(X.shape[1])
    W, n_iter, converged = ica_parallel(
        Z, config.fun, tol=config.tol, max_iter=config.max_iter, seed=config.seed
    )
    return FastICAModel(mean=mean, K=K, W=W, n_iter=n_iter, converged=converged, config=config)


def transform(model, X):
    """Project rows of ``X`` into the recovered source space."""
    X = linalg.as_matrix(X, "X")
    if X.shape[1] != model.n_features:
        raise ValueError(
            f"X has {X.shape[1]} columns but the model was fit with {model.n_features}"
        )
    return (X - model.mean) @ model.K.T @ model.W.T


FORMAT_TAG = "mark-ica-model 1"


def _fmt_row(row):
    return " ".join(format(float(v), ".17g") for v in np.atleast_1d(row))


def dumps_model(model):
    """Serialize a model as flat text, round-tripping finite doubles exactly.

    Layout: a header of ``key value`` lines (n_components, n_features, fun,
    alpha, seed, n_iter, converged) followed by ``mean`` (one line), the rows
    of ``K`` and the rows of ``W``, all with 17 significant digits.
    """
    lines = [
        FORMAT_TAG,
        f"n_components {model.n_components}",
        f"n_features {model.n_features}",
        f"fun {model.config.fun.name}",
        f"alpha {format(model.config.fun.alpha, '.17g')}",
        f"seed {model.config.seed}",
        f"n_iter {model.n_iter}",
        f"converged {int(model.converged)}",
        "mean",
        _fmt_row(model.mean),
        "K",
    ]
    lines.extend(_fmt_row(r) for r in model.K)
    lines.append("W")
    lines.extend(_fmt_row(r) for r in model.W)
    return "\n".join(lines) + "\n"


def save_model(model, path):
    """Write :func:`dumps_model` output to ``path``."""
    with open(path, "w") as fh:
        fh.write(dumps_model(model))


def loads_model(text):
    """Parse a model from its flat-text serialization."""
    lines = text.splitlines()
    if not lines or lines[0] != FORMAT_TAG:
        raise ValueError("not a recognized model serialization")
    header = {}
    idx = 1
    while idx < len(lines) and lines[idx] != "mean":
        key, _, val = lines[idx].partition(" ")
        header[key] = val
        idx += 1
    try:
        k = int(header["n_components"])
        p = int(header["n_features"])
    except KeyError as exc:
        raise ValueError(f"model serialization is missing header line {exc}") from None
    if idx >= len(lines) or lines[idx] != "mean":
        raise ValueError("model serialization is missing the mean section")
    mean = np.array([float(v) for v in lines[idx + 1].split()])
    idx += 2
    if idx >= len(lines) or lines[idx] != "K" or len(lines) < idx + 2 + 2 * k:
        raise ValueError("model serialization is missing the K section")
    K = np.array([[float(v) for v in lines[idx + 1 + i].split()] for i in range(k)])
    idx += 1 + k
    if lines[idx] != "W":
        raise ValueError("model serialization is missing the W section")
    W = np.array([[float(v) for v in lines[idx + 1 + i].split()] for i in range(k)])
    if mean.shape != (p,) or K.shape != (k, p) or W.shape != (k, k):
        raise ValueError("model serialization sections have inconsistent shapes")
    config = FastICAConfig(
        n_components=k,
        fun=ContrastFunction(header["fun"], float(header["alpha"])),
        seed=int(header["seed"]),
    )
    return FastICAModel(
        mean=mean,
        K=K,
        W=W,
        n_iter=int(header["n_iter"]),
        converged=bool(int(header["converged"])),
        config=config,
    )


def load_model(path):
    """Read a model written by :func:`save_model`."""
    with open(path) as fh:
        return loads_model(fh.read())
