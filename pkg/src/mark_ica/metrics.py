"""Classification metrics and the Amari permutation distance.

The classification scores follow the support-weighted averaging convention:
per-class precision/recall/F1 are averaged with weights proportional to each
class's true support, and a class never predicted gets precision 0 rather
than a division error.  Weighted recall therefore always equals accuracy.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClassificationScores:
    accuracy: float
    precision_weighted: float
    recall_weighted: float
    f1_weighted: float
    support: dict


def _check_pair(y_true, y_pred):
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.ndim != 1 or y_pred.ndim != 1:
        raise ValueError("labels must be 1-D")
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} vs {len(y_pred)}")
    if len(y_true) == 0:
        raise ValueError("empty label vectors")
    return y_true, y_pred


def accuracy(y_true, y_pred):
    """Fraction of exact matches."""
    y_true, y_pred = _check_pair(y_true, y_pred)
    return float(np.mean(y_true == y_pred))


def weighted_prf(y_true, y_pred):
    """Support-weighted precision, recall and F1.

    Per class ``c``: precision = TP / predicted-c (0 when nothing was
    predicted as ``c``), recall = TP / true-c, F1 = 2PR/(P+R) (0 when
    P + R = 0).  Averages weight each class by its share of ``y_true``.
    """
    y_true, y_pred = _check_pair(y_true, y_pred)
    classes = np.unique(y_true)
    n = len(y_true)
    precision = recall = f1 = 0.0
    for c in classes:
        true_c = y_true == c
        pred_c = y_pred == c
        tp = float(np.sum(true_c & pred_c))
        p = tp / pred_c.sum() if pred_c.any() else 0.0
        r = tp / true_c.sum()
        f = 2.0 * p * r / (p + r) if p + r > 0 else 0.0
        weight = true_c.sum() / n
        precision += weight * p
        recall += weight * r
        f1 += weight * f
    return precision, recall, f1


def score_classification(y_true, y_pred):
    """Bundle accuracy and the weighted scores with per-class supports."""
    y_true, y_pred = _check_pair(y_true, y_pred)
    p, r, f = weighted_prf(y_true, y_pred)
    classes, counts = np.unique(y_true, return_counts=True)
    return ClassificationScores(
        accuracy=accuracy(y_true, y_pred),
        precision_weighted=p,
        recall_weighted=r,
        f1_weighted=f,
        support={c.item(): int(k) for c, k in zip(classes, counts)},
    )


def amari_index(P):
    """Normalized distance of a square matrix from a scaled permutation.

    Zero exactly when ``P`` is a permutation matrix with arbitrary nonzero
    scales; 1 at the fully mixed worst case (e.g. a constant matrix).
    Invariant under row/column permutation and nonzero row/column scaling.

    Raises
    ------
    ValueError
        For non-square input, size < 2, or an all-zero row/column.
    """
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError(f"expected a square matrix, got {P.shape}")
    n = P.shape[0]
    if n < 2:
        raise ValueError("amari_index needs at least a 2x2 matrix")
    A = np.abs(P)
    row_max = A.max(axis=1)
    col_max = A.max(axis=0)
    if np.any(row_max == 0) or np.any(col_max == 0):
        raise ValueError("matrix has an all-zero row or column")
    rows = (A.sum(axis=1) / row_max - 1.0).sum()
    cols = (A.sum(axis=0) / col_max - 1.0).sum()
    return float((rows + cols) / (2.0 * n * (n - 1.0)))
