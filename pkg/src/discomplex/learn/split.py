"""Entropy, single-feature threshold search and information-gain ranking."""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from ..errors import EmptyCounts, EmptyDataset


def entropy(class_counts: Sequence[int]) -> float:
    """Shannon entropy in bits of a class-count vector."""
    total = sum(class_counts)
    if any(c < 0 for c in class_counts):
        raise ValueError("negative class count")
    if total == 0:
        raise EmptyCounts("entropy of an empty node")
    h = 0.0
    for c in class_counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return max(h, 0.0)


def best_split(values, labels) -> tuple[Optional[float], float]:
    """Best ``value <= threshold`` cut of one feature for binary labels.

    Thresholds are midpoints between consecutive distinct values; the gain
    is parent entropy minus the size-weighted child entropies, in bits.
    A constant feature yields ``(None, 0.0)``. Ties go to the smaller
    threshold.
    """
    v = np.asarray(values, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    n = len(v)
    if n < 2:
        raise ValueError("best_split needs at least 2 instances")
    order = np.argsort(v, kind="stable")
    v, y = v[order], y[order]
    if v[0] == v[-1]:
        return None, 0.0
    c1 = int(y.sum())
    parent = entropy((n - c1, c1))
    l1 = np.cumsum(y)[:-1]
    nl = np.arange(1, n)
    nr = n - nl
    r1 = c1 - l1

    def h(ones, size):
        p = ones / size
        with np.errstate(divide="ignore", invalid="ignore"):
            t = -(np.where(p > 0, p * np.log2(p), 0.0)
                  + np.where(p < 1, (1 - p) * np.log2(1 - p), 0.0))
        return t

    gain = parent - (nl * h(l1, nl) + nr * h(r1, nr)) / n
    gain = np.where(v[:-1] < v[1:], gain, -np.inf)
    k = int(np.argmax(gain))
    threshold = (v[k] + v[k + 1]) * 0.5
    if threshold >= v[k + 1]:
        threshold = v[k]
    return float(threshold), max(float(gain[k]), 0.0)


def rank_information_gain(ds_or_X, y=None) -> list[tuple[int, float]]:
    """(feature index, gain) for every column, best first; ties by index."""
    if y is None:
        X, y = ds_or_X.X, ds_or_X.y
    else:
        X = np.asarray(ds_or_X, dtype=np.float64)
    if len(X) == 0:
        raise EmptyDataset("cannot rank features of an empty dataset")
    if len(X) == 1:
        gains = [(j, 0.0) for j in range(X.shape[1])]
    else:
        gains = [(j, best_split(X[:, j], y)[1]) for j in range(X.shape[1])]
    return sorted(gains, key=lambda t: (-t[1], t[0]))
