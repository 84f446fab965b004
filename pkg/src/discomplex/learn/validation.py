"""Stratified k-fold cross-validation of random forests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import TooFewInstances
from .forest import ForestParams, train_forest


@dataclass(frozen=True)
class CVResult:
    fold_accuracies: tuple[float, ...]
    feature_subset: tuple[int, ...]

    @property
    def mean(self) -> float:
        return math.fsum(self.fold_accuracies) / len(self.fold_accuracies)


def stratified_folds(y, k: int, seed: int) -> list[np.ndarray]:
    """Split indices into k folds preserving class proportions.

    Each class is shuffled, the classes are concatenated and positions are
    dealt round-robin, so per-class fold counts differ by at most one.
    """
    y = np.asarray(y)
    if len(y) < k:
        raise TooFewInstances(f"{len(y)} instances cannot fill {k} folds")
    rng = np.random.default_rng(seed)
    order = np.concatenate([rng.permutation(np.flatnonzero(y == c)) for c in np.unique(y)])
    return [np.sort(order[i::k]) for i in range(k)]


def cross_validate(ds_or_X, params: ForestParams = ForestParams(), k: int = 10,
                   features: Sequence[int] | None = None, y=None) -> CVResult:
    """Mean held-out accuracy over stratified folds.

    ``features=[]`` evaluates the majority-class baseline.
    """
    if y is None:
        X, y = ds_or_X.X, ds_or_X.y
    else:
        X = np.asarray(ds_or_X, dtype=np.float64)
        y = np.asarray(y)
    if k < 2:
        raise ValueError("k must be >= 2")
    folds = stratified_folds(y, k, params.seed)
    features = tuple(range(X.shape[1])) if features is None else tuple(features)
    accs = []
    for test in folds:
        train = np.ones(len(y), dtype=bool)
        train[test] = False
        forest = train_forest(X[train], params, y=y[train], features=features)
        pred = forest.predict(X[test])
        accs.append(float(np.mean(pred == y[test])))
    return CVResult(tuple(accs), features)
