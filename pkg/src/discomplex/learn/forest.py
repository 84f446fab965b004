"""Entropy-split decision trees and random forests."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..errors import DataError, EmptyDataset, FileMissing
from ..features import N_FEATURES
from . import _backend

__all__ = ["ForestParams", "DecisionTree", "RandomForest", "train_tree",
           "train_forest", "predict", "save_forest", "load_forest"]

SAME, DIFFERENT = 0, 1


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    max_depth: Optional[int] = None
    min_leaf: int = 1
    features_per_split: int = math.ceil(math.sqrt(N_FEATURES))
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if not 1 <= self.features_per_split <= N_FEATURES:
            raise ValueError(f"features_per_split must be in [1, {N_FEATURES}]")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")


@lru_cache(maxsize=8)
def _xlogx(n: int) -> np.ndarray:
    # shared by both kernels so split scores agree exactly
    table = np.zeros(n + 1)
    for c in range(2, n + 1):
        table[c] = c * math.log2(c)
    table.flags.writeable = False
    return table


@dataclass
class DecisionTree:
    """Array-encoded binary tree; node 0 is the root, leaves have feature -1.

    ``counts[i]`` holds the (same, different) training counts reaching node i.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row of X (value <= threshold goes left)."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        node = np.zeros(len(X), dtype=np.int64)
        active = self.feature[node] >= 0
        while active.any():
            rows = np.flatnonzero(active)
            cur = node[rows]
            go_left = X[rows, self.feature[cur]] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])
            active[rows] = self.feature[node[rows]] >= 0
        return node

    def predict_proba(self, X) -> np.ndarray:
        c = self.counts[self.apply(X)].astype(np.float64)
        return c / c.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        p = self.predict_proba(X)
        return np.where(p[:, DIFFERENT] > p[:, SAME], DIFFERENT, SAME)

    def to_nested(self, i: int = 0):
        """``[feature, threshold, left, right]`` for splits, ``[same, diff]`` for leaves."""
        if self.feature[i] < 0:
            return [int(self.counts[i, 0]), int(self.counts[i, 1])]
        return [int(self.feature[i]), float(self.threshold[i]),
                self.to_nested(int(self.left[i])), self.to_nested(int(self.right[i]))]

    @classmethod
    def from_nested(cls, doc) -> "DecisionTree":
        feat, thr, left, right, counts = [], [], [], [], []

        def add(sub) -> int:
            i = len(feat)
            feat.append(-1)
            thr.append(0.0)
            left.append(-1)
            right.append(-1)
            counts.append([0, 0])
            if len(sub) == 2:
                counts[i] = [int(sub[0]), int(sub[1])]
            elif len(sub) == 4:
                feat[i], thr[i] = int(sub[0]), float(sub[1])
                left[i] = add(sub[2])
                right[i] = add(sub[3])
                counts[i] = [counts[left[i]][0] + counts[right[i]][0],
                             counts[left[i]][1] + counts[right[i]][1]]
            else:
                raise DataError("bad tree node encoding")
            return i

        add(doc)
        return cls(np.array(feat, dtype=np.int64), np.array(thr, dtype=np.float64),
                   np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
                   np.array(counts, dtype=np.int64).reshape(-1, 2))


def train_tree(X, y, *, features: Sequence[int] | None = None, n_try: int | None = None,
               max_depth: int | None = None, min_leaf: int = 1, seed: int = 0,
               sample: Sequence[int] | None = None) -> DecisionTree:
    """Grow a single tree. ``features`` restricts the usable columns;
    ``n_try`` non-constant candidates are scored at each node (all by default)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    if len(X) == 0:
        raise EmptyDataset("cannot grow a tree on zero instances")
    features = list(range(X.shape[1])) if features is None else [int(f) for f in features]
    sample = np.arange(len(X)) if sample is None else np.asarray(sample, dtype=np.int64)
    n_try = len(features) if n_try is None else n_try
    arrays = _backend.build_tree(
        X, y, sample, np.array(features, dtype=np.int64), n_try,
        -1 if max_depth is None else max_depth, min_leaf, seed, _xlogx(len(sample)))
    return DecisionTree(*arrays)


@dataclass
class RandomForest:
    trees: list[DecisionTree]
    params: ForestParams
    features: tuple[int, ...]

    def predict_proba(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros((len(X), 2))
        for tree in self.trees:
            total += tree.predict_proba(X)
        return total / len(self.trees)

    def predict(self, X) -> np.ndarray:
        p = self.predict_proba(X)
        # exact ties go to SAME
        return np.where(p[:, DIFFERENT] > p[:, SAME], DIFFERENT, SAME)


def _tree_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, index])


def train_forest(ds_or_X, params: ForestParams = ForestParams(), y=None,
                 features: Sequence[int] | None = None) -> RandomForest:
    """Bagged ensemble of entropy trees.

    Accepts a :class:`PairDataset` or an ``(X, y)`` pair. With an empty
    ``features`` list every tree is a single leaf over the full training
    set, i.e. a majority-class predictor.
    """
    if y is None:
        X, y = ds_or_X.X, ds_or_X.y
    else:
        X = ds_or_X
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    if len(X) == 0:
        raise EmptyDataset("cannot train on an empty dataset")
    features = tuple(range(X.shape[1])) if features is None else tuple(int(f) for f in features)
    n = len(X)
    trees = []
    for t in range(params.n_trees):
        rng = _tree_rng(params.seed, t)
        if features:
            sample = rng.integers(0, n, size=n)
        else:
            sample = np.arange(n)
        node_seed = int(rng.integers(0, 2**63))
        trees.append(train_tree(
            X, y, features=features, n_try=min(params.features_per_split, len(features)),
            max_depth=params.max_depth, min_leaf=params.min_leaf, seed=node_seed,
            sample=sample))
    return RandomForest(trees, params, features)


def predict(forest: RandomForest, vector) -> int:
    """Label (0 = same, 1 = different) for a single 16-component vector."""
    v = np.asarray(vector, dtype=np.float64)
    if v.shape != (N_FEATURES,):
        raise ValueError(f"expected a vector of length {N_FEATURES}")
    return int(forest.predict(v[None, :])[0])


def forest_to_dict(forest: RandomForest) -> dict:
    return {
        "params": asdict(forest.params),
        "seed": forest.params.seed,
        "features": list(forest.features),
        "trees": [t.to_nested() for t in forest.trees],
    }


def forest_from_dict(doc: dict) -> RandomForest:
    try:
        params = ForestParams(**doc["params"])
        trees = [DecisionTree.from_nested(t) for t in doc["trees"]]
        features = tuple(int(f) for f in doc["features"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"bad forest document: {exc}") from None
    return RandomForest(trees, params, features)


def save_forest(forest: RandomForest, path) -> None:
    Path(path).write_text(json.dumps(forest_to_dict(forest)) + "\n", encoding="utf-8")


def load_forest(path) -> RandomForest:
    path = Path(path)
    if not path.is_file():
        raise FileMissing(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from None
    try:
        return forest_from_dict(doc)
    except DataError as exc:
        raise exc.located(path)
