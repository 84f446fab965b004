"""From-scratch learners: entropy trees, random forests, cross-validation,
Welch's t-test and information-gain ranking."""

from ._backend import BACKEND
from .forest import (
    DecisionTree,
    ForestParams,
    RandomForest,
    load_forest,
    predict,
    save_forest,
    train_forest,
    train_tree,
)
from .split import best_split, entropy, rank_information_gain
from .stats import TTestResult, betainc, welch_t_test
from .validation import CVResult, cross_validate, stratified_folds

__all__ = [
    "BACKEND", "DecisionTree", "ForestParams", "RandomForest", "load_forest",
    "predict", "save_forest", "train_forest", "train_tree", "best_split",
    "entropy", "rank_information_gain", "TTestResult", "betainc",
    "welch_t_test", "CVResult", "cross_validate", "stratified_folds",
]
