"""Labelled pairwise datasets.

Two construction styles are supported:

* threshold pairing: every unordered pair of scored articles, labelled
  ``same`` when their scores differ by at most the threshold;
* aligned pairing: aligned (complex, simple) articles give ``different``
  pairs, randomly drawn same-level pairs give ``same`` pairs.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DataError,
    FileMissing,
    InsufficientArticles,
    SchemaMismatch,
    TooFewArticles,
)
from .features import N_FEATURES, FeatureVector, PairVector, pair_difference

__all__ = [
    "Label", "Provenance", "PairInstance", "PairDataset",
    "build_threshold_pairs", "balance_threshold", "build_aligned_pairs",
    "write_dataset", "read_dataset", "DATASET_HEADER",
]


class Label(enum.IntEnum):
    SAME = 0
    DIFFERENT = 1

    @property
    def text(self) -> str:
        return self.name.lower()


class Provenance(enum.Enum):
    THRESHOLD = "threshold"
    ALIGNED = "aligned"


@dataclass(frozen=True)
class PairInstance:
    vector: PairVector
    label: Label

    @property
    def id_a(self) -> str:
        return self.vector.id_a

    @property
    def id_b(self) -> str:
        return self.vector.id_b


@dataclass
class PairDataset:
    instances: list[PairInstance]
    provenance: Optional[Provenance] = None
    feature_names: tuple[str, ...] = tuple(f"f{i}" for i in range(1, N_FEATURES + 1))

    def __post_init__(self):
        seen = set()
        for inst in self.instances:
            if len(inst.vector.deltas) != N_FEATURES:
                raise ValueError("pair vectors must have 16 components")
            if inst.id_a == inst.id_b:
                raise ValueError(f"pair of article {inst.id_a!r} with itself")
            key = frozenset((inst.id_a, inst.id_b))
            if key in seen:
                raise ValueError(f"duplicate pair {inst.id_a!r}/{inst.id_b!r}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def X(self) -> np.ndarray:
        return np.array([i.vector.deltas for i in self.instances],
                        dtype=np.float64).reshape(-1, N_FEATURES)

    @property
    def y(self) -> np.ndarray:
        return np.array([int(i.label) for i in self.instances], dtype=np.int8)

    def label_counts(self) -> dict[Label, int]:
        counts = {Label.SAME: 0, Label.DIFFERENT: 0}
        for inst in self.instances:
            counts[inst.label] += 1
        return counts

    @classmethod
    def from_arrays(cls, X, y, ids=None, provenance=None) -> "PairDataset":
        X = np.asarray(X, dtype=float)
        if ids is None:
            ids = [(f"a{i}", f"b{i}") for i in range(len(X))]
        inst = [PairInstance(PairVector(a, b, tuple(map(float, row))), Label(int(lab)))
                for (a, b), row, lab in zip(ids, X, y)]
        return cls(inst, provenance)


# scores carry one decimal; a gap such as 2.7 - 2.0 must still count as 0.7
_GAP_TOL = 1e-9


def _is_same(gap, threshold):
    return gap <= threshold + _GAP_TOL


def _check_scored(scored):
    if len(scored) < 2:
        raise TooFewArticles(f"need at least 2 scored articles, got {len(scored)}")


def build_threshold_pairs(scored: Sequence[tuple[FeatureVector, float]],
                          threshold: float) -> PairDataset:
    """All C(k, 2) pairs in input order; |score gap| <= threshold means same."""
    _check_scored(scored)
    if not threshold > 0:
        raise ValueError("threshold must be > 0")
    instances = []
    for (va, sa), (vb, sb) in combinations(scored, 2):
        label = Label.SAME if _is_same(abs(sa - sb), threshold) else Label.DIFFERENT
        instances.append(PairInstance(pair_difference(va, vb), label))
    return PairDataset(instances, Provenance.THRESHOLD)


def _imbalance(gaps: np.ndarray, t: float) -> int:
    same = int(np.count_nonzero(_is_same(gaps, t)))
    return abs(2 * same - len(gaps))


def balance_threshold(scores: Sequence[float]) -> float:
    """Threshold that makes the same/different split as even as possible.

    Candidates are midpoints between consecutive values of
    ``{0} | distinct gaps | {max gap + 1}``, with gaps that differ only by
    rounding merged, so the all-different and
    all-same splits are reachable too. Ties go to the smaller threshold.
    """
    scores = [s[1] if isinstance(s, tuple) else s for s in scores]
    if len(scores) < 2:
        raise TooFewArticles(f"need at least 2 scores, got {len(scores)}")
    gaps = np.array([abs(a - b) for a, b in combinations(scores, 2)])
    points = []
    for g in sorted({0.0, *gaps.tolist(), float(gaps.max()) + 1.0}):
        # gaps equal up to rounding are one value
        if not points or g > points[-1] + _GAP_TOL:
            points.append(g)
    best_t, best_imb = None, math.inf
    for lo, hi in zip(points, points[1:]):
        t = (lo + hi) / 2
        imb = _imbalance(gaps, t)
        if imb < best_imb:
            best_t, best_imb = t, imb
    return best_t


def _pairs_before(i: int, m: int) -> int:
    return i * m - i * (i + 1) // 2


def _unrank_pair(k: int, m: int) -> tuple[int, int]:
    """k-th pair (i < j) of range(m) in lexicographic order."""
    i = max(0, m - 2 - (math.isqrt(4 * m * (m - 1) - 8 * k - 7) - 1) // 2)
    # the closed form can be off by one after integer rounding
    while i > 0 and _pairs_before(i, m) > k:
        i -= 1
    while _pairs_before(i + 1, m) <= k:
        i += 1
    return i, i + 1 + k - _pairs_before(i, m)


def _sample_pairs(rng: np.random.Generator, m: int, size: int) -> list[tuple[int, int]]:
    if size == 0:
        return []
    ks = rng.choice(m * (m - 1) // 2, size=size, replace=False)
    return [_unrank_pair(int(k), m) for k in ks]


def build_aligned_pairs(aligned: Sequence[tuple[FeatureVector, FeatureVector]],
                        pairs_per_class: int, seed: int) -> PairDataset:
    """Balanced dataset from aligned (complex, simple) article vectors.

    Different pairs are aligned pairs drawn without replacement. Same pairs
    are drawn without replacement among complex/complex pairs (ceil half)
    and simple/simple pairs (floor half).
    """
    if pairs_per_class < 0:
        raise ValueError("pairs_per_class must be >= 0")
    complex_ = list({v.article_id: v for v, _ in aligned}.values())
    simple = list({v.article_id: v for _, v in aligned}.values())
    n_cc = (pairs_per_class + 1) // 2
    n_ss = pairs_per_class // 2
    avail_cc = len(complex_) * (len(complex_) - 1) // 2
    avail_ss = len(simple) * (len(simple) - 1) // 2
    if pairs_per_class > len(aligned):
        raise InsufficientArticles(pairs_per_class, len(aligned))
    if n_cc > avail_cc:
        raise InsufficientArticles(n_cc, avail_cc)
    if n_ss > avail_ss:
        raise InsufficientArticles(n_ss, avail_ss)

    rng = np.random.default_rng(seed)
    instances = []
    for k in rng.choice(len(aligned), size=pairs_per_class, replace=False):
        va, vb = aligned[int(k)]
        instances.append(PairInstance(pair_difference(va, vb), Label.DIFFERENT))
    for pool, count in ((complex_, n_cc), (simple, n_ss)):
        for i, j in _sample_pairs(rng, len(pool), count):
            instances.append(PairInstance(pair_difference(pool[i], pool[j]), Label.SAME))
    return PairDataset(instances, Provenance.ALIGNED)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

DATASET_HEADER = ["id_a", "id_b", "label"] + [f"f{i}" for i in range(1, N_FEATURES + 1)]


def write_dataset(ds: PairDataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(DATASET_HEADER)
        for inst in ds.instances:
            w.writerow([inst.id_a, inst.id_b, inst.label.text] +
                       [repr(float(x)) for x in inst.vector.deltas])


def read_dataset(path) -> PairDataset:
    path = Path(path)
    if not path.is_file():
        raise FileMissing(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header != DATASET_HEADER:
            raise SchemaMismatch(header, path=path, line=1)
        instances = []
        for lineno, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != len(DATASET_HEADER):
                raise DataError("wrong number of columns", path=path, line=lineno)
            try:
                label = Label[row[2].upper()]
            except KeyError:
                raise DataError(f"bad label {row[2]!r}", path=path, line=lineno) from None
            try:
                deltas = tuple(float(x) for x in row[3:])
            except ValueError as exc:
                raise DataError(str(exc), path=path, line=lineno) from None
            instances.append(PairInstance(PairVector(row[0], row[1], deltas), label))
    try:
        return PairDataset(instances)
    except ValueError as exc:
        raise DataError(str(exc), path=path) from None
