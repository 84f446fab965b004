from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discomplex.datasets import (
    Label,
    PairDataset,
    Provenance,
    _unrank_pair,
    balance_threshold,
    build_aligned_pairs,
    build_threshold_pairs,
    read_dataset,
    write_dataset,
)
from discomplex.errors import DataError, InsufficientArticles, SchemaMismatch, TooFewArticles
from discomplex.features import FeatureVector


def vec(aid, rng=None, value=None):
    if value is not None:
        return FeatureVector(aid, (float(value),) * 16)
    return FeatureVector(aid, tuple(rng.normal(size=16)))


def scored(scores, seed=0):
    rng = np.random.default_rng(seed)
    return [(vec(f"a{i}", rng), s) for i, s in enumerate(scores)]


@pytest.mark.parametrize("k", [2, 3, 10, 28])
def test_threshold_pair_count(k):
    ds = build_threshold_pairs(scored(np.linspace(1, 5, k)), 0.7)
    assert len(ds) == comb(k, 2)
    assert ds.provenance is Provenance.THRESHOLD


def test_threshold_boundary_is_inclusive():
    ds = build_threshold_pairs(scored([2.0, 2.7, 3.5]), 0.7)
    labels = {(i.id_a, i.id_b): i.label for i in ds.instances}
    assert labels[("a0", "a1")] is Label.SAME
    assert labels[("a1", "a2")] is Label.DIFFERENT
    assert labels[("a0", "a2")] is Label.DIFFERENT
    for lo in (1.0, 1.1, 2.3, 4.3):
        ds = build_threshold_pairs(scored([lo, round(lo + 0.7, 1)]), 0.7)
        assert ds.instances[0].label is Label.SAME


def test_threshold_pair_deltas_and_order():
    ds = build_threshold_pairs([(vec("x", value=3), 1.0), (vec("y", value=1), 2.0)], 0.5)
    (inst,) = ds.instances
    assert (inst.id_a, inst.id_b) == ("x", "y")
    assert inst.vector.deltas == (2.0,) * 16


def test_threshold_errors():
    with pytest.raises(TooFewArticles):
        build_threshold_pairs(scored([2.0]), 0.7)
    with pytest.raises(ValueError):
        build_threshold_pairs(scored([2.0, 3.0]), 0.0)


def _imbalance(tenths, t_tenths):
    # exact integer arithmetic on scores held in tenths
    gaps = [abs(a - b) for a, b in combinations(tenths, 2)]
    same = sum(g <= t_tenths for g in gaps)
    return abs(2 * same - len(gaps))


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(10, 50), min_size=2, max_size=12))
def test_balance_threshold_is_optimal(tenths):
    t = balance_threshold([x / 10 for x in tenths])
    assert t > 0
    best = min(_imbalance(tenths, g) for g in range(0, 42))
    assert _imbalance(tenths, t * 10) == best


def test_balance_threshold_bundled(corpus_dir):
    from discomplex.corpus_io import read_manifest
    scores = [r.score for r in read_manifest(corpus_dir / "scored.tsv")]
    tenths = [round(10 * s) for s in scores]
    t = balance_threshold(scores)
    counts = build_threshold_pairs(scored(scores), t).label_counts()
    best = min(_imbalance(tenths, g) for g in range(0, 42))
    assert abs(counts[Label.SAME] - counts[Label.DIFFERENT]) == best


def test_unrank_pair_matches_combinations():
    for m in range(2, 60):
        expected = list(combinations(range(m), 2))
        assert [_unrank_pair(k, m) for k in range(len(expected))] == expected


def test_unrank_pair_large():
    m = 3000
    total = comb(m, 2)
    assert _unrank_pair(0, m) == (0, 1)
    assert _unrank_pair(total - 1, m) == (m - 2, m - 1)
    assert _unrank_pair(m - 1, m) == (1, 2)


def aligned(n, seed=0):
    rng = np.random.default_rng(seed)
    return [(vec(f"c{i}", rng), vec(f"s{i}", rng)) for i in range(n)]


@pytest.mark.parametrize("ppc", [1, 4, 5, 10])
def test_aligned_counts(ppc):
    ds = build_aligned_pairs(aligned(10), ppc, seed=3)
    counts = ds.label_counts()
    assert len(ds) == 2 * ppc
    assert counts[Label.SAME] == counts[Label.DIFFERENT] == ppc
    for inst in ds.instances:
        a, b = inst.id_a[0], inst.id_b[0]
        if inst.label is Label.DIFFERENT:
            assert (a, b) == ("c", "s") and inst.id_a[1:] == inst.id_b[1:]
        else:
            assert a == b
    same = [i for i in ds.instances if i.label is Label.SAME]
    assert sum(i.id_a[0] == "c" for i in same) == (ppc + 1) // 2


def test_aligned_full_scale_count():
    ds = build_aligned_pairs(aligned(994), 994, seed=0)
    assert len(ds) == 1988


def test_aligned_is_seeded():
    a = build_aligned_pairs(aligned(20), 7, seed=11)
    b = build_aligned_pairs(aligned(20), 7, seed=11)
    c = build_aligned_pairs(aligned(20), 7, seed=12)
    ids = lambda ds: [(i.id_a, i.id_b) for i in ds.instances]
    assert ids(a) == ids(b)
    assert ids(a) != ids(c)


def test_aligned_insufficient():
    with pytest.raises(InsufficientArticles):
        build_aligned_pairs(aligned(3), 4, seed=0)
    rng = np.random.default_rng(0)
    c0 = vec("c0", rng)
    shared_complex = [(c0, vec(f"s{i}", rng)) for i in range(3)]
    with pytest.raises(InsufficientArticles):
        build_aligned_pairs(shared_complex, 1, seed=0)
    assert len(build_aligned_pairs(aligned(2), 2, seed=0)) == 4


def test_dataset_rejects_duplicates():
    rng = np.random.default_rng(0)
    ds = build_threshold_pairs(scored([1, 2, 3]), 0.7)
    inst = ds.instances[0]
    with pytest.raises(ValueError):
        PairDataset([inst, inst])
    from discomplex.datasets import PairInstance
    from discomplex.features import pair_difference
    v = vec("z", rng)
    with pytest.raises(ValueError):
        PairDataset([PairInstance(pair_difference(v, v), Label.SAME)])


def test_dataset_csv_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    ds = build_threshold_pairs([(vec(f"a{i}", rng), 1 + i * 0.3) for i in range(8)], 0.7)
    write_dataset(ds, tmp_path / "d.csv")
    back = read_dataset(tmp_path / "d.csv")
    assert np.array_equal(back.X, ds.X)
    assert np.array_equal(back.y, ds.y)
    assert [(i.id_a, i.id_b) for i in back.instances] == [(i.id_a, i.id_b) for i in ds.instances]


def test_read_dataset_errors(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("a,b,c\n")
    with pytest.raises(SchemaMismatch):
        read_dataset(p)
    header = "id_a,id_b,label," + ",".join(f"f{i}" for i in range(1, 17))
    p.write_text(header + "\nx,y,maybe," + ",".join(["0"] * 16) + "\n")
    with pytest.raises(DataError) as info:
        read_dataset(p)
    assert info.value.line == 2
