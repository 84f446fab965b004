"""Synthetic corpora and datasets with known ground truth.

The mini-corpus written by :func:`write_minicorpus` ties only the discourse
relations of each article to its complexity; sentence content, length,
pronouns, vocabulary and syntax are drawn independently of it. Classifiers
trained on it should therefore lean on the coherence features alone.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus_io import Level, parse_bracketed_tree

_NOUNS = ["dog", "city", "report", "market", "river", "company", "teacher", "idea",
          "road", "garden", "letter", "bridge", "window", "council", "storm", "price"]
_VERBS = ["saw", "built", "changed", "found", "moved", "left", "took", "made",
          "opened", "closed", "sold", "held"]
_ADJS = ["old", "new", "large", "quiet", "strange", "early", "bright", "local"]
_NAMES = ["Anna", "Boston", "Marek", "Lisbon", "Chen", "Oslo"]
_PRONOUNS = ["he", "she", "it", "they"]
_PREPS = ["in", "near", "after", "with"]
_SUBORD = ["because", "while", "although", "when"]

_SIMPLE_SENSES = [("Conjunction", ["and", "also"]), ("Cause", ["because", "so"]),
                  ("Asynchronous", ["then", "after"]), ("List", ["and", "finally"])]
_COMPLEX_SENSES = [("Concession", ["although", "even though"]),
                   ("Contrast", ["however", "but"]), ("Restatement", ["in fact"]),
                   ("Instantiation", ["for example"]), ("Condition", ["if", "unless"])]


class _Gen:
    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def pick(self, seq):
        return seq[int(self.rng.integers(len(seq)))]

    def np_(self):
        r = self.rng.random()
        if r < 0.2:
            return f"(NP (PRP {self.pick(_PRONOUNS)}))"
        if r < 0.35:
            return f"(NP (NNP {self.pick(_NAMES)}))"
        det = "the" if self.rng.random() < 0.6 else "a"
        if self.rng.random() < 0.4:
            return f"(NP (DT {det}) (JJ {self.pick(_ADJS)}) (NN {self.pick(_NOUNS)}))"
        return f"(NP (DT {det}) (NN {self.pick(_NOUNS)}))"

    def vp(self):
        parts = [f"(VBD {self.pick(_VERBS)})", self.np_()]
        if self.rng.random() < 0.35:
            parts.append(f"(PP (IN {self.pick(_PREPS)}) {self.np_()})")
        return f"(VP {' '.join(parts)})"

    def clause(self):
        return f"(S {self.np_()} {self.vp()})"

    def sentence(self):
        body = [self.np_(), self.vp()]
        if self.rng.random() < 0.3:
            body.append(f"(SBAR (IN {self.pick(_SUBORD)}) {self.clause()})")
        return f"(S {' '.join(body)} (. .))"

    def relations(self, n_sent: int, c: float):
        """Discourse relations for an article of complexity c in [0, 1]."""
        count = max(0, int(round(n_sent * (0.3 + 1.4 * c))))
        lines = []
        for _ in range(count):
            pool = _COMPLEX_SENSES if self.rng.random() < c else _SIMPLE_SENSES
            sense, markers = self.pick(pool)
            marker = self.pick(markers)
            if self.rng.random() < 0.85 - 0.6 * c:
                lines.append(f"Explicit|{sense}|{marker}")
            elif self.rng.random() < 0.5:
                lines.append(f"Implicit|{sense}|{marker}")
            else:
                lines.append(f"Implicit|{sense}|-")
        return lines


def _write_article(root: Path, aid: str, gen: _Gen, c: float, n_sent: int) -> None:
    trees = [gen.sentence() for _ in range(n_sent)]
    (root / "trees" / f"{aid}.mrg").write_text("\n".join(trees) + "\n", encoding="utf-8")
    text = [" ".join(tok.surface for tok in parse_bracketed_tree(t).leaves()) for t in trees]
    (root / "text" / f"{aid}.txt").write_text("\n".join(text) + "\n", encoding="utf-8")
    rels = gen.relations(n_sent, c)
    (root / "disc" / f"{aid}.rel").write_text(
        "# realization|sense|marker\n" + "".join(r + "\n" for r in rels), encoding="utf-8")


def _manifest_row(aid: str, meta: str) -> str:
    return f"{aid}\ttext/{aid}.txt\ttrees/{aid}.mrg\tdisc/{aid}.rel\t{meta}\n"


def minicorpus_scores(n: int = 28, seed: int = 2016) -> list[float]:
    rng = np.random.default_rng(seed)
    scores = np.round(rng.uniform(1.8, 4.4, size=n), 1)
    scores[0] = 3.2
    return [float(s) for s in scores]


def write_minicorpus(root, *, n_scored: int = 28, n_aligned: int = 10,
                     seed: int = 2016) -> Path:
    """Write the synthetic corpus: a scored manifest, a levelled manifest
    with its alignment file, and two lexicons."""
    root = Path(root)
    for sub in ("text", "trees", "disc"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    gen = _Gen(rng)

    rows = []
    for i, score in enumerate(minicorpus_scores(n_scored, seed), start=1):
        aid = f"fx_{i:03d}"
        _write_article(root, aid, gen, (score - 1.0) / 4.0, int(rng.integers(6, 15)))
        rows.append(_manifest_row(aid, f"{score:.1f}"))
    (root / "scored.tsv").write_text("".join(rows), encoding="utf-8")

    rows, align = [], []
    for i in range(1, n_aligned + 1):
        cid, sid = f"lvl_c{i:02d}", f"lvl_s{i:02d}"
        _write_article(root, cid, gen, 0.85, int(rng.integers(6, 15)))
        _write_article(root, sid, gen, 0.15, int(rng.integers(6, 15)))
        rows.append(_manifest_row(cid, Level.COMPLEX.value))
        rows.append(_manifest_row(sid, Level.SIMPLE.value))
        align.append(f"{cid}\t{sid}\n")
    (root / "leveled.tsv").write_text("".join(rows), encoding="utf-8")
    (root / "alignment.tsv").write_text("".join(align), encoding="utf-8")

    vocab = sorted({w.lower() for w in _NOUNS + _VERBS + _ADJS + _NAMES + _PRONOUNS
                    + _PREPS + _SUBORD + ["the", "a"]})
    syn = [f"{w}\t{int(rng.integers(0, 12))}\n" for w in vocab if rng.random() < 0.9]
    freq = [f"{w}\t{int(rng.integers(1_000, 5_000_000))}\n" for w in vocab if rng.random() < 0.95]
    (root / "synonyms.tsv").write_text("".join(syn), encoding="utf-8")
    (root / "frequencies.tsv").write_text("".join(freq), encoding="utf-8")
    return root


def planted_dataset(n: int = 400, feature: int = 0, noise: float = 0.05,
                    seed: int = 0, n_features: int = 16):
    """Gaussian deltas with the label planted on one column.

    The label is ``different`` (1) iff column ``feature`` is positive; half
    the rows get each sign, then ``noise * n / 2`` labels of each class are
    flipped, so the classes stay exactly balanced. Returns (X, y).
    """
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, n_features))
    signs = rng.permutation(np.repeat([1.0, -1.0], [n - n // 2, n // 2]))
    X[:, feature] = np.abs(X[:, feature]) * signs
    y = (signs > 0).astype(np.int64)
    per_class = int(round(noise * n / 2))
    flip = np.concatenate([rng.choice(np.flatnonzero(y == c), per_class, replace=False)
                           for c in (0, 1)])
    y[flip] = 1 - y[flip]
    return X, y


def bundled_corpus() -> Path:
    """Directory of the mini-corpus shipped with the package."""
    return Path(__file__).parent / "data" / "minicorpus"


if __name__ == "__main__":  # pragma: no cover
    import sys

    out = write_minicorpus(sys.argv[1] if len(sys.argv) > 1 else bundled_corpus())
    print(out)
