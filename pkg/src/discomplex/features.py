"""The sixteen article features and pairwise difference vectors.

Index  Class      Feature
F1     coherence  log-score of realization/sense events
F2     coherence  log-score of sense/marker events
F3     coherence  log-score of realization/sense/marker events
F4     coherence  discourse relations per sentence
F5     cohesion   pronouns per sentence
F6     cohesion   definite articles per sentence
F7     surface    number of words
F8     surface    characters per word
F9     surface    words per sentence
F10    lexical    shared word types between consecutive sentences
F11    lexical    mean synonym count of words
F12    lexical    mean relative corpus frequency of words
F13    syntactic  VP nodes per sentence
F14    syntactic  NP nodes per sentence
F15    syntactic  SBAR nodes per sentence
F16    syntactic  mean parse tree height
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus_io import Article, Lexicon, ParseTree, Sentence
from .discourse_stats import EventKind, ProbabilityModel, derive_events, log_score
from .errors import DataError, EmptyArticle, FileMissing, MissingTrees, SchemaMismatch

N_FEATURES = 16

FEATURE_NAMES = (
    "log-score realization-sense",
    "log-score sense-marker",
    "log-score realization-sense-marker",
    "discourse relation frequency",
    "pronouns per sentence",
    "definite articles per sentence",
    "text length",
    "characters per word",
    "words per sentence",
    "word overlaps per sentence",
    "synonyms per word",
    "word frequency",
    "verb phrases per sentence",
    "noun phrases per sentence",
    "subordinate clauses per sentence",
    "parse tree height",
)

# 0-based indices per class
FEATURE_CLASSES: dict[str, tuple[int, ...]] = {
    "coherence": (0, 1, 2, 3),
    "cohesion": (4, 5),
    "surface": (6, 7, 8),
    "lexical": (9, 10, 11),
    "syntactic": (12, 13, 14, 15),
}

DEFAULT_PRONOUN_TAGS = frozenset({"PRP", "PRP$", "WP", "WP$"})

# used only for tokens that carry no POS tag
PRONOUN_WORDS = frozenset("""
i me my mine myself you your yours yourself yourselves he him his himself
she her hers herself it its itself we us our ours ourselves they them their
theirs themselves who whom whose what which
""".split())

_EVENT_KINDS = (
    EventKind.REALIZATION_SENSE,
    EventKind.SENSE_MARKER,
    EventKind.REALIZATION_SENSE_MARKER,
)


@dataclass(frozen=True)
class FeatureVector:
    article_id: str
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != N_FEATURES:
            raise ValueError(f"expected {N_FEATURES} values, got {len(self.values)}")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError(f"non-finite feature value for {self.article_id!r}")


@dataclass(frozen=True)
class PairVector:
    id_a: str
    id_b: str
    deltas: tuple[float, ...]


@dataclass(frozen=True)
class ExtractionContext:
    models: Mapping[EventKind, ProbabilityModel]
    synonym_lexicon: Lexicon
    frequency_lexicon: Lexicon
    pronoun_tags: frozenset = field(default=DEFAULT_PRONOUN_TAGS)

    def __post_init__(self):
        for kind in _EVENT_KINDS:
            model = self.models.get(kind)
            if model is None or model.kind is not kind:
                raise ValueError(f"missing model for {kind.value}")


def is_word(surface: str) -> bool:
    return any(c.isalnum() for c in surface)


def sentence_words(sentence: Sentence) -> list[str]:
    return [t.surface.lower() for t in sentence.tokens if is_word(t.surface)]


def word_tokens(article: Article) -> list[str]:
    """Lowercased tokens that contain a letter or digit, in order."""
    return [w for s in article.sentences for w in sentence_words(s)]


def _base_label(label: str) -> str:
    # NP-SBJ-1 -> NP, NP=2 -> NP; -NONE- stays as is
    if label.startswith("-"):
        return label
    return label.split("-", 1)[0].split("=", 1)[0]


def _count_labels(tree: ParseTree) -> dict[str, int]:
    counts = {"VP": 0, "NP": 0, "SBAR": 0}
    for node in tree.nodes():
        if node.token is None:
            base = _base_label(node.label)
            if base in counts:
                counts[base] += 1
    return counts


def _pronoun_count(sentence: Sentence, tags) -> int:
    n = 0
    for tok in sentence.tokens:
        if tok.pos is not None:
            n += tok.pos in tags
        else:
            n += tok.surface.lower() in PRONOUN_WORDS
    return n


def _definite_count(sentence: Sentence) -> int:
    return sum(1 for tok in sentence.tokens
               if tok.surface.lower() == "the" and (tok.pos is None or tok.pos == "DT"))


def _mean_lexicon(words: Sequence[str], lexicon: Lexicon, relative: bool) -> float:
    if not words:
        return 0.0
    if relative:
        if lexicon.total <= 0:
            return 0.0
        return math.fsum(lexicon.get(w) for w in words) / lexicon.total / len(words)
    return math.fsum(lexicon.get(w) for w in words) / len(words)


def extract(article: Article, ctx: ExtractionContext) -> FeatureVector:
    sentences = article.sentences
    if not sentences:
        raise EmptyArticle(f"article {article.id!r} has no sentences")
    if not article.has_trees:
        raise MissingTrees(article.id)
    n_sent = len(sentences)
    per_sentence_words = [sentence_words(s) for s in sentences]
    words = [w for ws in per_sentence_words for w in ws]
    n_words = len(words)

    f = [0.0] * N_FEATURES
    for i, kind in enumerate(_EVENT_KINDS):
        f[i] = log_score(ctx.models[kind], derive_events(article, kind))
    f[3] = len(article.relations) / n_sent

    f[4] = sum(_pronoun_count(s, ctx.pronoun_tags) for s in sentences) / n_sent
    f[5] = sum(_definite_count(s) for s in sentences) / n_sent

    f[6] = float(n_words)
    f[7] = sum(len(w) for w in words) / n_words if n_words else 0.0
    f[8] = n_words / n_sent

    overlaps = [len(set(a) & set(b)) for a, b in zip(per_sentence_words, per_sentence_words[1:])]
    f[9] = sum(overlaps) / max(1, n_sent - 1)
    f[10] = _mean_lexicon(words, ctx.synonym_lexicon, relative=False)
    f[11] = _mean_lexicon(words, ctx.frequency_lexicon, relative=True)

    label_counts = [_count_labels(s.tree) for s in sentences]
    f[12] = sum(c["VP"] for c in label_counts) / n_sent
    f[13] = sum(c["NP"] for c in label_counts) / n_sent
    f[14] = sum(c["SBAR"] for c in label_counts) / n_sent
    f[15] = sum(s.tree.height() for s in sentences) / n_sent
    return FeatureVector(article.id, tuple(f))


def extract_all(articles: Iterable[Article], ctx: ExtractionContext) -> list[FeatureVector]:
    return [extract(a, ctx) for a in articles]


def pair_difference(va: FeatureVector, vb: FeatureVector) -> PairVector:
    if len(va.values) != N_FEATURES or len(vb.values) != N_FEATURES:
        raise ValueError("feature vectors must have 16 components")
    return PairVector(va.article_id, vb.article_id,
                      tuple(a - b for a, b in zip(va.values, vb.values)))


# ---------------------------------------------------------------------------
# Feature CSV
# ---------------------------------------------------------------------------

FEATURE_HEADER = ["article_id"] + [f"f{i}" for i in range(1, N_FEATURES + 1)]


def write_features(vectors: Iterable[FeatureVector], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(FEATURE_HEADER)
        for v in vectors:
            w.writerow([v.article_id] + [f"{x:.9g}" for x in v.values])


def read_features(path) -> list[FeatureVector]:
    path = Path(path)
    if not path.is_file():
        raise FileMissing(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header != FEATURE_HEADER:
            raise SchemaMismatch(header, path=path, line=1)
        out = []
        for lineno, row in enumerate(rows, start=2):
            if len(row) != len(FEATURE_HEADER):
                raise DataError("wrong number of columns", path=path, line=lineno)
            try:
                out.append(FeatureVector(row[0], tuple(float(x) for x in row[1:])))
            except ValueError as exc:
                raise DataError(str(exc), path=path, line=lineno) from None
    return out


def as_matrix(vectors: Sequence[FeatureVector]) -> np.ndarray:
    return np.array([v.values for v in vectors], dtype=float).reshape(-1, N_FEATURES)
