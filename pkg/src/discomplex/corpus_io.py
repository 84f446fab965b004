"""Readers for articles, bracketed parse trees, discourse annotations,
lexicons and corpus manifests.

All returned objects are frozen dataclasses and can be shared freely.
"""

from __future__ import annotations

import enum
import math
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .errors import (
    DataError,
    EmptyConstituent,
    ExplicitWithoutMarker,
    FileMissing,
    InvariantViolation,
    MalformedLine,
    MalformedTree,
    NegativeValue,
    SentenceTreeCountMismatch,
    TrailingInput,
    UnbalancedBrackets,
    UnknownRealization,
    UnknownSense,
)

__all__ = [
    "Token", "ParseTree", "Sentence", "Realization", "Sense",
    "DiscourseRelation", "Level", "Article", "Lexicon", "ManifestRow",
    "parse_bracketed_tree", "parse_discourse_file", "tokenize_line",
    "read_manifest", "load_article", "load_corpus", "load_lexicon",
    "read_alignment",
]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    surface: str
    pos: Optional[str] = None

    def __post_init__(self):
        if not self.surface:
            raise InvariantViolation("empty token surface")
        if self.pos is not None and (not self.pos or any(c.isspace() for c in self.pos)):
            raise InvariantViolation(f"bad POS tag {self.pos!r}")


@dataclass(frozen=True)
class ParseTree:
    """A constituent. Leaves are preterminals: they carry a token and no children."""

    label: str
    children: tuple["ParseTree", ...] = ()
    token: Optional[Token] = None

    def __post_init__(self):
        if not self.label:
            raise InvariantViolation("empty tree label")
        if bool(self.children) == (self.token is not None):
            raise InvariantViolation(
                f"node {self.label!r} must have children or a token, not both")

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self) -> list[Token]:
        out: list[Token] = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.token is not None:
                out.append(node.token)
            else:
                stack.extend(reversed(node.children))
        return out

    def nodes(self) -> Iterator["ParseTree"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def height(self) -> int:
        """Edges on the longest root-to-word path (a preterminal has height 1)."""
        # iterative post-order; trees from real parsers can be deep
        best = 0
        stack = [(self, 1)]
        while stack:
            node, depth = stack.pop()
            if node.token is not None:
                best = max(best, depth)
            else:
                stack.extend((c, depth + 1) for c in node.children)
        return best

    def __str__(self) -> str:
        if self.token is not None:
            return f"({self.label} {self.token.surface})"
        return f"({self.label} {' '.join(str(c) for c in self.children)})"


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    tree: Optional[ParseTree] = None

    def __post_init__(self):
        if not self.tokens:
            raise InvariantViolation("sentence without tokens")
        if self.tree is not None and len(self.tree.leaves()) != len(self.tokens):
            raise InvariantViolation("tree leaves do not match tokens")


class Realization(enum.Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"


class Sense(enum.Enum):
    """Second-level discourse senses."""

    ASYNCHRONOUS = "asynchronous"
    SYNCHRONOUS = "synchronous"
    CAUSE = "cause"
    PRAGMATIC_CAUSE = "pragmatic cause"
    CONDITION = "condition"
    PRAGMATIC_CONDITION = "pragmatic condition"
    CONTRAST = "contrast"
    PRAGMATIC_CONTRAST = "pragmatic contrast"
    CONCESSION = "concession"
    PRAGMATIC_CONCESSION = "pragmatic concession"
    CONJUNCTION = "conjunction"
    INSTANTIATION = "instantiation"
    RESTATEMENT = "restatement"
    ALTERNATIVE = "alternative"
    EXCEPTION = "exception"
    LIST = "list"

    @classmethod
    def parse(cls, token: str) -> "Sense":
        key = " ".join(token.replace("_", " ").replace("-", " ").lower().split())
        try:
            return cls(key)
        except ValueError:
            raise UnknownSense(None, token) from None

    @property
    def title(self) -> str:
        return self.value.title()


@dataclass(frozen=True)
class DiscourseRelation:
    realization: Realization
    sense: Sense
    marker: Optional[str] = None

    def __post_init__(self):
        if self.marker is not None:
            if not self.marker or self.marker != self.marker.lower():
                raise InvariantViolation(f"marker {self.marker!r} must be non-empty lowercase")
        elif self.realization is Realization.EXPLICIT:
            raise ExplicitWithoutMarker()


class Level(enum.Enum):
    SIMPLE = "simple"
    COMPLEX = "complex"


@dataclass(frozen=True)
class Article:
    id: str
    sentences: tuple[Sentence, ...]
    relations: tuple[DiscourseRelation, ...] = ()
    score: Optional[float] = None
    level: Optional[Level] = None

    def __post_init__(self):
        if not self.sentences:
            raise InvariantViolation(f"article {self.id!r} has no sentences")
        if self.score is not None:
            if self.level is not None:
                raise InvariantViolation(f"article {self.id!r} has both score and level")
            if not 1.0 <= self.score <= 5.0:
                raise InvariantViolation(f"score {self.score} outside [1.0, 5.0]")

    @property
    def has_trees(self) -> bool:
        return all(s.tree is not None for s in self.sentences)


@dataclass(frozen=True)
class Lexicon:
    entries: dict = field(default_factory=dict)
    total: float = 0.0

    def __post_init__(self):
        if any(v < 0 for v in self.entries.values()):
            raise InvariantViolation("negative lexicon value")

    @classmethod
    def from_counts(cls, counts: dict) -> "Lexicon":
        merged: dict[str, float] = {}
        for word, value in counts.items():
            w = word.lower()
            merged[w] = merged.get(w, 0.0) + float(value)
        return cls(merged, math.fsum(merged.values()))

    def get(self, word: str, default: float = 0.0) -> float:
        return self.entries.get(word, default)

    def __len__(self) -> int:
        return len(self.entries)


# ---------------------------------------------------------------------------
# Bracketed trees
# ---------------------------------------------------------------------------

def _lex_tree(text: str):
    """Yield (kind, value, position) with kind in '(', ')', 'atom'."""
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            yield c, c, i
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            yield "atom", text[i:j], i
            i = j


def parse_bracketed_tree(text: str) -> ParseTree:
    """Parse one Penn-Treebank style bracketed tree.

    A nameless outer wrapper, as in ``( (S ...) )``, is dropped.

    >>> t = parse_bracketed_tree("(NP (DT the) (NN dog))")
    >>> [(tok.surface, tok.pos) for tok in t.leaves()]
    [('the', 'DT'), ('dog', 'NN')]
    """
    tokens = list(_lex_tree(text))
    if not tokens:
        raise EmptyConstituent(0)
    if tokens[0][0] != "(":
        raise MalformedTree("tree must start with '('", tokens[0][2])

    # frames: [open_position, label, children, atoms]
    stack: list[list] = []
    root = None
    for kind, value, pos in tokens:
        if root is not None:
            # a stray ')' is a bracket problem, anything else is extra input
            raise UnbalancedBrackets(pos) if kind == ")" else TrailingInput(pos)
        if kind == "(":
            if stack and stack[-1][3]:
                raise MalformedTree("constituent mixes words and subtrees", pos)
            stack.append([pos, None, [], []])
        elif kind == "atom":
            if not stack:
                raise TrailingInput(pos)
            frame = stack[-1]
            if frame[1] is None and not frame[2]:
                frame[1] = value
            elif frame[2]:
                raise MalformedTree("constituent mixes words and subtrees", pos)
            else:
                frame[3].append((value, pos))
        else:
            if not stack:
                raise UnbalancedBrackets(pos)
            open_pos, label, children, atoms = stack.pop()
            node = _build_node(open_pos, label, children, atoms)
            if stack:
                stack[-1][2].append(node)
            else:
                root = node
    if stack:
        raise UnbalancedBrackets(stack[-1][0])
    if root.label == "":
        if len(root.children) != 1:
            raise MalformedTree("unlabelled root must wrap a single tree", 0)
        root = root.children[0]
    return root


class _Unlabelled:
    """Stand-in for a nameless wrapper node before it is unwrapped."""

    def __init__(self, children):
        self.label = ""
        self.children = children
        self.token = None


def _build_node(open_pos, label, children, atoms):
    if label is None:
        if not children:
            raise EmptyConstituent(open_pos)
        if len(children) == 1:
            return _Unlabelled(tuple(children))
        raise MalformedTree("unlabelled constituent", open_pos)
    if atoms:
        if len(atoms) != 1:
            raise MalformedTree("preterminal with more than one word", atoms[1][1])
        if any(c.isspace() for c in label):
            raise MalformedTree("bad POS tag", open_pos)
        return ParseTree(label, token=Token(atoms[0][0], label))
    if not children:
        raise EmptyConstituent(open_pos)
    if any(isinstance(c, _Unlabelled) for c in children):
        raise MalformedTree("unlabelled constituent", open_pos)
    return ParseTree(label, tuple(children))


# ---------------------------------------------------------------------------
# Discourse annotations
# ---------------------------------------------------------------------------

def _parse_relation(line: str, lineno: int) -> DiscourseRelation:
    parts = [p.strip() for p in line.split("|")]
    if len(parts) != 3 or not all(parts):
        raise MalformedLine(lineno, "expected Realization|Sense|marker")
    real_tok, sense_tok, marker_tok = parts
    try:
        realization = Realization(real_tok.lower())
    except ValueError:
        raise UnknownRealization(lineno, real_tok) from None
    try:
        sense = Sense.parse(sense_tok)
    except UnknownSense:
        raise UnknownSense(lineno, sense_tok) from None
    marker = None if marker_tok == "-" else " ".join(marker_tok.lower().split())
    if marker is None and realization is Realization.EXPLICIT:
        raise ExplicitWithoutMarker(lineno)
    return DiscourseRelation(realization, sense, marker)


def parse_discourse_file(text: str) -> list[DiscourseRelation]:
    """Parse ``Realization|Sense|marker`` lines; ``-`` marks a missing marker."""
    relations = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        relations.append(_parse_relation(line, lineno))
    return relations


# ---------------------------------------------------------------------------
# Articles and manifests
# ---------------------------------------------------------------------------

_PUNCT = frozenset(string.punctuation)


def tokenize_line(line: str) -> list[Token]:
    """Whitespace tokenization, peeling leading/trailing ASCII punctuation
    into one-character tokens."""
    out: list[Token] = []
    for chunk in line.split():
        i, j = 0, len(chunk)
        while i < j and chunk[i] in _PUNCT:
            i += 1
        while j > i and chunk[j - 1] in _PUNCT:
            j -= 1
        out.extend(Token(c) for c in chunk[:i])
        if i < j:
            out.append(Token(chunk[i:j]))
        out.extend(Token(c) for c in chunk[j:])
    return out


@dataclass(frozen=True)
class ManifestRow:
    id: str
    text_path: Path
    trees_path: Optional[Path]
    disc_path: Path
    score: Optional[float] = None
    level: Optional[Level] = None
    source: Optional[str] = None
    line: Optional[int] = None


def _parse_meta(field_: str, lineno: int, path):
    if field_ == "-":
        return None, None
    low = field_.lower()
    if low in ("simple", "complex"):
        return None, Level(low)
    try:
        score = float(field_)
    except ValueError:
        raise MalformedLine(lineno, f"bad score/level {field_!r}", path=path) from None
    if not (1.0 <= score <= 5.0):
        raise InvariantViolation(f"score {score} outside [1.0, 5.0]", path=path, line=lineno)
    return score, None


def read_manifest(path) -> list[ManifestRow]:
    """Read a manifest TSV. Relative paths resolve against the manifest's directory."""
    path = Path(path)
    if not path.is_file():
        raise FileMissing(path)
    base = path.parent
    rows: list[ManifestRow] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cols = raw.rstrip("\r\n").split("\t")
        if len(cols) != 5 or not all(c.strip() for c in cols):
            raise MalformedLine(lineno, "expected 5 tab-separated columns", path=path)
        aid, text, trees, disc, meta = (c.strip() for c in cols)
        if aid in seen:
            raise InvariantViolation(f"duplicate article id {aid!r}", path=path, line=lineno)
        seen.add(aid)
        score, level = _parse_meta(meta, lineno, path)
        rows.append(ManifestRow(
            id=aid,
            text_path=base / text,
            trees_path=None if trees == "-" else base / trees,
            disc_path=base / disc,
            score=score,
            level=level,
            source=str(path),
            line=lineno,
        ))
    return rows


def _read_lines(path: Path) -> list[tuple[int, str]]:
    if not path.is_file():
        raise FileMissing(path)
    return [(i, ln.strip()) for i, ln in
            enumerate(path.read_text(encoding="utf-8").splitlines(), start=1)
            if ln.strip()]


def load_article(row: ManifestRow) -> Article:
    text_lines = _read_lines(row.text_path)
    if row.trees_path is not None:
        tree_lines = _read_lines(row.trees_path)
        if len(tree_lines) != len(text_lines):
            raise SentenceTreeCountMismatch(
                len(text_lines), len(tree_lines), path=row.trees_path)
        sentences = []
        for lineno, line in tree_lines:
            try:
                tree = parse_bracketed_tree(line)
            except DataError as exc:
                raise exc.located(row.trees_path, lineno)
            sentences.append(Sentence(tuple(tree.leaves()), tree))
    else:
        sentences = []
        for lineno, line in text_lines:
            toks = tokenize_line(line)
            if not toks:
                raise InvariantViolation("empty sentence", path=row.text_path, line=lineno)
            sentences.append(Sentence(tuple(toks)))
    if not row.disc_path.is_file():
        raise FileMissing(row.disc_path)
    try:
        relations = parse_discourse_file(row.disc_path.read_text(encoding="utf-8"))
    except DataError as exc:
        raise exc.located(row.disc_path)
    try:
        return Article(row.id, tuple(sentences), tuple(relations), row.score, row.level)
    except DataError as exc:
        raise exc.located(row.source, row.line)


def load_corpus(manifest_path) -> list[Article]:
    return [load_article(r) for r in read_manifest(manifest_path)]


def load_lexicon(path) -> Lexicon:
    """Read a ``word<TAB>value`` file; case variants are merged by summing."""
    path = Path(path)
    if not path.is_file():
        raise FileMissing(path)
    counts: dict[str, float] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        cols = raw.strip().split("\t")
        if len(cols) != 2 or not cols[0].strip():
            raise MalformedLine(lineno, "expected word<TAB>value", path=path)
        try:
            value = float(cols[1])
        except ValueError:
            raise MalformedLine(lineno, f"bad value {cols[1]!r}", path=path) from None
        if not math.isfinite(value):
            raise MalformedLine(lineno, f"bad value {cols[1]!r}", path=path)
        if value < 0:
            raise NegativeValue(lineno, path=path)
        word = cols[0].strip().lower()
        counts[word] = counts.get(word, 0.0) + value
    return Lexicon(counts, math.fsum(counts.values()))


def read_alignment(path) -> list[tuple[str, str]]:
    """Read ``complex_id<TAB>simple_id`` rows of an article alignment."""
    path = Path(path)
    if not path.is_file():
        raise FileMissing(path)
    pairs = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cols = [c.strip() for c in raw.split("\t")]
        if len(cols) != 2 or not all(cols):
            raise MalformedLine(lineno, "expected complex_id<TAB>simple_id", path=path)
        pairs.append((cols[0], cols[1]))
    return pairs


def articles_by_id(articles: Sequence[Article]) -> dict[str, Article]:
    return {a.id: a for a in articles}
