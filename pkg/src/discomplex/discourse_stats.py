"""Multinomial event models over discourse properties.

An article is treated as a bag of discourse events (e.g. realization/sense
pairs). A fitted :class:`ProbabilityModel` scores that bag with the log of
the multinomial probability mass, weighted by the probability of seeing an
article with that many events at all::

    log P(n) + log n! + sum_i (x_i log p_i - log x_i!)

All logarithms are natural.
"""

from __future__ import annotations

import enum
import json
import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus_io import Article, DiscourseRelation
from .errors import DataError, EmptyCorpus, FileMissing, NonPositiveAlpha, OverflowRisk

__all__ = [
    "EventKind", "Event", "ProbabilityModel", "derive_events", "fit",
    "event_prob", "n_prob", "log_score", "multinomial_log_score",
    "multinomial_pmf", "log_factorial", "save_model", "load_model",
]

MAX_EXACT_EVENTS = 20


class EventKind(enum.Enum):
    REALIZATION_SENSE = "realization_sense"
    SENSE_MARKER = "sense_marker"
    REALIZATION_SENSE_MARKER = "realization_sense_marker"

    @property
    def arity(self) -> int:
        return 3 if self is EventKind.REALIZATION_SENSE_MARKER else 2


@dataclass(frozen=True, order=True)
class Event:
    kind: EventKind = field(compare=False)
    parts: tuple[str, ...]

    def __post_init__(self):
        if len(self.parts) != self.kind.arity:
            raise ValueError(f"{self.kind.value} events have {self.kind.arity} parts")


def _event_for(rel: DiscourseRelation, kind: EventKind):
    real, sense = rel.realization.value, rel.sense.value
    if kind is EventKind.REALIZATION_SENSE:
        return Event(kind, (real, sense))
    if rel.marker is None:
        return None
    if kind is EventKind.SENSE_MARKER:
        return Event(kind, (sense, rel.marker))
    return Event(kind, (real, sense, rel.marker))


def derive_events(article: Article | Sequence[DiscourseRelation],
                  kind: EventKind) -> Counter:
    """Bag of events of ``kind``; relations without a marker only yield
    realization/sense events."""
    relations = article.relations if isinstance(article, Article) else article
    bag: Counter = Counter()
    for rel in relations:
        ev = _event_for(rel, kind)
        if ev is not None:
            bag[ev] += 1
    return bag


# ---------------------------------------------------------------------------
# log n!
# ---------------------------------------------------------------------------

class _LogFactorialTable:
    """Cumulative sums of log k, extended on demand."""

    def __init__(self):
        self._table = [0.0]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> float:
        if n < 0:
            raise ValueError("log factorial of a negative number")
        table = self._table
        if n >= len(table):
            with self._lock:
                while len(table) <= n:
                    table.append(table[-1] + math.log(len(table)))
        return table[n]


log_factorial = _LogFactorialTable()


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbabilityModel:
    kind: EventKind
    event_counts: Mapping[Event, int]
    n_counts: Mapping[int, int]
    alpha: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise NonPositiveAlpha(f"alpha must be > 0, got {self.alpha}")
        if any(c < 0 for c in self.event_counts.values()) or \
                any(c < 0 for c in self.n_counts.values()):
            raise ValueError("negative count")
        # cached totals; the mappings are not mutated after construction
        object.__setattr__(self, "event_total", sum(self.event_counts.values()))
        object.__setattr__(self, "n_total", sum(self.n_counts.values()))
        # one extra slot stands for every unseen event
        object.__setattr__(
            self, "vocab_size", sum(1 for c in self.event_counts.values() if c > 0) + 1)
        object.__setattr__(
            self, "_n_support", sum(1 for c in self.n_counts.values() if c > 0))

    def event_prob(self, event: Event) -> float:
        count = self.event_counts.get(event, 0)
        return (count + self.alpha) / (self.event_total + self.alpha * self.vocab_size)

    def n_prob(self, n: int) -> float:
        if n < 0:
            raise ValueError("n must be >= 0")
        return (self.n_counts.get(n, 0) + 1) / (self.n_total + self._n_support + 1)

    def log_score(self, events: Mapping[Event, int] | Iterable[Event]) -> float:
        return log_score(self, events)


def fit(articles: Sequence[Article], kind: EventKind, alpha: float = 1.0) -> ProbabilityModel:
    if not alpha > 0:
        raise NonPositiveAlpha(f"alpha must be > 0, got {alpha}")
    if not articles:
        raise EmptyCorpus()
    events: Counter = Counter()
    n_counts: Counter = Counter()
    for art in articles:
        bag = derive_events(art, kind)
        events.update(bag)
        n_counts[sum(bag.values())] += 1
    return ProbabilityModel(kind, dict(events), dict(n_counts), float(alpha))


def event_prob(model: ProbabilityModel, event: Event) -> float:
    return model.event_prob(event)


def n_prob(model: ProbabilityModel, n: int) -> float:
    return model.n_prob(n)


def _as_bag(events) -> Counter:
    return events if isinstance(events, Counter) else Counter(
        dict(events) if isinstance(events, Mapping) else events)


def multinomial_log_score(p_n: float, multiplicities: Sequence[int],
                          probs: Sequence[float]) -> float:
    """Log-probability of a bag given P(n) and per-value probabilities."""
    n = sum(multiplicities)
    total = math.log(p_n) + log_factorial(n)
    for x, p in zip(multiplicities, probs):
        total += x * math.log(p) - log_factorial(x)
    return total


def log_score(model, events) -> float:
    """Log-probability of an article's event bag under ``model``.

    ``model`` only needs ``event_prob`` and ``n_prob`` methods.
    """
    bag = _as_bag(events)
    items = sorted((ev, x) for ev, x in bag.items() if x > 0)
    n = sum(x for _, x in items)
    return multinomial_log_score(
        model.n_prob(n), [x for _, x in items], [model.event_prob(ev) for ev, _ in items])


def multinomial_pmf(model, events) -> float:
    """Exact-arithmetic evaluation of the same probability; a check on
    :func:`log_score` for bags of at most 20 events."""
    bag = _as_bag(events)
    counts = [x for x in bag.values() if x > 0]
    n = sum(counts)
    if n > MAX_EXACT_EVENTS:
        raise OverflowRisk(f"{n} events exceeds the exact-evaluation limit {MAX_EXACT_EVENTS}")
    coef = math.factorial(n)
    for x in counts:
        coef //= math.factorial(x)
    value = Fraction(model.n_prob(n)) * coef
    for ev, x in bag.items():
        if x > 0:
            value *= Fraction(model.event_prob(ev)) ** x
    return float(value)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def model_to_dict(model: ProbabilityModel) -> dict:
    counts = sorted((ev.parts, c) for ev, c in model.event_counts.items())
    return {
        "kind": model.kind.value,
        "alpha": model.alpha,
        "event_counts": [[*parts, c] for parts, c in counts],
        "n_counts": [[n, c] for n, c in sorted(model.n_counts.items())],
        "event_total": model.event_total,
        "n_total": model.n_total,
    }


def model_from_dict(doc: dict) -> ProbabilityModel:
    try:
        kind = EventKind(doc["kind"])
        events = {}
        for row in doc["event_counts"]:
            *parts, count = row
            events[Event(kind, tuple(parts))] = int(count)
        n_counts = {int(n): int(c) for n, c in doc["n_counts"]}
        model = ProbabilityModel(kind, events, n_counts, float(doc["alpha"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"bad model document: {exc}") from None
    if model.event_total != doc.get("event_total", model.event_total) or \
            model.n_total != doc.get("n_total", model.n_total):
        raise DataError("model totals do not match its counts")
    return model


def save_model(model: ProbabilityModel, path) -> None:
    Path(path).write_text(
        json.dumps(model_to_dict(model), indent=1, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path) -> ProbabilityModel:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise FileMissing(path) from None
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from None
    try:
        return model_from_dict(doc)
    except DataError as exc:
        raise exc.located(path)
