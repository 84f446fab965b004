import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discomplex.corpus_io import Article, DiscourseRelation, Realization, Sense, Sentence, Token
from discomplex.discourse_stats import (
    Event,
    EventKind,
    ProbabilityModel,
    derive_events,
    event_prob,
    fit,
    load_model,
    log_factorial,
    log_score,
    multinomial_pmf,
    n_prob,
    save_model,
)
from discomplex.errors import DataError, EmptyCorpus, FileMissing, NonPositiveAlpha, OverflowRisk

RS = EventKind.REALIZATION_SENSE
EXP, IMP = Realization.EXPLICIT, Realization.IMPLICIT


def article(relations, aid="a"):
    return Article(aid, (Sentence((Token("x"),)),), tuple(relations))


def ev(*parts, kind=RS):
    return Event(kind, parts)


A, B, C = ev("explicit", "contrast"), ev("implicit", "cause"), ev("explicit", "list")
TWO_A_ONE_B = [DiscourseRelation(EXP, Sense.CONTRAST, "but")] * 2 + \
              [DiscourseRelation(IMP, Sense.CAUSE, None)]


class ToyModel:
    """n_prob(3) = 0.5, p_A = 0.6, p_B = 0.4."""

    def n_prob(self, n):
        return 0.5 if n == 3 else 0.1

    def event_prob(self, e):
        return {A: 0.6, B: 0.4}[e]


# --- event derivation ------------------------------------------------------

def test_derive_events_kinds():
    rels = TWO_A_ONE_B
    assert derive_events(rels, RS) == Counter({A: 2, B: 1})
    sm = derive_events(rels, EventKind.SENSE_MARKER)
    assert sm == Counter({ev("contrast", "but", kind=EventKind.SENSE_MARKER): 2})
    rsm = derive_events(article(rels), EventKind.REALIZATION_SENSE_MARKER)
    assert sum(rsm.values()) == 2
    assert derive_events([], RS) == Counter()


def test_event_arity_checked():
    with pytest.raises(ValueError):
        Event(EventKind.REALIZATION_SENSE_MARKER, ("explicit", "contrast"))


# --- fitting and probabilities ---------------------------------------------

def test_fit_single_article():
    m = fit([article(TWO_A_ONE_B)], RS)
    assert dict(m.event_counts) == {A: 2, B: 1}
    assert m.event_total == 3 and m.vocab_size == 3
    assert dict(m.n_counts) == {3: 1}


def test_fit_is_additive():
    m = fit([article(TWO_A_ONE_B), article(TWO_A_ONE_B, "b")], RS)
    assert m.event_total == 6
    assert dict(m.n_counts) == {3: 2}


def test_fit_errors():
    with pytest.raises(NonPositiveAlpha):
        fit([article(TWO_A_ONE_B)], RS, alpha=0)
    with pytest.raises(EmptyCorpus):
        fit([], RS)


def test_event_prob_laplace():
    m = fit([article(TWO_A_ONE_B)], RS)
    assert event_prob(m, A) == 0.5
    assert event_prob(m, C) == pytest.approx(1 / 6, abs=0)


def test_n_prob_add_one():
    m = fit([article(TWO_A_ONE_B), article(TWO_A_ONE_B, "b")], RS)
    assert n_prob(m, 3) == 0.75
    assert n_prob(m, 7) == 0.25


def test_probabilities_strictly_positive():
    m = ProbabilityModel(RS, {A: 10**6}, {0: 10**6}, alpha=1e-9)
    assert event_prob(m, B) > 0
    assert n_prob(m, 12345) > 0


# --- scoring ---------------------------------------------------------------

def test_toy_log_score():
    bag = {A: 2, B: 1}
    expected = math.log(0.5) + math.log(6) + 2 * math.log(0.6) - math.log(2) + math.log(0.4)
    assert log_score(ToyModel(), bag) == pytest.approx(expected, abs=1e-12)
    assert log_score(ToyModel(), bag) == pytest.approx(math.log(0.216), abs=1e-12)
    assert multinomial_pmf(ToyModel(), bag) == pytest.approx(0.216, rel=1e-15)


def test_degenerate_bags():
    m = fit([article(TWO_A_ONE_B)], RS)
    assert log_score(m, []) == math.log(n_prob(m, 0))
    assert multinomial_pmf(m, []) == n_prob(m, 0)
    assert log_score(m, [A]) == pytest.approx(math.log(n_prob(m, 1)) + math.log(event_prob(m, A)))


def test_pmf_overflow_guard():
    m = fit([article(TWO_A_ONE_B)], RS)
    with pytest.raises(OverflowRisk):
        multinomial_pmf(m, {A: 21})
    multinomial_pmf(m, {A: 20})


def test_log_score_permutation_invariant():
    m = fit([article(TWO_A_ONE_B)], RS)
    events = [A, B, A, C, C, B, A]
    ref = log_score(m, events)
    rng = random.Random(3)
    for _ in range(20):
        rng.shuffle(events)
        assert log_score(m, events) == ref


def test_log_factorial_table():
    assert log_factorial(0) == 0.0
    for n in range(1, 200):
        assert log_factorial(n) == log_factorial(n - 1) + math.log(n)
    assert log_factorial(170) == pytest.approx(math.lgamma(171), rel=1e-13)
    with pytest.raises(ValueError):
        log_factorial(-1)


@st.composite
def model_and_bag(draw):
    n_types = draw(st.integers(1, 6))
    events = [ev("explicit", f"s{i}") for i in range(n_types)]
    counts = {e: draw(st.integers(0, 50)) for e in events}
    n_counts = draw(st.dictionaries(st.integers(0, 20), st.integers(1, 9), max_size=5))
    alpha = draw(st.floats(0.01, 5.0))
    model = ProbabilityModel(RS, counts, n_counts, alpha)
    extra = ev("implicit", "unseen")
    bag = draw(st.dictionaries(st.sampled_from(events + [extra]), st.integers(1, 5), max_size=4))
    if sum(bag.values()) > 20:
        bag = {}
    return model, bag


@settings(max_examples=200, deadline=None)
@given(model_and_bag())
def test_log_score_matches_exact_pmf(mb):
    model, bag = mb
    pmf = multinomial_pmf(model, bag)
    assert abs(math.exp(log_score(model, bag)) - pmf) / pmf < 1e-9


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from([A, B, C]), max_size=15),
       st.lists(st.sampled_from([A, B, C]), max_size=15))
def test_tally_union(xs, ys):
    def arts(evs, prefix):
        rels = [DiscourseRelation(EXP if e.parts[0] == "explicit" else IMP,
                                  Sense.parse(e.parts[1]), "so" if e.parts[0] == "explicit" else None)
                for e in evs]
        return [article(rels, prefix)]
    a, b = arts(xs, "a"), arts(ys, "b")
    assert fit(a + b, RS).event_total == fit(a, RS).event_total + fit(b, RS).event_total


# --- serialization ---------------------------------------------------------

def test_model_round_trip(tmp_path, corpus_dir):
    from discomplex.corpus_io import load_corpus
    arts = load_corpus(corpus_dir / "scored.tsv")
    for kind in EventKind:
        m = fit(arts, kind, alpha=0.5)
        save_model(m, tmp_path / "m.json")
        m2 = load_model(tmp_path / "m.json")
        assert m2 == m
        for a in arts:
            bag = derive_events(a, kind)
            assert log_score(m2, bag) == log_score(m, bag)


def test_load_model_errors(tmp_path):
    with pytest.raises(FileMissing):
        load_model(tmp_path / "missing.json")
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(DataError):
        load_model(p)
    p.write_text('{"kind": "realization_sense", "alpha": 1, "event_counts": [], '
                 '"n_counts": [[0, 1]], "event_total": 5, "n_total": 1}')
    with pytest.raises(DataError):
        load_model(p)
