import shutil

import pytest

from discomplex.corpus_io import Lexicon
from discomplex.discourse_stats import EventKind, fit
from discomplex.features import ExtractionContext
from discomplex.synth import bundled_corpus


@pytest.fixture(scope="session")
def corpus_dir():
    return bundled_corpus()


@pytest.fixture
def corpus_copy(tmp_path, corpus_dir):
    """A writable copy of the bundled mini-corpus."""
    dst = tmp_path / "corpus"
    shutil.copytree(corpus_dir, dst)
    return dst


def make_context(articles, synonyms=None, frequencies=None):
    models = {kind: fit(articles, kind) for kind in EventKind}
    return ExtractionContext(
        models,
        Lexicon.from_counts(synonyms or {}),
        Lexicon.from_counts(frequencies or {}),
    )


# --- acceptance reporting --------------------------------------------------

_acceptance: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        prev = _acceptance.get(number, (title, True))[1]
        _acceptance[number] = (title, prev and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
