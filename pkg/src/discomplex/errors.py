"""Exception types raised while loading data or running experiments.

Every error that stems from bad input data derives from :class:`DataError`;
the command-line front end maps those to exit code 2.
"""

from __future__ import annotations


class DataError(ValueError):
    """Base class for problems with input data.

    ``path`` and ``line`` locate the offending record when known.
    """

    def __init__(self, message: str, *, path=None, line: int | None = None):
        self.path = None if path is None else str(path)
        self.line = line
        super().__init__(message)

    def __str__(self) -> str:
        msg = super().__str__()
        where = ""
        if self.path is not None:
            where = self.path
            if self.line is not None:
                where += f":{self.line}"
        elif self.line is not None:
            where = f"line {self.line}"
        return f"{where}: {msg}" if where else msg

    def located(self, path=None, line=None):
        """Fill in location fields that are still unknown and return self."""
        if self.path is None and path is not None:
            self.path = str(path)
        if self.line is None and line is not None:
            self.line = line
        return self


# --- bracketed trees -------------------------------------------------------

class TreeSyntaxError(DataError):
    def __init__(self, message: str, position: int, **kw):
        self.position = position
        super().__init__(f"{message} at position {position}", **kw)


class UnbalancedBrackets(TreeSyntaxError):
    def __init__(self, position: int, **kw):
        super().__init__("unbalanced brackets", position, **kw)


class EmptyConstituent(TreeSyntaxError):
    def __init__(self, position: int, **kw):
        super().__init__("empty constituent", position, **kw)


class TrailingInput(TreeSyntaxError):
    def __init__(self, position: int, **kw):
        super().__init__("trailing input after tree", position, **kw)


class MalformedTree(TreeSyntaxError):
    pass


# --- line-oriented files ---------------------------------------------------

class MalformedLine(DataError):
    def __init__(self, line: int, detail: str = "malformed line", **kw):
        super().__init__(detail, line=line, **kw)


class UnknownSense(DataError):
    def __init__(self, line: int | None, token: str, **kw):
        self.token = token
        super().__init__(f"unknown discourse sense {token!r}", line=line, **kw)


class UnknownRealization(DataError):
    def __init__(self, line: int | None, token: str, **kw):
        self.token = token
        super().__init__(f"unknown realization {token!r}", line=line, **kw)


class ExplicitWithoutMarker(DataError):
    def __init__(self, line: int | None = None, **kw):
        super().__init__("explicit relation without a marker", line=line, **kw)


class NegativeValue(DataError):
    def __init__(self, line: int, **kw):
        super().__init__("negative lexicon value", line=line, **kw)


class FileMissing(DataError):
    def __init__(self, path, **kw):
        super().__init__("file not found", path=path, **kw)


class SentenceTreeCountMismatch(DataError):
    def __init__(self, expected: int, got: int, **kw):
        self.expected = expected
        self.got = got
        super().__init__(
            f"{expected} sentences but {got} trees", **kw)


class InvariantViolation(DataError):
    pass


class SchemaMismatch(DataError):
    def __init__(self, header, **kw):
        self.header = header
        super().__init__(f"unexpected CSV header {header!r}", **kw)


# --- modelling -------------------------------------------------------------

class EmptyCorpus(DataError):
    def __init__(self, **kw):
        super().__init__("no articles to fit on", **kw)


class NonPositiveAlpha(ValueError):
    pass


class OverflowRisk(ValueError):
    pass


class MissingTrees(DataError):
    def __init__(self, article_id: str, **kw):
        self.article_id = article_id
        super().__init__(f"article {article_id!r} lacks parse trees", **kw)


class EmptyArticle(DataError):
    pass


class TooFewArticles(DataError):
    pass


class InsufficientArticles(DataError):
    def __init__(self, needed: int, available: int, **kw):
        self.needed = needed
        self.available = available
        super().__init__(
            f"need {needed} pairs but only {available} available", **kw)


class MissingScores(DataError):
    pass


class MissingAlignment(DataError):
    pass


class EmptyDataset(DataError):
    pass


class TooFewInstances(DataError):
    pass



class EmptyCounts(ValueError):
    pass


class UnknownFeatureSpec(ValueError):
    pass
