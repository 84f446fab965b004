import pytest

from discomplex.corpus_io import (
    Article,
    DiscourseRelation,
    Lexicon,
    Level,
    Realization,
    Sense,
    Sentence,
    Token,
    load_article,
    load_corpus,
    load_lexicon,
    parse_bracketed_tree,
    parse_discourse_file,
    read_alignment,
    read_manifest,
    tokenize_line,
)
from discomplex.errors import (
    DataError,
    EmptyConstituent,
    ExplicitWithoutMarker,
    FileMissing,
    InvariantViolation,
    MalformedLine,
    NegativeValue,
    SentenceTreeCountMismatch,
    TrailingInput,
    TreeSyntaxError,
    UnbalancedBrackets,
    UnknownRealization,
    UnknownSense,
)


# --- trees -----------------------------------------------------------------

def test_parse_simple_tree():
    t = parse_bracketed_tree("(S (NP (DT The) (NN cat)) (VP (VBD sat)))")
    assert t.label == "S"
    assert [(tok.surface, tok.pos) for tok in t.leaves()] == [
        ("The", "DT"), ("cat", "NN"), ("sat", "VBD")]
    assert t.height() == 3
    assert [n.label for n in t.nodes()] == ["S", "NP", "DT", "NN", "VP", "VBD"]


def test_preterminal_height_is_one():
    assert parse_bracketed_tree("(NN dog)").height() == 1


def test_nameless_wrapper_is_unwrapped():
    t = parse_bracketed_tree("( (S (NP (PRP It)) (VP (VBZ is))) )")
    assert t.label == "S"
    assert len(t.leaves()) == 2


@pytest.mark.parametrize("text", [
    "(S (NP (DT the) (NN dog)) (VP (VBD barked)) (. .))",
    "(NP-SBJ-1 (NNP Anna))",
    "(SBAR (IN because) (S (NP (PRP it)) (VP (VBD rained))))",
])
def test_tree_round_trip(text):
    t = parse_bracketed_tree(text)
    assert str(t) == text
    assert parse_bracketed_tree(str(t)) == t


@pytest.mark.parametrize("text, exc", [
    ("(S (NP (DT the) (NN dog))", UnbalancedBrackets),
    ("(S (NP (DT the)))) ", UnbalancedBrackets),
    ("(S ())", EmptyConstituent),
    ("(S (NN dog)) (S (NN cat))", TrailingInput),
    ("", TreeSyntaxError),
    ("dog", TreeSyntaxError),
])
def test_tree_errors(text, exc):
    with pytest.raises(exc):
        parse_bracketed_tree(text)


def test_tree_error_reports_position():
    with pytest.raises(TreeSyntaxError) as info:
        parse_bracketed_tree("(S (NN dog)) x")
    assert info.value.position == 13


# --- discourse files -------------------------------------------------------

def test_parse_discourse_file():
    text = ("# header\n"
            "Explicit|Contrast|However\n"
            "\n"
            "Implicit|Pragmatic_Cause|-\n"
            "implicit|pragmatic-concession|even   though\n")
    rels = parse_discourse_file(text)
    assert rels == [
        DiscourseRelation(Realization.EXPLICIT, Sense.CONTRAST, "however"),
        DiscourseRelation(Realization.IMPLICIT, Sense.PRAGMATIC_CAUSE, None),
        DiscourseRelation(Realization.IMPLICIT, Sense.PRAGMATIC_CONCESSION, "even though"),
    ]


@pytest.mark.parametrize("line, exc", [
    ("Explicit|Contrast", MalformedLine),
    ("Explicit|Contrast|but|x", MalformedLine),
    ("Explicit|Sarcasm|but", UnknownSense),
    ("Hidden|Contrast|but", UnknownRealization),
    ("Explicit|Contrast|-", ExplicitWithoutMarker),
])
def test_discourse_errors_carry_line(line, exc):
    with pytest.raises(exc) as info:
        parse_discourse_file("# c\n" + line + "\n")
    assert info.value.line == 2


def test_sense_covers_sixteen_values():
    assert len(Sense) == 16
    assert Sense.parse("PRAGMATIC CONDITION") is Sense.PRAGMATIC_CONDITION


# --- tokens and sentences --------------------------------------------------

def test_tokenize_line_peels_punctuation():
    toks = [t.surface for t in tokenize_line('He said: "Stop!" (twice).')]
    assert toks == ["He", "said", ":", '"', "Stop", "!", '"', "(", "twice", ")", "."]


def test_tokenize_keeps_inner_punctuation():
    assert [t.surface for t in tokenize_line("U.S. don't")] == ["U.S", ".", "don't"]


def test_sentence_rejects_mismatched_tree():
    tree = parse_bracketed_tree("(S (NN a) (NN b))")
    with pytest.raises(InvariantViolation):
        Sentence((Token("a"),), tree)


def test_article_invariants():
    s = Sentence((Token("x"),))
    with pytest.raises(InvariantViolation):
        Article("a", ())
    with pytest.raises(InvariantViolation):
        Article("a", (s,), score=5.5)
    with pytest.raises(InvariantViolation):
        Article("a", (s,), score=3.0, level=Level.SIMPLE)


# --- manifests and articles ------------------------------------------------

def test_read_manifest_bundled(corpus_dir):
    rows = read_manifest(corpus_dir / "scored.tsv")
    assert len(rows) == 28
    assert rows[0].id == "fx_001" and rows[0].score == 3.2
    assert rows[0].text_path == corpus_dir / "text" / "fx_001.txt"
    assert all(1.0 <= r.score <= 5.0 for r in rows)
    levels = {r.level for r in read_manifest(corpus_dir / "leveled.tsv")}
    assert levels == {Level.SIMPLE, Level.COMPLEX}


def test_load_article_uses_tree_leaves(corpus_dir):
    row = read_manifest(corpus_dir / "scored.tsv")[0]
    art = load_article(row)
    assert art.id == "fx_001" and art.score == 3.2
    assert art.has_trees
    for s in art.sentences:
        assert [t.surface for t in s.tokens] == [t.surface for t in s.tree.leaves()]
        assert all(t.pos for t in s.tokens)


def test_load_article_without_trees(tmp_path):
    (tmp_path / "a.txt").write_text("The dog barked.\nIt ran away!\n")
    (tmp_path / "a.rel").write_text("Implicit|Cause|-\n")
    (tmp_path / "m.tsv").write_text("a\ta.txt\t-\ta.rel\t2.5\n")
    (art,) = load_corpus(tmp_path / "m.tsv")
    assert not art.has_trees
    assert [t.surface for t in art.sentences[0].tokens] == ["The", "dog", "barked", "."]
    assert art.relations[0].marker is None


def test_sentence_tree_count_mismatch(corpus_copy):
    trees = corpus_copy / "trees" / "fx_001.mrg"
    lines = trees.read_text().splitlines()
    trees.write_text("\n".join(lines[:-1]) + "\n")
    row = read_manifest(corpus_copy / "scored.tsv")[0]
    with pytest.raises(SentenceTreeCountMismatch):
        load_article(row)


def test_bad_tree_in_file_is_located(corpus_copy):
    trees = corpus_copy / "trees" / "fx_002.mrg"
    lines = trees.read_text().splitlines()
    lines[1] = lines[1] + ")"
    trees.write_text("\n".join(lines) + "\n")
    row = read_manifest(corpus_copy / "scored.tsv")[1]
    with pytest.raises(TreeSyntaxError) as info:
        load_article(row)
    assert info.value.line == 2
    assert str(trees) in str(info.value)


def test_manifest_errors(tmp_path):
    m = tmp_path / "m.tsv"
    m.write_text("a\ta.txt\t-\ta.rel\n")
    with pytest.raises(MalformedLine):
        read_manifest(m)
    m.write_text("a\ta.txt\t-\ta.rel\t6.0\n")
    with pytest.raises(InvariantViolation):
        read_manifest(m)
    m.write_text("a\ta.txt\t-\ta.rel\tmedium\n")
    with pytest.raises(MalformedLine):
        read_manifest(m)
    m.write_text("a\ta.txt\t-\ta.rel\t2\na\tb.txt\t-\tb.rel\t3\n")
    with pytest.raises(InvariantViolation):
        read_manifest(m)
    with pytest.raises(FileMissing):
        read_manifest(tmp_path / "nope.tsv")


def test_missing_article_file(tmp_path):
    (tmp_path / "m.tsv").write_text("a\ta.txt\t-\ta.rel\t2\n")
    with pytest.raises(FileMissing):
        load_corpus(tmp_path / "m.tsv")


# --- lexicons and alignment ------------------------------------------------

def test_load_lexicon_merges_case(tmp_path):
    p = tmp_path / "lex.tsv"
    p.write_text("Dog\t3\ndog\t2\ncat\t0.5\n\n")
    lex = load_lexicon(p)
    assert lex.get("dog") == 5.0
    assert lex.get("cat") == 0.5
    assert lex.get("bird") == 0.0
    assert lex.total == 5.5
    assert len(lex) == 2


@pytest.mark.parametrize("body, exc", [
    ("dog\t-1\n", NegativeValue),
    ("dog\tmany\n", MalformedLine),
    ("dog\tnan\n", MalformedLine),
    ("dog 3\n", MalformedLine),
])
def test_lexicon_errors(tmp_path, body, exc):
    p = tmp_path / "lex.tsv"
    p.write_text(body)
    with pytest.raises(exc):
        load_lexicon(p)


def test_lexicon_from_counts():
    lex = Lexicon.from_counts({"A": 1, "a": 2, "b": 1})
    assert lex.entries == {"a": 3.0, "b": 1.0}
    assert lex.total == 4.0


def test_read_alignment(corpus_dir, tmp_path):
    pairs = read_alignment(corpus_dir / "alignment.tsv")
    assert len(pairs) == 10 and pairs[0] == ("lvl_c01", "lvl_s01")
    bad = tmp_path / "al.tsv"
    bad.write_text("only_one\n")
    with pytest.raises(MalformedLine):
        read_alignment(bad)


def test_data_error_formatting():
    e = DataError("boom", path="x.tsv", line=4)
    assert str(e) == "x.tsv:4: boom"
    assert str(DataError("boom").located("y", 2)) == "y:2: boom"
