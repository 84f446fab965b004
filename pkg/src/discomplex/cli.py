"""Command-line front end.

Subcommands run the pipeline stages in order::

    discomplex fit-stats --manifest scored.tsv --out models/
    discomplex extract   --manifest scored.tsv --models models/ \\
                         --synonyms syn.tsv --frequencies freq.tsv --out features.csv
    discomplex pair      --mode threshold --manifest scored.tsv \\
                         --vectors features.csv --threshold 0.7 --out pairs.csv
    discomplex evaluate  --dataset pairs.csv --grid --seed 1 --out report.csv
    discomplex rank      --dataset pairs.csv --out ranking.csv

Every option may also come from a ``key = value`` file given with
``--config``; flags win over the file, the file wins over defaults.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus_io, datasets, discourse_stats, experiments, features
from .corpus_io import Level
from .discourse_stats import EventKind
from .errors import (
    DataError,
    EmptyCorpus,
    FileMissing,
    MissingAlignment,
    MissingScores,
    UnknownFeatureSpec,
)
from .learn import ForestParams, save_forest, train_forest

EXIT_USAGE, EXIT_DATA = 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _threshold(value: str):
    if value.lower() == "auto":
        return "auto"
    t = float(value)
    if not t > 0:
        raise argparse.ArgumentTypeError("threshold must be > 0 or 'auto'")
    return t


def _optional_int(value: str):
    return None if value.lower() in ("none", "-", "") else int(value)


# defaults live here rather than in argparse so that config values can
# take precedence over them
DEFAULTS = {
    "alpha": 1.0,
    "threshold": 0.7,
    "pairs_per_class": None,
    "k_folds": 10,
    "n_trees": 100,
    "max_depth": None,
    "min_leaf": 1,
    "features_per_split": 4,
    "mode": "threshold",
}

# config files hold text; these options need converting
CONVERTERS = {
    "alpha": float, "threshold": _threshold, "pairs_per_class": int,
    "k_folds": int, "n_trees": int, "max_depth": _optional_int, "min_leaf": int,
    "features_per_split": int, "seed": int,
    "features": lambda v: [s.strip() for s in v.split(",") if s.strip()],
    "grid": lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="discomplex", description="Pairwise text-complexity experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, out_help):
        p.add_argument("--config", type=Path, help="key = value settings file")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", type=Path, help=out_help)

    p = sub.add_parser("fit-stats", help="fit discourse event models")
    common(p, "directory for the three model files")
    p.add_argument("--manifest", type=Path, help="training articles")
    p.add_argument("--alpha", type=float, help="additive smoothing for event probabilities")

    p = sub.add_parser("extract", help="compute the 16 features per article")
    common(p, "feature CSV")
    p.add_argument("--manifest", type=Path)
    p.add_argument("--models", type=Path, help="directory written by fit-stats")
    p.add_argument("--synonyms", type=Path, help="synonym-count lexicon TSV")
    p.add_argument("--frequencies", type=Path, help="word-frequency lexicon TSV")

    p = sub.add_parser("pair", help="build a pairwise dataset")
    common(p, "dataset CSV")
    p.add_argument("--mode", choices=["threshold", "aligned"])
    p.add_argument("--manifest", type=Path)
    p.add_argument("--vectors", type=Path, help="feature CSV written by extract")
    p.add_argument("--threshold", type=_threshold, help="score gap or 'auto'")
    p.add_argument("--alignment", type=Path, help="complex_id<TAB>simple_id TSV")
    p.add_argument("--pairs-per-class", type=int)

    p = sub.add_parser("evaluate", help="cross-validate feature subsets")
    common(p, "report CSV")
    p.add_argument("--dataset", type=Path)
    p.add_argument("--features", action="append", metavar="SPEC",
                   help="feature spec; repeatable")
    p.add_argument("--grid", action="store_true", default=None,
                   help="evaluate the 12-row ablation grid")
    p.add_argument("--k-folds", type=int)
    p.add_argument("--n-trees", type=int)
    p.add_argument("--max-depth", type=_optional_int)
    p.add_argument("--min-leaf", type=int)
    p.add_argument("--features-per-split", type=int)
    p.add_argument("--model-out", type=Path,
                   help="also save a forest trained on the whole dataset")

    p = sub.add_parser("rank", help="rank features by information gain")
    common(p, "ranking CSV")
    p.add_argument("--dataset", type=Path)
    return parser


def read_config(path: Path) -> dict[str, str]:
    if not path.is_file():
        raise FileMissing(path)
    out = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError("expected key = value", path=path, line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = (value, lineno)
    return out


def resolve_args(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from the config file, then from DEFAULTS."""
    if getattr(args, "config", None) is not None:
        cfg = read_config(args.config)
        base = args.config.parent
        for key, (value, lineno) in cfg.items():
            if not hasattr(args, key) or key in ("config", "command"):
                raise DataError(f"unknown setting {key!r}", path=args.config, line=lineno)
            if getattr(args, key) is not None:
                continue
            try:
                if key in CONVERTERS:
                    converted = CONVERTERS[key](value)
                elif key in ("out", "manifest", "models", "synonyms", "frequencies",
                             "vectors", "alignment", "dataset", "model_out"):
                    converted = base / value
                else:
                    converted = value
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise DataError(f"bad value for {key}: {exc}", path=args.config,
                                line=lineno) from None
            setattr(args, key, converted)
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return args


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"{args.command}: missing required option(s) {flags}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

MODEL_FILES = {kind: f"{kind.value}.json" for kind in EventKind}


def cmd_fit_stats(args) -> int:
    _require(args, "manifest", "out")
    articles = corpus_io.load_corpus(args.manifest)
    if not articles:
        raise EmptyCorpus(path=args.manifest)
    args.out.mkdir(parents=True, exist_ok=True)
    for kind, name in MODEL_FILES.items():
        model = discourse_stats.fit(articles, kind, args.alpha)
        discourse_stats.save_model(model, args.out / name)
        print(f"{kind.value}: {len(model.event_counts)} event types, "
              f"{model.event_total} events over {model.n_total} articles -> {args.out / name}")
    return 0


def load_context(models_dir: Path, synonyms: Path, frequencies: Path) -> features.ExtractionContext:
    models = {kind: discourse_stats.load_model(models_dir / name)
              for kind, name in MODEL_FILES.items()}
    return features.ExtractionContext(
        models, corpus_io.load_lexicon(synonyms), corpus_io.load_lexicon(frequencies))


def cmd_extract(args) -> int:
    _require(args, "manifest", "models", "synonyms", "frequencies", "out")
    ctx = load_context(args.models, args.synonyms, args.frequencies)
    vectors = []
    for row in corpus_io.read_manifest(args.manifest):
        try:
            vectors.append(features.extract(corpus_io.load_article(row), ctx))
        except DataError as exc:
            raise exc.located(row.source, row.line)
    features.write_features(vectors, args.out)
    print(f"wrote {len(vectors)} feature vectors -> {args.out}")
    return 0


def _vectors_by_id(path: Path) -> dict[str, features.FeatureVector]:
    return {v.article_id: v for v in features.read_features(path)}


def _lookup(vectors, aid, row_src):
    try:
        return vectors[aid]
    except KeyError:
        raise DataError(f"no feature vector for article {aid!r}", path=row_src) from None


def cmd_pair(args) -> int:
    _require(args, "manifest", "vectors", "out")
    rows = corpus_io.read_manifest(args.manifest)
    vectors = _vectors_by_id(args.vectors)
    if args.mode == "threshold":
        unscored = [r for r in rows if r.score is None]
        if unscored:
            r = unscored[0]
            raise MissingScores(f"article {r.id!r} has no complexity score",
                                path=r.source, line=r.line)
        scored = [(_lookup(vectors, r.id, args.vectors), r.score) for r in rows]
        threshold = args.threshold
        if threshold == "auto":
            threshold = datasets.balance_threshold([s for _, s in scored])
            print(f"auto threshold: {threshold:.6g}")
        ds = datasets.build_threshold_pairs(scored, threshold)
    else:
        _require(args, "alignment", "pairs_per_class", "seed")
        if not args.alignment.is_file():
            raise MissingAlignment("alignment file not found", path=args.alignment)
        levels = {r.id: r.level for r in rows}
        aligned = []
        for lineno, (cid, sid) in enumerate(corpus_io.read_alignment(args.alignment), start=1):
            if levels.get(cid) is not Level.COMPLEX or levels.get(sid) is not Level.SIMPLE:
                raise MissingAlignment(
                    f"{cid!r}/{sid!r} is not a complex/simple pair in the manifest",
                    path=args.alignment, line=lineno)
            aligned.append((_lookup(vectors, cid, args.vectors),
                            _lookup(vectors, sid, args.vectors)))
        ds = datasets.build_aligned_pairs(aligned, args.pairs_per_class, args.seed)
    datasets.write_dataset(ds, args.out)
    counts = ds.label_counts()
    print(f"pairs of articles    {len(ds)}")
    print(f"positive (same)      {counts[datasets.Label.SAME]}")
    print(f"negative (different) {counts[datasets.Label.DIFFERENT]}")
    return 0


def forest_params(args) -> ForestParams:
    try:
        return ForestParams(n_trees=args.n_trees, max_depth=args.max_depth,
                            min_leaf=args.min_leaf,
                            features_per_split=args.features_per_split, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_evaluate(args) -> int:
    _require(args, "dataset", "out", "seed")
    specs = list(experiments.ABLATION_GRID) if args.grid else []
    for s in args.features or []:
        if s not in specs:
            specs.append(s)
    if not specs:
        specs = [experiments.ALL]
    for s in specs:
        try:
            experiments.resolve_feature_spec(s)
        except UnknownFeatureSpec as exc:
            raise UsageError(str(exc)) from None
    ds = datasets.read_dataset(args.dataset)
    params = forest_params(args)
    rows = experiments.evaluate_specs(ds, specs, params, args.k_folds)
    experiments.write_report(rows, args.out)
    print(experiments.format_report(rows))
    if args.model_out is not None:
        save_forest(train_forest(ds, params), args.model_out)
    return 0


def cmd_rank(args) -> int:
    _require(args, "dataset", "out")
    rows = experiments.rank_table(datasets.read_dataset(args.dataset))
    experiments.write_rank(rows, args.out)
    print(experiments.format_rank(rows))
    return 0


COMMANDS = {
    "fit-stats": cmd_fit_stats,
    "extract": cmd_extract,
    "pair": cmd_pair,
    "evaluate": cmd_evaluate,
    "rank": cmd_rank,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        resolve_args(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"discomplex: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"discomplex: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"discomplex: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
