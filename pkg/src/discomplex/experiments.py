"""Ablation grid, significance verdicts and feature ranking tables."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import UnknownFeatureSpec
from .features import FEATURE_CLASSES, FEATURE_NAMES, N_FEATURES
from .learn import CVResult, ForestParams, cross_validate, rank_information_gain, welch_t_test

ALL = "all"
BASELINE = "baseline"

# baseline, all, one class at a time, all but one class
ABLATION_GRID = (
    [BASELINE, ALL]
    + list(FEATURE_CLASSES)
    + [f"all-minus-{c}" for c in FEATURE_CLASSES]
)

DECREASE, NO_CHANGE, INCREASE, NOT_APPLICABLE = "⇓", "=", "⇑", "N/A"

REPORT_HEADER = ["config", "n_features", "mean_acc", "p_value", "verdict"]


def resolve_feature_spec(spec: str) -> tuple[int, ...]:
    """0-based feature indices selected by a spec such as ``coherence``,
    ``all-minus-lexical``, ``single:F2`` or ``baseline``."""
    s = spec.strip().lower()
    if s == ALL:
        return tuple(range(N_FEATURES))
    if s == BASELINE:
        return ()
    if s in FEATURE_CLASSES:
        return FEATURE_CLASSES[s]
    if s.startswith("all-minus-") and s[len("all-minus-"):] in FEATURE_CLASSES:
        dropped = set(FEATURE_CLASSES[s[len("all-minus-"):]])
        return tuple(i for i in range(N_FEATURES) if i not in dropped)
    m = re.fullmatch(r"single:f?(\d+)", s)
    if m and 1 <= int(m.group(1)) <= N_FEATURES:
        return (int(m.group(1)) - 1,)
    raise UnknownFeatureSpec(f"unknown feature spec {spec!r}")


@dataclass(frozen=True)
class ReportRow:
    config: str
    n_features: int
    cv: CVResult
    p_value: Optional[float]
    verdict: str

    @property
    def mean_acc(self) -> float:
        return self.cv.mean


def evaluate_specs(ds, specs: Sequence[str], params: ForestParams,
                   k: int = 10) -> list[ReportRow]:
    """Cross-validate every spec and compare each against ``all``.

    ``all`` is always evaluated (it is the reference for the p-values) and
    added to the output if it was not requested.
    """
    resolved = [(s, resolve_feature_spec(s)) for s in specs]
    if not any(s.strip().lower() == ALL for s, _ in resolved):
        resolved.insert(0, (ALL, resolve_feature_spec(ALL)))
    X, y = ds.X, ds.y
    reference = cross_validate(X, params, k, features=resolve_feature_spec(ALL), y=y)
    rows = []
    for spec, feats in resolved:
        if spec.strip().lower() == ALL:
            rows.append(ReportRow(ALL, N_FEATURES, reference, None, NOT_APPLICABLE))
            continue
        cv = cross_validate(X, params, k, features=feats, y=y)
        test = welch_t_test(cv.fold_accuracies, reference.fold_accuracies)
        if test.significant_decrease:
            verdict = DECREASE
        elif test.significant:
            verdict = INCREASE
        else:
            verdict = NO_CHANGE
        rows.append(ReportRow(spec, len(feats), cv, test.p_value, verdict))
    return rows


def write_report(rows: Sequence[ReportRow], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_HEADER)
        for r in rows:
            w.writerow([r.config, r.n_features, f"{r.mean_acc:.6f}",
                        "" if r.p_value is None else f"{r.p_value:.6g}", r.verdict])


def format_report(rows: Sequence[ReportRow]) -> str:
    cells = [["Feature set", "No. features", "Accuracy", "p-value", "Stat. sign"]]
    for r in rows:
        cells.append([
            r.config,
            "N/A" if r.config == BASELINE else str(r.n_features),
            f"{100 * r.mean_acc:.2f}%",
            "N/A" if r.p_value is None else f"{r.p_value:.2f}",
            r.verdict,
        ])
    return _table(cells, right=(1, 2, 3))


def rank_table(ds) -> list[tuple[int, int, str, float]]:
    """(rank, 1-based feature index, name, gain) rows, best first."""
    return [(rank, j + 1, FEATURE_NAMES[j], gain)
            for rank, (j, gain) in enumerate(rank_information_gain(ds), start=1)]


def write_rank(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["rank", "index", "name", "gain"])
        for rank, idx, name, gain in rows:
            w.writerow([rank, f"F{idx}", name, f"{gain:.9g}"])


def format_rank(rows) -> str:
    cells = [["Rank", "Index", "Feature", "Gain"]]
    cells += [[str(r), f"F{i}", n, f"{g:.4f}"] for r, i, n, g in rows]
    return _table(cells, right=(0, 3))


def _table(cells, right=()) -> str:
    widths = [max(len(row[c]) for row in cells) for c in range(len(cells[0]))]
    lines = []
    for n, row in enumerate(cells):
        lines.append("  ".join(v.rjust(w) if c in right else v.ljust(w)
                               for c, (v, w) in enumerate(zip(row, widths))).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
