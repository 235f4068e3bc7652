"""Turn a results CSV into statistics tables, SVG figures and a markdown summary."""

import csv
import json
import logging
import re
from collections import defaultdict
from pathlib import Path

import numpy as np

from ..stats import mean_ranks, significance_cliques, temporal_filter_rule, wilcoxon_signed_rank
from .experiment import read_results
from .svg import HEIGHT, MARGIN, PALETTE, Canvas

__all__ = ["compute_tables", "write_stats_tables", "emit_report", "setting_label"]

logger = logging.getLogger(__name__)


def setting_label(transform, l_fraction):
    if transform == "identity":
        return "original"
    if transform == "permute":
        return "permute"
    return f"augment_{l_fraction:g}"


class _Index:
    """Per-cell accuracies keyed by (classifier, transform, l, dataset)."""

    def __init__(self, records):
        self.runs = defaultdict(dict)
        for r in records:
            self.runs[(r.classifier, r.transform, r.l_fraction, r.dataset)][r.run] = r.accuracy
        self.classifiers = sorted({r.classifier for r in records})
        self.datasets = sorted({r.dataset for r in records})
        settings = {(r.transform, r.l_fraction) for r in records}
        order = {"identity": 0, "permute": 1, "augment": 2}
        self.settings = sorted(settings, key=lambda s: (order[s[0]], s[1]))

    def cell(self, classifier, transform, l, dataset):
        return self.runs.get((classifier, transform, l, dataset))

    def mean(self, classifier, transform, l, dataset):
        cell = self.cell(classifier, transform, l, dataset)
        return None if not cell else float(np.mean(list(cell.values())))


def _pvalue_rows(index, pair_by, warnings):
    rows = []
    for clf in index.classifiers:
        for transform, l in index.settings:
            if transform == "identity":
                continue
            a, b = [], []
            for ds in index.datasets:
                ori = index.cell(clf, "identity", 0.0, ds)
                new = index.cell(clf, transform, l, ds)
                if not ori or not new:
                    continue
                if pair_by == "run":
                    for run in sorted(set(ori) & set(new)):
                        a.append(ori[run])
                        b.append(new[run])
                else:
                    a.append(np.mean(list(ori.values())))
                    b.append(np.mean(list(new.values())))
            if not a:
                warnings.append(("pvalues", f"{clf} {setting_label(transform, l)}: no paired cells with the original"))
                continue
            res = wilcoxon_signed_rank(a, b, alternative="a_greater")
            rows.append({
                "classifier": clf,
                "setting": setting_label(transform, l),
                "transform": transform,
                "l_fraction": l,
                "n_pairs": len(a),
                "n_effective": res.n_effective,
                "statistic": res.statistic,
                "p_value": res.p_value,
                "method": res.method,
            })
    return rows


def _filter_rows(index, k_std, warnings):
    rows = []
    if not any(t == "permute" for t, _ in index.settings):
        return rows
    for ds in index.datasets:
        for clf in index.classifiers:
            ori = index.cell(clf, "identity", 0.0, ds)
            per = index.cell(clf, "permute", 0.0, ds)
            if not ori or not per:
                warnings.append(("filter", f"{ds} {clf}: missing original or permuted runs"))
                continue
            if len(ori) < 2 or len(per) < 2:
                warnings.append(("filter", f"{ds} {clf}: fewer than two runs, standard deviation undefined"))
                continue
            o, p = np.array(list(ori.values())), np.array(list(per.values()))
            rows.append({
                "dataset": ds,
                "classifier": clf,
                "runs": len(o),
                "ori_mean": o.mean(),
                "ori_std": o.std(ddof=1),
                "per_mean": p.mean(),
                "per_std": p.std(ddof=1),
                "flagged": temporal_filter_rule(o, p, k_std),
                "flagged_relaxed": temporal_filter_rule(o, p, 2 * k_std),
            })
    return rows


def _rank_rows(index, alpha, holm, warnings):
    rows, cliques = [], {}
    for transform, l in index.settings:
        label = setting_label(transform, l)
        usable = []
        for ds in index.datasets:
            missing = [c for c in index.classifiers if index.mean(c, transform, l, ds) is None]
            if missing:
                warnings.append(("ranks", f"{label} {ds}: dropped, no cells for {', '.join(missing)}"))
            else:
                usable.append(ds)
        if not usable:
            warnings.append(("ranks", f"{label}: no dataset has every classifier"))
            continue
        scores = np.array([[index.mean(c, transform, l, ds) for ds in usable] for c in index.classifiers])
        if len(index.classifiers) == 1:
            ranks, groups = np.ones(1), [list(index.classifiers)]
        else:
            ranks = mean_ranks(scores)
            groups = significance_cliques(scores, index.classifiers, alpha=alpha, holm=holm)
        for clf, rank in zip(index.classifiers, ranks):
            rows.append({
                "setting": label,
                "transform": transform,
                "l_fraction": l,
                "classifier": clf,
                "mean_rank": float(rank),
                "mean_accuracy": float(scores[index.classifiers.index(clf)].mean()),
                "n_datasets": len(usable),
            })
        cliques[label] = groups
    return rows, cliques


def compute_tables(records, alpha=0.05, k_std=1.0, holm=False, pair_by="dataset"):
    """All statistics derived from a list of :class:`RunRecord`."""
    if pair_by not in ("dataset", "run"):
        raise ValueError(f"pair_by must be 'dataset' or 'run', got {pair_by!r}")
    index = _Index(records)
    warnings = []
    pvalues = _pvalue_rows(index, pair_by, warnings)
    verdicts = _filter_rows(index, k_std, warnings)
    ranks, cliques = _rank_rows(index, alpha, holm, warnings)
    return {
        "pvalues": pvalues,
        "filter_verdicts": verdicts,
        "mean_ranks": ranks,
        "cliques": cliques,
        "warnings": [{"section": s, "detail": d} for s, d in warnings],
        "index": index,
        "params": {"alpha": alpha, "k_std": k_std, "holm": holm, "pair_by": pair_by},
    }


_COLUMNS = {
    "pvalues": ("classifier", "setting", "transform", "l_fraction", "n_pairs", "n_effective", "statistic", "p_value", "method"),
    "filter_verdicts": ("dataset", "classifier", "runs", "ori_mean", "ori_std", "per_mean", "per_std", "flagged", "flagged_relaxed"),
    "mean_ranks": ("setting", "transform", "l_fraction", "classifier", "mean_rank", "mean_accuracy", "n_datasets"),
    "warnings": ("section", "detail"),
}


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_stats_tables(tables, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, columns in _COLUMNS.items():
        with open(out_dir / f"{name}.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in tables[name]:
                writer.writerow([_cell(row[c]) for c in columns])
    (out_dir / "cliques.json").write_text(json.dumps(tables["cliques"], indent=2) + "\n", encoding="utf-8")
    return out_dir


def _slug(s):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", s)


def pvalue_svg(tables):
    rows = [r for r in tables["pvalues"] if r["transform"] == "augment"]
    ls = sorted({r["l_fraction"] for r in rows}) or [0.0]
    lowest = min([r["p_value"] for r in rows] + [tables["params"]["alpha"]])
    y0 = 10.0 ** np.floor(np.log10(max(lowest, 1e-300)))
    canvas = Canvas("Wilcoxon p-value: original vs augmented", (min(ls), max(ls)), (y0, 1.0),
                    "padding fraction l", "one-sided p-value", log_y=True)
    decades = range(int(np.log10(y0)), 1)
    canvas.axes(ls, [10.0 ** d for d in decades])
    alpha = tables["params"]["alpha"]
    canvas.line(canvas.px(min(ls)), canvas.py(alpha), canvas.px(max(ls)), canvas.py(alpha), color="#888", dash="4 3", cls="alpha")
    names = tables["index"].classifiers
    for i, clf in enumerate(names):
        pts = sorted((r["l_fraction"], r["p_value"]) for r in rows if r["classifier"] == clf)
        color = PALETTE[i % len(PALETTE)]
        if pts:
            canvas.polyline([(canvas.px(x), canvas.py(y)) for x, y in pts], color, cls="series", data={"classifier": clf})
            for x, y in pts:
                canvas.circle(canvas.px(x), canvas.py(y), color)
    canvas.legend(names)
    return canvas.render()


def rank_svg(tables):
    """Mean rank against padding fraction, with no-difference cliques as bars.

    The permuted setting, when present, gets its own column to the right of
    the padding sweep and is not joined to the lines.
    """
    all_rows = tables["mean_ranks"]
    rows = [r for r in all_rows if r["transform"] in ("identity", "augment")]
    names = tables["index"].classifiers
    xs = sorted({r["l_fraction"] for r in rows}) or [0.0]
    span = (max(xs) - min(xs)) or 1.0
    has_permute = any(r["transform"] == "permute" for r in all_rows)
    x_perm = max(xs) + 0.25 * span
    position = {r["setting"]: (x_perm if r["transform"] == "permute" else r["l_fraction"]) for r in all_rows}
    k = max(len(names), 1)
    canvas = Canvas("Mean rank (bars: no significant pairwise difference)",
                    (min(xs), x_perm if has_permute else min(xs) + span),
                    (0.5, k + 0.5), "padding fraction l", "mean rank", invert_y=True)
    canvas.axes(xs, list(range(1, k + 1)))
    if has_permute:
        canvas.text(canvas.px(x_perm), HEIGHT - MARGIN["bottom"] + 16, "permuted", anchor="middle")
    for i, clf in enumerate(names):
        color = PALETTE[i % len(PALETTE)]
        pts = sorted((r["l_fraction"], r["mean_rank"]) for r in rows if r["classifier"] == clf)
        canvas.polyline([(canvas.px(x), canvas.py(y)) for x, y in pts], color, cls="series", data={"classifier": clf})
        for r in all_rows:
            if r["classifier"] == clf:
                canvas.circle(canvas.px(position[r["setting"]]), canvas.py(r["mean_rank"]), color)
    rank_of = {(r["setting"], r["classifier"]): r["mean_rank"] for r in all_rows}
    for setting, groups in tables["cliques"].items():
        for j, members in enumerate(groups):
            ranks = [rank_of[(setting, m)] for m in members]
            x = canvas.px(position[setting]) + 6 + 4 * j
            canvas.line(x, canvas.py(min(ranks)) - 2, x, canvas.py(max(ranks)) + 2, color="#222", width=2.5, cls="clique",
                        data={"setting": setting, "members": ",".join(members)})
    canvas.legend(names)
    return canvas.render()


def scatter_svg(tables, classifier, transform, l):
    index = tables["index"]
    label = setting_label(transform, l)
    canvas = Canvas(f"{classifier}: original vs {label}", (0.0, 1.0), (0.0, 1.0), "accuracy (original)", f"accuracy ({label})")
    ticks = [0.0, 0.25, 0.5, 0.75, 1.0]
    canvas.axes(ticks, ticks)
    canvas.line(canvas.px(0), canvas.py(0), canvas.px(1), canvas.py(1), color="#888", dash="4 3", cls="diagonal")
    for ds in index.datasets:
        x = index.mean(classifier, "identity", 0.0, ds)
        y = index.mean(classifier, transform, l, ds)
        if x is None or y is None:
            continue
        canvas.circle(canvas.px(x), canvas.py(y), PALETTE[0], r=4, cls="point", data={"dataset": ds, "x": repr(x), "y": repr(y)})
    return canvas.render()


def _markdown_table(rows, columns):
    if not rows:
        return "_none_\n"
    out = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for r in rows:
        out.append("| " + " | ".join(f"{r[c]:.4g}" if isinstance(r[c], float) else str(r[c]) for c in columns) + " |")
    return "\n".join(out) + "\n"


def summary_markdown(tables, results_path):
    p = tables["params"]
    parts = [
        "# Benchmark report\n",
        f"Source: `{results_path}`  \nalpha = {p['alpha']}, k_std = {p['k_std']}, Holm = {p['holm']}, pairing by {p['pair_by']}\n",
        "## Accuracy drop tests (one-sided Wilcoxon, original > transformed)\n",
        _markdown_table(tables["pvalues"], ("classifier", "setting", "n_pairs", "statistic", "p_value", "method")),
        "## Mean ranks\n",
        _markdown_table(tables["mean_ranks"], ("setting", "classifier", "mean_rank", "mean_accuracy")),
        "## No-difference cliques\n",
    ]
    for setting, groups in tables["cliques"].items():
        parts.append(f"- **{setting}**: " + "; ".join("{" + ", ".join(g) + "}" for g in groups))
    parts.append("\n## Order-removal filter verdicts\n")
    parts.append(_markdown_table(tables["filter_verdicts"], ("dataset", "classifier", "ori_mean", "per_mean", "flagged", "flagged_relaxed")))
    flagged = defaultdict(int)
    for r in tables["filter_verdicts"]:
        flagged[r["classifier"]] += int(r["flagged"])
    if flagged:
        n_ds = len({r["dataset"] for r in tables["filter_verdicts"]})
        parts.append("\nFlagged datasets per classifier: " + ", ".join(f"{c} {n}/{n_ds}" for c, n in sorted(flagged.items())) + "\n")
    if tables["warnings"]:
        parts.append("\n## Warnings\n")
        parts.extend(f"- {w['section']}: {w['detail']}" for w in tables["warnings"])
        parts.append("")
    return "\n".join(parts)


def emit_report(results_path, out_dir, alpha=0.05, k_std=1.0, holm=False, pair_by="dataset"):
    """Write tables, figures and ``summary.md`` for a results CSV into ``out_dir``."""
    records = read_results(results_path)
    if not records:
        raise ValueError(f"{results_path}: no result rows")
    tables = compute_tables(records, alpha, k_std, holm, pair_by)
    out_dir = write_stats_tables(tables, out_dir)
    (out_dir / "pvalues.svg").write_text(pvalue_svg(tables), encoding="utf-8")
    (out_dir / "mean_ranks.svg").write_text(rank_svg(tables), encoding="utf-8")
    for clf in tables["index"].classifiers:
        for transform, l in tables["index"].settings:
            if transform == "identity":
                continue
            name = f"scatter_{_slug(clf)}_{_slug(setting_label(transform, l))}.svg"
            (out_dir / name).write_text(scatter_svg(tables, clf, transform, l), encoding="utf-8")
    (out_dir / "summary.md").write_text(summary_markdown(tables, results_path), encoding="utf-8")
    return out_dir
