"""Filtering rule, Wilcoxon signed-rank tests, mean ranks and no-difference cliques."""

import math
from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import numpy as np
from scipy.stats import rankdata

__all__ = [
    "WilcoxonResult",
    "temporal_filter_rule",
    "wilcoxon_signed_rank",
    "signed_rank_null_distribution",
    "mean_ranks",
    "rank_table",
    "pairwise_pvalues",
    "holm_adjust",
    "significance_cliques",
    "EXACT_MAX_N",
]

EXACT_MAX_N = 20


def temporal_filter_rule(ori_runs, per_runs, k_std=1.0) -> bool:
    """True when order removal did not hurt.

    Flags when the permuted mean is at least the original mean, or the gap
    is within ``k_std`` times the summed sample standard deviations
    (divisor ``R - 1``).
    """
    ori = np.asarray(ori_runs, dtype=np.float64)
    per = np.asarray(per_runs, dtype=np.float64)
    if ori.ndim != 1 or per.ndim != 1 or min(ori.size, per.size) < 2:
        raise ValueError("both run lists need at least two accuracies")
    ori_mean, per_mean = ori.mean(), per.mean()
    if per_mean >= ori_mean:
        return True
    return bool(abs(ori_mean - per_mean) <= k_std * (ori.std(ddof=1) + per.std(ddof=1)))


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    p_value: float
    n_effective: int
    method: str
    degenerate: bool = False


def signed_rank_null_distribution(ranks):
    """All ``2**n`` positive-rank sums for the given ranks.

    Ranks are doubled so half-integer averages stay exact; the returned
    integers are therefore ``2 * W+``.
    """
    doubled = np.rint(2 * np.asarray(ranks, dtype=np.float64)).astype(np.int64)
    sums = np.zeros(1, dtype=np.int64)
    for r in doubled:
        sums = np.concatenate((sums, sums + r))
    return sums


def _exact_tails(ranks, w2):
    sums = signed_rank_null_distribution(ranks)
    total = float(sums.size)
    return np.count_nonzero(sums >= w2) / total, np.count_nonzero(sums <= w2) / total


def _normal_tails(w, n, tie_term):
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
    sd = math.sqrt(var)
    upper = 0.5 * math.erfc((w - mean - 0.5) / sd / math.sqrt(2.0))
    lower = 0.5 * math.erfc(-(w - mean + 0.5) / sd / math.sqrt(2.0))
    return upper, lower


def wilcoxon_signed_rank(a, b, alternative="a_greater", method="auto") -> WilcoxonResult:
    """Paired signed-rank test of ``a - b``.

    Zero differences are dropped.  ``alternative="a_greater"`` gives
    ``P(W+ >= observed)``; ``"two_sided"`` doubles the smaller tail.  The
    exact null (full sign enumeration over the observed ranks, average
    ranks for ties) is used for up to 20 non-zero differences unless
    ``method="approx"``; beyond that a tie-corrected normal approximation
    with continuity correction is used.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or a.shape != b.shape:
        raise ValueError("paired samples must be 1-D and of equal length")
    if a.size == 0:
        raise ValueError("paired samples are empty")
    if alternative not in ("a_greater", "two_sided"):
        raise ValueError(f"unknown alternative {alternative!r}")
    if method not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown method {method!r}")
    d = a - b
    d = d[d != 0]
    n = d.size
    if n == 0:
        return WilcoxonResult(0.0, 1.0, 0, "exact", degenerate=True)
    ranks = rankdata(np.abs(d), method="average")
    w = float(ranks[d > 0].sum())
    use_exact = method == "exact" or (method == "auto" and n <= EXACT_MAX_N)
    if use_exact:
        upper, lower = _exact_tails(ranks, int(round(2 * w)))
    else:
        _, counts = np.unique(ranks, return_counts=True)
        upper, lower = _normal_tails(w, n, float(np.sum(counts ** 3 - counts)))
    p = upper if alternative == "a_greater" else 2.0 * min(upper, lower)
    return WilcoxonResult(w, min(1.0, p), n, "exact" if use_exact else "normal_approx")


def rank_table(scores):
    """Per-column ranks of a ``(n_classifiers, n_datasets)`` score array.

    Rank 1 is the highest score; ties share the average rank.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[0] < 2 or scores.shape[1] < 1:
        raise ValueError("need a 2-D table with >= 2 classifiers and >= 1 dataset")
    if not np.all(np.isfinite(scores)):
        raise ValueError("score table has missing cells")
    return np.column_stack([rankdata(-col, method="average") for col in scores.T])


def mean_ranks(scores):
    return rank_table(scores).mean(axis=1)


def pairwise_pvalues(scores, alternative="two_sided"):
    """Symmetric matrix of pairwise Wilcoxon p-values between table rows."""
    scores = np.asarray(scores, dtype=np.float64)
    k = scores.shape[0]
    p = np.ones((k, k))
    for i, j in combinations(range(k), 2):
        p[i, j] = p[j, i] = wilcoxon_signed_rank(scores[i], scores[j], alternative).p_value
    return p


def holm_adjust(pvalues):
    """Holm step-down adjustment of a flat list of p-values."""
    p = np.asarray(pvalues, dtype=np.float64)
    order = np.argsort(p, kind="stable")
    m = p.size
    adjusted = np.empty(m)
    running = 0.0
    for rank, idx in enumerate(order):
        running = max(running, min(1.0, (m - rank) * p[idx]))
        adjusted[idx] = running
    return adjusted


def significance_cliques(scores, names=None, alpha=0.05, holm=False):
    """Maximal groups of classifiers with no pairwise significant difference.

    Pairs are joined when their two-sided Wilcoxon p-value is ``>= alpha``
    (uncorrected unless ``holm``).  Groups are listed by the best mean rank
    among their members, members by mean rank.
    """
    scores = np.asarray(scores, dtype=np.float64)
    k = scores.shape[0]
    names = list(names) if names is not None else [str(i) for i in range(k)]
    ranks = mean_ranks(scores)
    p = pairwise_pvalues(scores)
    pairs = list(combinations(range(k), 2))
    if holm and pairs:
        adjusted = holm_adjust([p[i, j] for i, j in pairs])
        for (i, j), q in zip(pairs, adjusted):
            p[i, j] = p[j, i] = q
    graph = nx.Graph()
    graph.add_nodes_from(range(k))
    graph.add_edges_from((i, j) for i, j in pairs if p[i, j] >= alpha)
    groups = [sorted(c, key=lambda i: (ranks[i], i)) for c in nx.find_cliques(graph)]
    groups.sort(key=lambda g: (ranks[g[0]], -len(g), [ranks[i] for i in g], g))
    return [[names[i] for i in g] for g in groups]
