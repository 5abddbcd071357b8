"""Corpus analyses: figure densities, impact binning, binned correlations,
label-noise calibration, dismantling error, and score-conditioned bias audits.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from figmine.errors import (
    EmptyInput,
    InsufficientBins,
    InvalidConfusionMatrix,
    UndefinedMetric,
)

DENSITY_TYPES = ("diagram", "photo", "plot", "table")
TIE_THRESHOLD = 1e-12
SIGNIFICANCE_LEVEL = 0.05


@dataclass
class DensityProfile:
    paper_id: str
    density: dict
    proportion: dict | None  # None when the paper has no counted figures
    figure_count: int

    def to_dict(self):
        return {
            "paper_id": self.paper_id,
            "density": dict(self.density),
            "proportion": dict(self.proportion) if self.proportion else None,
            "figure_count": self.figure_count,
        }


def density_profile(paper, figures):
    """Per-type figures-per-page for one paper; equations are excluded."""
    counts = {t: 0 for t in DENSITY_TYPES}
    for fig in figures:
        if fig.label in counts:
            counts[fig.label] += 1
    total = sum(counts.values())
    density = {t: counts[t] / paper.page_count for t in DENSITY_TYPES}
    proportion = {t: counts[t] / total for t in DENSITY_TYPES} if total else None
    return DensityProfile(
        paper_id=paper.paper_id,
        density=density,
        proportion=proportion,
        figure_count=total,
    )


@dataclass
class ImpactBins:
    bins: list  # paper-id lists, highest-impact bin first
    boundaries: list  # cut ranks into the descending score order

    def sizes(self):
        return [len(b) for b in self.bins]


def _scored_pairs(papers):
    pairs = []
    for p in papers:
        if isinstance(p, tuple):
            pairs.append((p[0], float(p[1])))
        else:
            pairs.append((p.paper_id, float(p.alef_score)))
    return pairs


def _tie_group_starts(scores_desc, threshold):
    """Start index of each maximal run of scores closer than threshold."""
    starts = np.zeros(len(scores_desc), dtype=np.int64)
    cur = 0
    for i in range(1, len(scores_desc)):
        if scores_desc[i - 1] - scores_desc[i] >= threshold:
            cur = i
        starts[i] = cur
    return starts


def impact_bins(papers, scheme="fixed-boundaries", bin_fraction=0.005,
                bin_size=None, boundaries=(0.05, 0.25, 0.50),
                tie_threshold=TIE_THRESHOLD):
    """Partition scored papers into impact bins, best scores first.

    Schemes: fixed-boundaries (cuts at the given top-fraction marks),
    half-percentile (cuts every bin_fraction of the population), and
    fixed-count (cuts every bin_size papers). Every cut shifts upward past
    ties, so a tied group always lands whole in the lower bin.
    """
    pairs = _scored_pairs(papers)
    if not pairs:
        raise EmptyInput("no papers to bin")
    pairs.sort(key=lambda t: (-t[1], t[0]))
    scores = np.array([s for _, s in pairs])
    n = len(pairs)
    group_start = _tie_group_starts(scores, tie_threshold)

    if scheme == "fixed-boundaries":
        nominal = [int(n * q) for q in boundaries]
    elif scheme == "half-percentile":
        per = max(1, int(np.ceil(n * bin_fraction)))
        nominal = list(range(per, n, per))
    elif scheme == "fixed-count":
        if not bin_size or bin_size < 1:
            raise ValueError("fixed-count scheme requires bin_size >= 1")
        nominal = list(range(bin_size, n, bin_size))
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    cuts = []
    for c in nominal:
        if c <= 0 or c >= n:
            continue
        snapped = int(group_start[c])
        if snapped > 0 and (not cuts or snapped > cuts[-1]):
            cuts.append(snapped)
    edges = [0] + cuts + [n]
    bins = [[pairs[i][0] for i in range(edges[k], edges[k + 1])]
            for k in range(len(edges) - 1)]
    return ImpactBins(bins=bins, boundaries=cuts)


@dataclass
class CorrelationResult:
    coefficient: float
    p_value: float
    significant: bool
    n_bins: int
    spearman: float  # extra robustness readout, not part of the main method

    def to_dict(self):
        return {
            "coefficient": self.coefficient,
            "p_value": self.p_value,
            "significant": self.significant,
            "label": "NSS" if not self.significant else f"{self.coefficient:.2f}",
            "n_bins": self.n_bins,
            "spearman": self.spearman,
        }


def _pearson_with_p(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.std() == 0 or y.std() == 0:
        return 0.0, 1.0
    r, p = stats.pearsonr(x, y)
    return float(r), float(p)


def binned_correlation(papers, profiles, figure_type, target="density",
                       bin_fraction=0.005, exclude_journals=()):
    """Pearson correlation between per-bin mean figure metric and per-bin
    mean score, over half-percentile impact bins.

    exclude_journals filters papers before binning. Papers lacking the
    metric (no counted figures, for proportions) are skipped.
    """
    excluded = set(exclude_journals)
    kept = [p for p in papers if p.journal not in excluded]
    rows = []
    for p in kept:
        prof = profiles.get(p.paper_id)
        if prof is None:
            continue
        metric = prof.density if target == "density" else prof.proportion
        if metric is None:
            continue
        rows.append((p.paper_id, float(p.alef_score), metric[figure_type]))
    if not rows:
        raise EmptyInput("no usable papers after filtering")
    bins = impact_bins(
        [(pid, score) for pid, score, _ in rows],
        scheme="half-percentile",
        bin_fraction=bin_fraction,
    )
    if len(bins.bins) < 3:
        raise InsufficientBins(f"{len(bins.bins)} bins; need >= 3")
    by_id = {pid: (score, m) for pid, score, m in rows}
    mean_scores, mean_metrics = [], []
    for b in bins.bins:
        vals = [by_id[pid] for pid in b]
        mean_scores.append(np.mean([v[0] for v in vals]))
        mean_metrics.append(np.mean([v[1] for v in vals]))
    r, p = _pearson_with_p(mean_metrics, mean_scores)
    if len(bins.bins) > 2 and np.std(mean_metrics) > 0 and np.std(mean_scores) > 0:
        rho = stats.spearmanr(mean_metrics, mean_scores).statistic
    else:
        rho = 0.0
    return CorrelationResult(
        coefficient=r,
        p_value=p,
        significant=p < SIGNIFICANCE_LEVEL,
        n_bins=len(bins.bins),
        spearman=float(rho) if np.isfinite(rho) else 0.0,
    )


@dataclass
class CalibrationResult:
    trials: int
    coefficients: list
    mean: float
    stderr: float
    fail_rate: float

    def to_dict(self):
        return {
            "trials": self.trials,
            "mean": self.mean,
            "stderr": self.stderr,
            "fail_rate": self.fail_rate,
        }


def _pearson_columns(D, s):
    """Pearson r and two-sided p for each column of D against s."""
    n = D.shape[0]
    Dc = D - D.mean(axis=0)
    sc = s - s.mean()
    num = Dc.T @ sc
    den = np.sqrt((Dc * Dc).sum(axis=0) * (sc * sc).sum())
    r = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    r = np.clip(r, -1.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = r * np.sqrt((n - 2) / np.maximum(1e-300, 1.0 - r * r))
    p = 2.0 * stats.t.sf(np.abs(t), n - 2)
    p = np.where(den > 0, p, 1.0)
    return r, p


def calibration_experiment(figures, papers, confusion, trials=2000, seed=0,
                           types=DENSITY_TYPES):
    """Bound how label noise could distort the density-score correlations.

    Per trial, every figure's label is resampled from the confusion-matrix
    column of its predicted class, per-paper densities are recounted, and
    the unbinned per-paper correlation against the score is recomputed.
    Returns {figure type: CalibrationResult}.
    """
    classes = list(confusion.classes)
    counts = np.asarray(confusion.counts, dtype=np.float64)
    col_totals = counts.sum(axis=0)

    paper_list = list(papers)
    paper_index = {p.paper_id: i for i, p in enumerate(paper_list)}
    pages = np.array([p.page_count for p in paper_list], dtype=np.float64)
    score = np.array([float(p.alef_score) for p in paper_list])

    fig_paper = []
    fig_pred = []
    for f in figures:
        if f.paper_id not in paper_index or f.label not in classes:
            continue
        ci = classes.index(f.label)
        if col_totals[ci] == 0:
            raise InvalidConfusionMatrix(f"zero column for predicted class {f.label!r}")
        fig_paper.append(paper_index[f.paper_id])
        fig_pred.append(ci)
    fig_paper = np.array(fig_paper, dtype=np.int64)
    fig_pred = np.array(fig_pred, dtype=np.int64)

    type_idx = {t: classes.index(t) for t in types if t in classes}
    col_probs = {ci: counts[:, ci] / col_totals[ci] for ci in set(fig_pred.tolist())}

    rng = np.random.default_rng(seed)
    P = len(paper_list)
    coeffs = {t: [] for t in type_idx}
    for _ in range(trials):
        sampled = np.empty(len(fig_pred), dtype=np.int64)
        for ci, probs in col_probs.items():
            mask = fig_pred == ci
            sampled[mask] = rng.choice(len(classes), size=int(mask.sum()), p=probs)
        D = np.zeros((P, len(type_idx)))
        for j, (t, ti) in enumerate(type_idx.items()):
            hits = sampled == ti
            np.add.at(D[:, j], fig_paper[hits], 1.0)
        D /= pages[:, None]
        r, p = _pearson_columns(D, score)
        for j, t in enumerate(type_idx):
            coeffs[t].append((float(r[j]), float(p[j])))

    out = {}
    for t, pairs in coeffs.items():
        cs = np.array([c for c, _ in pairs])
        ps = np.array([pv for _, pv in pairs])
        if trials > 1 and not np.all(cs == cs[0]):
            std = float(cs.std(ddof=1))
        else:
            std = 0.0  # constant sample: exactly zero, skip ulp noise from the mean
        out[t] = CalibrationResult(
            trials=trials,
            coefficients=cs.tolist(),
            mean=float(cs.mean()),
            stderr=std / np.sqrt(trials),
            fail_rate=float((ps >= SIGNIFICANCE_LEVEL).mean()),
        )
    return out


def dismantling_error(correct_counts, extracted_counts):
    """Sum of per-category absolute count differences over the total correct
    count; missing categories count as zero."""
    keys = set(correct_counts) | set(extracted_counts)
    total_correct = sum(abs(v) for v in correct_counts.values())
    if total_correct == 0:
        raise UndefinedMetric("no correct sub-figures; error undefined")
    diff = sum(
        abs(correct_counts.get(k, 0) - extracted_counts.get(k, 0)) for k in keys
    )
    return diff / total_correct


@dataclass
class BiasAudit:
    bin_precisions: list
    bin_mean_scores: list
    bin_sizes: list
    correlation: float
    p_value: float
    significant: bool
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return {
            "bin_precisions": list(self.bin_precisions),
            "bin_mean_scores": list(self.bin_mean_scores),
            "bin_sizes": list(self.bin_sizes),
            "correlation": self.correlation,
            "p_value": self.p_value,
            "significant": self.significant,
            "warnings": list(self.warnings),
        }


def bias_audit(samples, percentile=0.01, min_per_bin=8):
    """Classifier precision across score-percentile bins.

    samples: (true_label, predicted_label, score) triples. Adjacent bins
    merge until each holds at least min_per_bin figures; reports per-bin
    precision, per-bin mean score, and their correlation.
    """
    samples = sorted(samples, key=lambda s: s[2])
    if not samples:
        raise EmptyInput("no samples")
    n = len(samples)
    per = max(1, int(np.ceil(n * percentile)))
    bins = [samples[i : i + per] for i in range(0, n, per)]
    notes = []
    merged = []
    for b in bins:
        if merged and len(merged[-1]) < min_per_bin:
            merged[-1] = merged[-1] + b
        else:
            merged.append(b)
    if merged and len(merged[-1]) < min_per_bin and len(merged) > 1:
        merged[-2] = merged[-2] + merged[-1]
        merged.pop()
    if len(merged) != len(bins):
        notes.append(
            f"widened {len(bins)} bins to {len(merged)} to reach {min_per_bin} per bin"
        )
        warnings.warn(notes[-1])
    precisions = [float(np.mean([t == p for t, p, _ in b])) for b in merged]
    mean_scores = [float(np.mean([s for _, _, s in b])) for b in merged]
    r, p = _pearson_with_p(precisions, mean_scores)
    return BiasAudit(
        bin_precisions=precisions,
        bin_mean_scores=mean_scores,
        bin_sizes=[len(b) for b in merged],
        correlation=r,
        p_value=p,
        significant=p < SIGNIFICANCE_LEVEL,
        warnings=notes,
    )
