"""Repeated-trials experiment and its statistical validation.

One trial = one embedding (one seed) -> per-poet point clouds -> 0-th
persistence diagrams -> all pairwise bottleneck distances.  Across
trials this gives a within-subjects design (subject = trial, condition
= poet pair) analysed with one-way repeated-measures ANOVA, sphericity
corrections, and Bonferroni-adjusted pairwise comparisons.

The F and t tail probabilities are computed here via the regularized
incomplete beta function (continued-fraction evaluation) so fractional
degrees of freedom from the corrections are supported.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import ExperimentConfig
from .corpus import ProcessedCorpus
from .distance import bottleneck
from .embedding import embed_poet, train_skipgram
from .tda import distance_matrix, h0_single_linkage

__all__ = [
    "StatsError", "TrialResults", "AnovaRow", "AnovaReport",
    "PairwiseComparison", "BoxPlotSummary",
    "run_trials", "run_single_trial", "rm_anova", "sphericity_epsilon",
    "pairwise_bonferroni", "f_upper_tail", "t_upper_tail", "t_quantile",
    "boxplot_summary", "regularized_incomplete_beta",
]

log = logging.getLogger(__name__)


class StatsError(Exception):
    pass


@dataclass
class TrialResults:
    conditions: list[str]            # pair labels, e.g. "quevedo-lope"
    pairs: list[tuple[str, str]]
    values: np.ndarray               # trials x pairs
    seeds: list[int]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[1] != len(self.pairs):
            raise StatsError("values must be trials x pairs")
        if not np.isfinite(self.values).all() or (self.values < 0).any():
            raise StatsError("distances must be finite and non-negative")


@dataclass
class AnovaRow:
    label: str
    df_factor: float
    df_residual: float
    ms_factor: float
    ms_residual: float
    f: float
    p: float


@dataclass
class AnovaReport:
    ss_factor: float
    ss_subject: float
    ss_residual: float
    epsilon_gg: float
    epsilon_hf: float
    rows: list[AnovaRow]
    degenerate: bool = False

    def row(self, label: str) -> AnovaRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)


@dataclass
class PairwiseComparison:
    pair: tuple[str, str]
    mean_difference: float
    standard_error: float
    p_bonferroni: float
    ci95: tuple[float, float]
    degenerate: bool = False


@dataclass
class BoxPlotSummary:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    outliers: list[float] = field(default_factory=list)


# -- special functions -------------------------------------------------------

def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz)."""
    max_iter = 300
    eps = 3e-16
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise StatsError(f"incomplete beta did not converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not (0.0 <= x <= 1.0):
        raise StatsError(f"x out of range: {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = math.exp(math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                     + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_upper_tail(f_value: float, df1: float, df2: float) -> float:
    """P(F > f_value) for the F distribution; fractional df supported."""
    if not (math.isfinite(df1) and math.isfinite(df2)) or df1 <= 0 or df2 <= 0:
        raise StatsError(f"invalid degrees of freedom ({df1}, {df2})")
    if not math.isfinite(f_value):
        if math.isnan(f_value):
            raise StatsError("F is NaN")
        return 0.0
    if f_value < 0:
        raise StatsError(f"negative F: {f_value}")
    if f_value == 0.0:
        return 1.0
    x = df2 / (df2 + df1 * f_value)
    return regularized_incomplete_beta(x, df2 / 2.0, df1 / 2.0)


def t_upper_tail(t: float, df: float) -> float:
    """P(T > t) for Student's t."""
    if df <= 0:
        raise StatsError(f"invalid df {df}")
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    tail = regularized_incomplete_beta(x, df / 2.0, 0.5) / 2.0
    return tail if t > 0 else 1.0 - tail


def t_quantile(p: float, df: float) -> float:
    """Inverse CDF of Student's t by bisection on :func:`t_upper_tail`."""
    if not (0.0 < p < 1.0):
        raise StatsError(f"p out of range: {p}")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -t_quantile(1.0 - p, df)
    target = 1.0 - p       # upper-tail mass of the quantile
    lo, hi = 0.0, 1.0
    while t_upper_tail(hi, df) > target:
        hi *= 2.0
        if hi > 1e12:
            raise StatsError("t quantile out of range")
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if t_upper_tail(mid, df) > target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


# -- repeated-measures ANOVA -------------------------------------------------

def sphericity_epsilon(results: TrialResults | np.ndarray
                       ) -> tuple[float, float]:
    """Greenhouse-Geisser (Box) and Huynh-Feldt epsilon estimates."""
    values = results.values if isinstance(results, TrialResults) else \
        np.asarray(results, dtype=float)
    n, k = values.shape
    if k < 3:
        raise StatsError("sphericity correction needs >= 3 conditions")
    lower = 1.0 / (k - 1)
    cov = np.cov(values.T, ddof=1)
    mean_all = cov.mean()
    mean_diag = np.trace(cov) / k
    row_means = cov.mean(axis=1)
    num = (k * (mean_diag - mean_all)) ** 2
    den = (k - 1) * ((cov ** 2).sum() - 2 * k * (row_means ** 2).sum()
                     + k * k * mean_all ** 2)
    if den <= 0.0 or not math.isfinite(den):
        log.warning("singular condition covariance; "
                    "using lower-bound epsilon %g", lower)
        return lower, lower
    eps_gg = min(1.0, max(lower, num / den))
    hf_den = (k - 1) * (n - 1 - (k - 1) * eps_gg)
    if hf_den <= 0:
        eps_hf = 1.0
    else:
        eps_hf = (n * (k - 1) * eps_gg - 2.0) / hf_den
    eps_hf = min(1.0, max(eps_hf, eps_gg))
    return eps_gg, eps_hf


def rm_anova(results: TrialResults | np.ndarray) -> AnovaReport:
    """One-way within-subjects ANOVA with GG/HF-corrected p-values."""
    values = results.values if isinstance(results, TrialResults) else \
        np.asarray(results, dtype=float)
    n, k = values.shape
    if n < 2 or k < 2:
        raise StatsError("need >= 2 trials and >= 2 conditions")
    grand = values.mean()
    col_means = values.mean(axis=0)
    row_means = values.mean(axis=1)
    ss_factor = n * ((col_means - grand) ** 2).sum()
    ss_subject = k * ((row_means - grand) ** 2).sum()
    ss_total = ((values - grand) ** 2).sum()
    ss_residual = ss_total - ss_factor - ss_subject

    df1 = float(k - 1)
    df2 = float((k - 1) * (n - 1))
    ms_factor = ss_factor / df1
    ms_residual = ss_residual / df2

    degenerate = bool(ms_residual <= 0.0)
    if degenerate:
        f = math.inf if ms_factor > 0 else 0.0
    else:
        f = ms_factor / ms_residual

    if k >= 3:
        eps_gg, eps_hf = sphericity_epsilon(values)
    else:
        eps_gg = eps_hf = 1.0

    rows = []
    for label, eps in (("sphericity-assumed", 1.0),
                       ("greenhouse-geisser", eps_gg),
                       ("huynh-feldt", eps_hf)):
        d1, d2 = eps * df1, eps * df2
        if degenerate:
            p = 0.0 if ms_factor > 0 else 1.0
        else:
            p = f_upper_tail(f, d1, d2)
        rows.append(AnovaRow(label=label, df_factor=d1, df_residual=d2,
                             ms_factor=ss_factor / d1,
                             ms_residual=ss_residual / d2,
                             f=f, p=p))
    return AnovaReport(ss_factor=ss_factor, ss_subject=ss_subject,
                       ss_residual=ss_residual,
                       epsilon_gg=eps_gg, epsilon_hf=eps_hf,
                       rows=rows, degenerate=degenerate)


def pairwise_bonferroni(results: TrialResults, alpha: float = 0.05
                        ) -> list[PairwiseComparison]:
    """Paired t-tests for every condition pair, Bonferroni corrected.

    Confidence intervals use the adjusted level 1 - alpha/m for m pairs.
    """
    values = results.values
    n, k = values.shape
    if k < 2:
        raise StatsError("need >= 2 conditions")
    idx_pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    m = len(idx_pairs)
    out = []
    for i, j in idx_pairs:
        diffs = values[:, i] - values[:, j]
        mean = diffs.mean()
        sd = diffs.std(ddof=1)
        se = sd / math.sqrt(n)
        if se == 0.0:
            p = 1.0 if mean == 0.0 else 0.0
            out.append(PairwiseComparison(
                pair=(results.conditions[i], results.conditions[j]),
                mean_difference=mean, standard_error=0.0,
                p_bonferroni=p, ci95=(mean, mean), degenerate=True))
            continue
        t = mean / se
        p = min(1.0, m * 2.0 * t_upper_tail(abs(t), n - 1))
        tq = t_quantile(1.0 - (alpha / m) / 2.0, n - 1)
        out.append(PairwiseComparison(
            pair=(results.conditions[i], results.conditions[j]),
            mean_difference=mean, standard_error=se,
            p_bonferroni=p, ci95=(mean - tq * se, mean + tq * se)))
    return out


def boxplot_summary(sample) -> BoxPlotSummary:
    """Tukey box plot: type-7 quartiles, whiskers at 1.5 IQR."""
    data = np.asarray(sample, dtype=float)
    if data.size == 0:
        raise StatsError("empty sample")
    q1, med, q3 = np.percentile(data, [25, 50, 75])
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = data[(data >= lo_fence) & (data <= hi_fence)]
    outliers = sorted(data[(data < lo_fence) | (data > hi_fence)].tolist())
    return BoxPlotSummary(minimum=float(inside.min()), q1=float(q1),
                          median=float(med), q3=float(q3),
                          maximum=float(inside.max()), outliers=outliers)


# -- result files ------------------------------------------------------------

def save_trials_csv(results: TrialResults, path) -> None:
    """trials.csv: header 'trial,seed,d_<a>_<b>,...', one row per trial."""
    from pathlib import Path
    header = "trial,seed," + ",".join(f"d_{a}_{b}" for a, b in results.pairs)
    lines = [header]
    for t, row in enumerate(results.values):
        cells = ",".join(f"{v:.17g}" for v in row)
        lines.append(f"{t},{results.seeds[t]},{cells}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_trials_csv(path) -> TrialResults:
    from pathlib import Path
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise StatsError(f"{path}: empty trials file")
    cols = lines[0].split(",")
    if cols[:2] != ["trial", "seed"] or len(cols) < 3:
        raise StatsError(f"{path}:1: unexpected header")
    pairs = []
    for col in cols[2:]:
        parts = col.split("_")
        if len(parts) != 3 or parts[0] != "d":
            raise StatsError(f"{path}:1: unexpected column {col!r}")
        pairs.append((parts[1], parts[2]))
    seeds, rows = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(cols):
            raise StatsError(f"{path}:{lineno}: wrong field count")
        seeds.append(int(cells[1]))
        rows.append([float(c) for c in cells[2:]])
    return TrialResults(conditions=[f"{a}-{b}" for a, b in pairs],
                        pairs=pairs, values=np.array(rows), seeds=seeds)


def format_p(p: float) -> str:
    """Display convention for reports: tiny p-values print as '<0.001'."""
    return "<0.001" if p < 0.001 else f"{p:.4f}"


def analysis_payload(results: TrialResults) -> dict:
    """Full statistical analysis as a JSON-serializable dict."""
    report = rm_anova(results)
    comparisons = pairwise_bonferroni(results)
    return {
        "trials": len(results.seeds),
        "conditions": results.conditions,
        "anova": {
            "ss_factor": report.ss_factor,
            "ss_subject": report.ss_subject,
            "ss_residual": report.ss_residual,
            "epsilon": {"greenhouse_geisser": report.epsilon_gg,
                        "huynh_feldt": report.epsilon_hf},
            "degenerate": report.degenerate,
            "rows": [{
                "correction": r.label,
                "df_factor": r.df_factor,
                "df_residual": r.df_residual,
                "ms_factor": r.ms_factor,
                "ms_residual": r.ms_residual,
                "f": r.f,
                "p": r.p,
            } for r in report.rows],
        },
        "pairwise": [{
            "pair": list(c.pair),
            "mean_difference": c.mean_difference,
            "standard_error": c.standard_error,
            "p_bonferroni": c.p_bonferroni,
            "ci95": list(c.ci95),
            "degenerate": c.degenerate,
        } for c in comparisons],
        "boxplot": {
            cond: vars(boxplot_summary(results.values[:, i]))
            for i, cond in enumerate(results.conditions)
        },
    }


# -- the repeated experiment -------------------------------------------------

def run_single_trial(corpus: ProcessedCorpus, cfg: ExperimentConfig,
                     seed: int) -> list[float]:
    """Train one embedding and return the pairwise bottleneck distances."""
    if cfg.homology_dim != 0:
        raise StatsError("the style pipeline uses 0-th diagrams only")
    emb = train_skipgram(
        corpus, dim=cfg.dim, epochs=cfg.epochs, window=cfg.window,
        negatives=cfg.negatives, lr=(cfg.lr_start, cfg.lr_min), seed=seed)
    diagrams = {}
    for poet in corpus.poets:
        cloud = embed_poet(corpus, poet, emb)
        diagrams[poet] = h0_single_linkage(distance_matrix(cloud, cfg.metric))
    poets = corpus.poets
    return [bottleneck(diagrams[poets[i]], diagrams[poets[j]])
            for i in range(len(poets)) for j in range(i + 1, len(poets))]


def run_trials(corpus: ProcessedCorpus, cfg: ExperimentConfig,
               trials: int | None = None) -> TrialResults:
    """Run the full repeated experiment, one shared embedding per trial."""
    trials = cfg.trials if trials is None else trials
    poets = corpus.poets
    pairs = [(poets[i], poets[j])
             for i in range(len(poets)) for j in range(i + 1, len(poets))]
    seeds = [cfg.base_seed + t for t in range(trials)]

    rows: list[list[float] | None] = [None] * trials
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(run_single_trial, corpus, cfg, s)
                       for s in seeds]
            for t, fut in enumerate(futures):
                try:
                    rows[t] = fut.result()
                except Exception:
                    log.exception("trial %d (seed %d) failed", t, seeds[t])
    else:
        for t, s in enumerate(seeds):
            try:
                rows[t] = run_single_trial(corpus, cfg, s)
            except Exception:
                log.exception("trial %d (seed %d) failed", t, s)

    ok = [r for r in rows if r is not None]
    if len(ok) < trials:
        raise StatsError(
            f"only {len(ok)} of {trials} trials succeeded; "
            "failed seeds are in the log")
    return TrialResults(conditions=[f"{a}-{b}" for a, b in pairs],
                        pairs=pairs, values=np.array(ok), seeds=seeds)
