"""Special functions, repeated-measures ANOVA, pairwise tests, trials."""

import math

import numpy as np
import pytest
from scipy import special
from scipy import stats as sps

from philotope.config import ExperimentConfig
from philotope.stats import (StatsError, TrialResults, boxplot_summary,
                             f_upper_tail, format_p, load_trials_csv,
                             pairwise_bonferroni, regularized_incomplete_beta,
                             rm_anova, run_single_trial, run_trials,
                             save_trials_csv, sphericity_epsilon, t_quantile,
                             t_upper_tail)

# Fixed 6-trial, 3-condition dataset used for the frozen oracles below.
FIXED = np.array([
    [0.60, 0.90, 0.85],
    [0.62, 0.93, 0.88],
    [0.59, 0.88, 0.90],
    [0.64, 0.95, 0.84],
    [0.61, 0.91, 0.87],
    [0.63, 0.89, 0.86],
])

# [DERIVED] frozen oracle values for FIXED, computed independently of the
# library: sums of squares from the definitional formulas, epsilon via the
# eigenvalues of the double-centered condition covariance, p-values via
# scipy.stats (f.sf / ttest_rel / t.ppf).
ORACLE = {
    "ss_factor": 0.3044777777777779,
    "ss_subject": 0.0017611111111111096,
    "ss_residual": 0.0057222222222221217,
    "f": 266.04854368932519,
    "p": 2.1360658192984223e-09,
    "eps_gg": 0.6558838512480899,
    "eps_hf": 0.79585635359116069,
    "p_gg": 9.6672027454538827e-07,
    "p_hf": 7.9812804206431371e-08,
    "pairwise": {
        (0, 1): (-0.29499999999999998, 0.0076376261582597332,
                 6.5764729153561142e-07),
        (0, 2): (-0.25166666666666665, 0.014925742118158756,
                 4.0248259383767399e-05),
        (1, 2): (0.043333333333333356, 0.017061978522759636,
                 0.15572689790641905),
    },
    "t_quantile_ci": 3.5341107040585311,   # t.ppf(1 - (0.05/3)/2, df=5)
}


def make_results(values) -> TrialResults:
    values = np.asarray(values, dtype=float)
    k = values.shape[1]
    pairs = [(f"c{i}", f"c{j}") for i in range(k) for j in range(i + 1, k)]
    pairs = pairs[:k]  # unused labels beyond k are irrelevant
    conds = [f"cond{i}" for i in range(k)]
    return TrialResults(conditions=conds,
                        pairs=[(c, c) for c in conds],
                        values=values,
                        seeds=list(range(len(values))))


# -- special functions -------------------------------------------------------

def test_incomplete_beta_against_scipy():
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = float(rng.uniform(0.1, 20))
        b = float(rng.uniform(0.1, 20))
        x = float(rng.random())
        assert regularized_incomplete_beta(x, a, b) == \
            pytest.approx(special.betainc(a, b, x), abs=1e-12)
    assert regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0
    assert regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0


def test_f_upper_tail_closed_form_df1_2():
    # [DERIVED] for df1 = 2: P(F > f) = (1 + 2 f / df2) ** (-df2 / 2)
    for df2 in (1.0, 2.5, 5.0, 10.0, 40.0, 111.452):
        for f in (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 51.42):
            want = (1.0 + 2.0 * f / df2) ** (-df2 / 2.0)
            assert f_upper_tail(f, 2.0, df2) == pytest.approx(want, abs=1e-10)


def test_f_upper_tail_against_scipy():
    rng = np.random.default_rng(1)
    for _ in range(100):
        df1 = float(rng.uniform(0.5, 20))
        df2 = float(rng.uniform(0.5, 200))
        f = float(rng.uniform(0, 30))
        assert f_upper_tail(f, df1, df2) == \
            pytest.approx(sps.f.sf(f, df1, df2), rel=1e-10, abs=1e-13)


def test_f_upper_tail_edge_cases():
    assert f_upper_tail(0.0, 3, 10) == 1.0
    assert f_upper_tail(math.inf, 3, 10) == 0.0
    with pytest.raises(StatsError):
        f_upper_tail(1.0, 0.0, 10)
    with pytest.raises(StatsError):
        f_upper_tail(-1.0, 3, 10)
    with pytest.raises(StatsError):
        f_upper_tail(math.nan, 3, 10)


def test_t_upper_tail_against_scipy():
    rng = np.random.default_rng(2)
    for _ in range(100):
        df = float(rng.uniform(0.5, 100))
        t = float(rng.uniform(-8, 8))
        assert t_upper_tail(t, df) == \
            pytest.approx(sps.t.sf(t, df), rel=1e-9, abs=1e-13)


def test_t_quantile_inverts_tail():
    for df in (1.0, 5.0, 30.0):
        for p in (0.6, 0.9, 0.975, 0.995):
            q = t_quantile(p, df)
            assert t_upper_tail(q, df) == pytest.approx(1.0 - p, abs=1e-10)
            assert t_quantile(1.0 - p, df) == pytest.approx(-q, abs=1e-10)
    assert t_quantile(0.5, 7) == 0.0


def test_t_quantile_matches_frozen_ci_multiplier():
    assert t_quantile(1.0 - (0.05 / 3) / 2.0, 5) == \
        pytest.approx(ORACLE["t_quantile_ci"], abs=1e-9)


# -- sphericity epsilon ------------------------------------------------------

def eps_gg_eigen_oracle(values):
    """[DERIVED] Box's epsilon from the eigenvalues of the double-centered
    covariance matrix (an algebraically independent route)."""
    n, k = values.shape
    S = np.cov(values.T, ddof=1)
    C = np.eye(k) - np.ones((k, k)) / k
    lam = np.linalg.eigvalsh(C @ S @ C)
    return lam.sum() ** 2 / ((k - 1) * (lam ** 2).sum())


def test_epsilon_matches_frozen_oracle():
    gg, hf = sphericity_epsilon(FIXED)
    assert gg == pytest.approx(ORACLE["eps_gg"], abs=1e-10)
    assert hf == pytest.approx(ORACLE["eps_hf"], abs=1e-10)


def test_epsilon_matches_eigen_oracle_randomly():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(4, 20))
        k = int(rng.integers(3, 6))
        vals = rng.random((n, k)) + rng.random(k)  # unequal variances
        gg, hf = sphericity_epsilon(vals)
        want = eps_gg_eigen_oracle(vals)
        want = min(1.0, max(1.0 / (k - 1), want))
        assert gg == pytest.approx(want, abs=1e-10)
        assert 1.0 / (k - 1) <= gg <= hf <= 1.0


def test_epsilon_is_one_under_sphericity():
    # iid conditions satisfy sphericity on average; a compound-symmetric
    # construction gives epsilon close to its upper bound
    rng = np.random.default_rng(4)
    base = rng.normal(size=(400, 1))
    vals = base + rng.normal(scale=1.0, size=(400, 4))
    gg, hf = sphericity_epsilon(vals)
    assert gg > 0.9
    assert gg <= hf <= 1.0 and hf > 0.95


def test_epsilon_singular_covariance_lower_bound(caplog):
    vals = np.tile(np.array([[0.1, 0.2, 0.3]]), (5, 1))  # zero variance
    gg, hf = sphericity_epsilon(vals)
    assert gg == hf == 0.5  # 1 / (k - 1)


def test_epsilon_needs_three_conditions():
    with pytest.raises(StatsError):
        sphericity_epsilon(np.random.default_rng(0).random((5, 2)))


# -- rm_anova ----------------------------------------------------------------

def test_rm_anova_matches_frozen_oracle():
    report = rm_anova(FIXED)
    assert report.ss_factor == pytest.approx(ORACLE["ss_factor"], abs=1e-10)
    assert report.ss_subject == pytest.approx(ORACLE["ss_subject"], abs=1e-10)
    assert report.ss_residual == pytest.approx(ORACLE["ss_residual"],
                                               abs=1e-10)
    assert report.epsilon_gg == pytest.approx(ORACLE["eps_gg"], abs=1e-10)
    assert report.epsilon_hf == pytest.approx(ORACLE["eps_hf"], abs=1e-10)

    sphericity = report.row("sphericity-assumed")
    assert sphericity.f == pytest.approx(ORACLE["f"], abs=1e-8)
    assert sphericity.p == pytest.approx(ORACLE["p"], rel=1e-8)
    assert (sphericity.df_factor, sphericity.df_residual) == (2.0, 10.0)

    gg = report.row("greenhouse-geisser")
    assert gg.p == pytest.approx(ORACLE["p_gg"], rel=1e-8)
    assert gg.df_factor == pytest.approx(2 * ORACLE["eps_gg"], abs=1e-10)
    hf = report.row("huynh-feldt")
    assert hf.p == pytest.approx(ORACLE["p_hf"], rel=1e-8)


def test_rm_anova_definitional_identity():
    # SS decomposition: factor + subject + residual = total
    rng = np.random.default_rng(5)
    vals = rng.random((10, 4))
    report = rm_anova(vals)
    total = ((vals - vals.mean()) ** 2).sum()
    assert report.ss_factor + report.ss_subject + report.ss_residual == \
        pytest.approx(total, abs=1e-10)


def test_rm_anova_shift_invariance():
    # adding a constant, or a per-subject constant, leaves F unchanged
    rng = np.random.default_rng(6)
    vals = rng.random((8, 3))
    f0 = rm_anova(vals).row("sphericity-assumed").f
    assert rm_anova(vals + 5.0).row("sphericity-assumed").f == \
        pytest.approx(f0, rel=1e-10)
    shifted = vals + rng.random((8, 1))
    assert rm_anova(shifted).row("sphericity-assumed").f == \
        pytest.approx(f0, rel=1e-10)


def test_rm_anova_scale_invariance():
    rng = np.random.default_rng(7)
    vals = rng.random((8, 3))
    f0 = rm_anova(vals).row("sphericity-assumed").f
    assert rm_anova(vals * 3.0).row("sphericity-assumed").f == \
        pytest.approx(f0, rel=1e-10)


def test_rm_anova_degenerate():
    # exactly representable values so the residual cancels to exactly zero
    vals = np.tile(np.array([[0.0, 1.0, 2.0]]), (5, 1))
    report = rm_anova(vals)
    assert report.degenerate
    assert math.isinf(report.row("sphericity-assumed").f)
    assert report.row("sphericity-assumed").p == 0.0


def test_rm_anova_needs_data():
    with pytest.raises(StatsError):
        rm_anova(np.zeros((1, 3)))


# -- pairwise ----------------------------------------------------------------

def test_pairwise_matches_frozen_oracle():
    res = make_results(FIXED)
    comps = pairwise_bonferroni(res)
    assert len(comps) == 3
    for comp, (i, j) in zip(comps, [(0, 1), (0, 2), (1, 2)]):
        mean, se, p = ORACLE["pairwise"][(i, j)]
        assert comp.mean_difference == pytest.approx(mean, abs=1e-12)
        assert comp.standard_error == pytest.approx(se, abs=1e-12)
        assert comp.p_bonferroni == pytest.approx(p, rel=1e-8)
        lo, hi = comp.ci95
        tq = ORACLE["t_quantile_ci"]
        assert lo == pytest.approx(mean - tq * se, abs=1e-9)
        assert hi == pytest.approx(mean + tq * se, abs=1e-9)


def test_pairwise_degenerate_zero_variance():
    vals = np.tile(np.array([[0.1, 0.1, 0.4]]), (5, 1))
    comps = pairwise_bonferroni(make_results(vals))
    assert comps[0].degenerate and comps[0].p_bonferroni == 1.0
    assert comps[1].degenerate and comps[1].p_bonferroni == 0.0


# -- box plot summary --------------------------------------------------------

def test_boxplot_summary_against_numpy():
    rng = np.random.default_rng(8)
    data = rng.normal(size=200)
    s = boxplot_summary(data)
    q1, med, q3 = np.percentile(data, [25, 50, 75])
    assert (s.q1, s.median, s.q3) == (q1, med, q3)
    iqr = q3 - q1
    inside = data[(data >= q1 - 1.5 * iqr) & (data <= q3 + 1.5 * iqr)]
    assert s.minimum == inside.min() and s.maximum == inside.max()
    assert sorted(s.outliers) == sorted(
        data[(data < q1 - 1.5 * iqr) | (data > q3 + 1.5 * iqr)].tolist())


def test_boxplot_summary_empty():
    with pytest.raises(StatsError):
        boxplot_summary([])


# -- trials file + format_p --------------------------------------------------

def test_trials_csv_round_trip(tmp_path):
    res = TrialResults(conditions=["a-b", "a-c", "b-c"],
                       pairs=[("a", "b"), ("a", "c"), ("b", "c")],
                       values=FIXED,
                       seeds=list(range(10, 16)))
    path = tmp_path / "trials.csv"
    save_trials_csv(res, path)
    again = load_trials_csv(path)
    assert again.pairs == res.pairs
    assert again.seeds == res.seeds
    np.testing.assert_array_equal(again.values, res.values)


def test_trials_csv_parse_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("nope\n", encoding="utf-8")
    with pytest.raises(StatsError, match="header"):
        load_trials_csv(path)
    path.write_text("trial,seed,d_a_b\n0,1\n", encoding="utf-8")
    with pytest.raises(StatsError, match="field count"):
        load_trials_csv(path)


def test_results_validation():
    with pytest.raises(StatsError, match="finite"):
        TrialResults(conditions=["a-b"], pairs=[("a", "b")],
                     values=np.array([[math.nan]]), seeds=[0])
    with pytest.raises(StatsError, match="finite"):
        TrialResults(conditions=["a-b"], pairs=[("a", "b")],
                     values=np.array([[-0.1]]), seeds=[0])


def test_format_p():
    assert format_p(0.0005) == "<0.001"
    assert format_p(0.0234) == "0.0234"


# -- the repeated experiment -------------------------------------------------

SMALL_CFG = dict(corpus_root="unused", sonnets_per_poet=5, dim=12, epochs=15,
                 window=5, trials=3, base_seed=2)


def test_run_single_trial(processed):
    cfg = ExperimentConfig(**SMALL_CFG)
    row = run_single_trial(processed, cfg, seed=2)
    assert len(row) == 3                     # three poet pairs
    assert all(v >= 0.0 and math.isfinite(v) for v in row)
    # deterministic per seed
    assert run_single_trial(processed, cfg, seed=2) == row


def test_run_single_trial_rejects_higher_homology(processed):
    cfg = ExperimentConfig(homology_dim=1, **SMALL_CFG)
    with pytest.raises(StatsError, match="0-th"):
        run_single_trial(processed, cfg, seed=0)


def test_run_trials_deterministic(processed):
    cfg = ExperimentConfig(**SMALL_CFG)
    a = run_trials(processed, cfg)
    b = run_trials(processed, cfg)
    assert a.seeds == [2, 3, 4]
    assert a.conditions == ["quevedo-lope", "quevedo-gongora",
                            "lope-gongora"]
    np.testing.assert_array_equal(a.values, b.values)
    # each row is the matching single-trial result
    for t, seed in enumerate(a.seeds):
        assert run_single_trial(processed, cfg, seed) == a.values[t].tolist()
