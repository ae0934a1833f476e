import math

import numpy as np
import pytest

from extremal_lcs import ModelParams, estimate_gamma, fit_models, growth_sweep, run_trial
from extremal_lcs.experiments import (
    CSV_HEADER,
    ModelSpec,
    records_from_csv,
    records_to_csv,
    summarize,
    table1,
    trial_metrics,
    write_atomic,
)
from extremal_lcs.models import four_letter_model

PRESET = ModelSpec.related("paper-sec7")


def test_fit_models_exact_data():
    ns = np.array([250, 500, 1000, 2000, 4000])
    fit = fit_models(np.column_stack([ns, 2 * np.log(ns)]))
    assert fit["log_fit"]["c"] == pytest.approx(2)
    assert fit["log_fit"]["r2"] == pytest.approx(1)
    assert fit["linear_fit"]["r2"] < 1
    fit = fit_models(np.column_stack([ns, 3 * ns]))
    assert fit["linear_fit"] == pytest.approx({"c": 3, "r2": 1})
    with pytest.raises(ValueError):
        fit_models([(100, 1.0)])


def test_fit_models_against_lstsq():
    rng = np.random.default_rng(0)
    ns = np.array([100.0, 300, 900, 2700])
    y = rng.random(4) * 10
    fit = fit_models(np.column_stack([ns, y]))
    c, *_ = np.linalg.lstsq(np.log(ns)[:, None], y, rcond=None)
    assert fit["log_fit"]["c"] == pytest.approx(c[0])
    resid = y - c[0] * np.log(ns)
    assert fit["log_fit"]["r2"] == pytest.approx(1 - resid @ resid / np.sum((y - y.mean()) ** 2))


def test_run_trial_deterministic_and_consistent():
    a = run_trial(PRESET, 600, base_seed=5, trial_index=3)
    b = run_trial(PRESET, 600, base_seed=5, trial_index=3)
    assert a == b
    assert a.n_x == a.n_y == 600 and a.related_pairs > 0
    assert a.haus_restricted <= a.haus_max
    assert a.haus_max <= a.haus_l2 <= math.sqrt(2) * a.haus_max + 1e-12
    assert 0 <= a.stretch <= 600
    assert a.alpha == pytest.approx(math.sqrt(16 * math.log(600) / (0.95 * 600)))


def test_independent_trials_record_no_related_pairs():
    r = run_trial(ModelSpec.independent(4), 300, base_seed=1, trial_index=0, alpha_policy="off")
    assert r.related_pairs == -1 and math.isnan(r.alpha) and math.isnan(r.haus_restricted)
    r = run_trial(ModelSpec.independent(4), 300, base_seed=1, trial_index=0, alpha_policy=0.2)
    assert r.alpha == 0.2 and r.haus_restricted <= r.haus_max


def test_identity_model_gives_zero_distances():
    spec = ModelSpec.related(ModelParams(4, np.full(4, 0.25), np.eye(4), 1.0))
    r = run_trial(spec, 400, base_seed=2)
    assert r.L_n == 400
    assert r.haus_max == r.haus_l2 == r.vert == r.horiz == r.stretch == 0.0


def test_trial_metrics_without_common_letters():
    m = trial_metrics(np.zeros(5, np.int64), np.ones(5, np.int64), 0.5)
    assert m["L_n"] == 0
    assert all(math.isnan(m[k]) for k in ("haus_max", "vert", "horiz", "stretch", "haus_restricted"))


def test_csv_round_trip(tmp_path):
    _, recs = growth_sweep(PRESET, [100, 200], trials=3, base_seed=7)
    text = records_to_csv(recs)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    back = records_from_csv(text)
    assert records_to_csv(back) == text
    path = tmp_path / "out.csv"
    write_atomic(path, text)
    assert path.read_text() == text
    assert not (tmp_path / "out.csv.partial").exists()


def test_csv_marks_nan_as_empty():
    r = run_trial(PRESET, 50, alpha_policy="off")
    row = dict(zip(CSV_HEADER, r.csv_row()))
    assert row["alpha"] == "" and row["haus_restricted"] == ""


def test_parallel_sweep_matches_serial():
    ns = [100, 300]
    _, serial = growth_sweep(PRESET, ns, trials=6, base_seed=11, jobs=1)
    _, parallel = growth_sweep(PRESET, ns, trials=6, base_seed=11, jobs=3)
    assert records_to_csv(serial) == records_to_csv(parallel)
    assert [(r.n, r.trial) for r in serial] == [(n, t) for n in ns for t in range(6)]


def test_summary_with_single_trial():
    summary, recs = growth_sweep(PRESET, [100, 200], trials=1)
    assert all(row[s]["std"] is None for row in summary.per_n for s in ("L_n", "haus_max"))
    assert summary.per_n[0]["L_n"]["mean"] == recs[0].L_n
    assert '"std": null' in summary.to_json()


def test_summary_statistics():
    _, recs = growth_sweep(PRESET, [200, 400], trials=5, base_seed=3)
    s = summarize(recs)
    vals = [r.haus_max for r in recs if r.n == 400]
    row = s.per_n[1]
    assert row["haus_max"]["mean"] == pytest.approx(np.mean(vals))
    assert row["haus_max"]["std"] == pytest.approx(np.std(vals, ddof=1))
    assert set(s.fits) >= {"haus_max", "haus_restricted", "vert"}


def test_sweep_validation():
    with pytest.raises(ValueError):
        growth_sweep(PRESET, [5000], trials=1)
    with pytest.raises(ValueError):
        growth_sweep(PRESET, [200, 100], trials=1)
    with pytest.raises(ValueError):
        growth_sweep(PRESET, [100], trials=0)


def test_estimate_gamma_basics():
    est = estimate_gamma(ModelSpec.independent(2), 400, trials=10, base_seed=1)
    assert est.trials == 10 and len(est.samples) == 10
    assert 0.75 < est.mean < 0.87 and est.std_error > 0
    half = estimate_gamma(ModelSpec.independent(2), 400, length_ratio=0.5, trials=10, base_seed=1)
    assert half.mean < est.mean
    with pytest.raises(ValueError):
        estimate_gamma(ModelSpec.related("paper-sec7", random_length=True), 100, length_ratio=2, trials=2)


def test_table1_rows():
    rows = table1([2, 4], n=200, trials=4)
    assert [r.K for r in rows] == [2, 4]
    assert rows[0].upper == pytest.approx(0.866595, abs=1e-6)
    assert rows[0].gamma_hat > rows[1].gamma_hat
    assert table1([3], estimate=False)[0].gamma_hat is None


def test_gamma_monotone_in_relatedness():
    diagonals = [0.25, 0.4, 0.55, 0.7, 0.9]
    ests = [estimate_gamma(ModelSpec.related(four_letter_model(d)), 1000, trials=30, base_seed=21, jobs=2)
            for d in diagonals]
    for a, b in zip(ests, ests[1:]):
        assert b.mean >= a.mean - 3 * math.hypot(a.std_error, b.std_error)
    assert ests[-1].mean > ests[0].mean


@pytest.mark.slow
def test_restricted_hausdorff_percentile_shape():
    ns = [250, 500, 1000, 2000, 4000]
    _, recs = growth_sweep(PRESET, ns, trials=30, base_seed=1729, jobs=4)
    p95 = np.array([np.percentile([r.haus_restricted for r in recs if r.n == n], 95) for n in ns])
    # grows more slowly than 0.01 n between consecutive sizes
    assert np.all(np.diff(p95) < 0.01 * np.diff(ns))
    # and stays below C ln n with a fitted C under 5
    c = fit_models(np.column_stack([ns, p95]))["log_fit"]["c"]
    assert c < 5
    assert np.all(p95 <= 5 * np.log(ns))
