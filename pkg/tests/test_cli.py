import json
import subprocess
import sys

import numpy as np
import pytest

from extremal_lcs import ModelParams, chvatal_sankoff_bounds, gen_related_fixed
from extremal_lcs.alignment import Sequence
from extremal_lcs.cli import main
from extremal_lcs.experiments import DEFAULT_SEED, ModelSpec, growth_sweep, records_to_csv, trial_metrics
from extremal_lcs.metrics import default_alpha, restricted_hausdorff
from extremal_lcs.models import PRESETS


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def align(tmp_path, capsys, x, y, *extra):
    code = main(["align", write(tmp_path, "x.txt", x), write(tmp_path, "y.txt", y), *extra])
    out = capsys.readouterr().out
    return code, (json.loads(out) if code == 0 else None)


# ---------------------------------------------------------------- align

def test_align_worked_example(tmp_path, capsys):
    code, rep = align(tmp_path, capsys, "ATACCGT\n", "CAACATG\n")
    assert code == 0
    assert rep["L"] == 4
    assert rep["highest"] == [[1, 2], [3, 3], [4, 4], [6, 7]]
    assert rep["lowest"] == [[1, 2], [3, 3], [5, 4], [7, 6]]
    assert rep["hausdorff"] == 1.0 and rep["max_vertical"] == 2.0 and rep["stretch"] == 4.0


def test_align_printed_example(tmp_path, capsys):
    code, rep = align(tmp_path, capsys, "ATAGCGT", "CAACATG")
    assert code == 0 and rep["L"] == 4
    assert rep["highest"] == [[1, 2], [3, 3], [5, 4], [6, 7]]


def test_align_matches_library(tmp_path, capsys):
    rng = np.random.default_rng(4)
    x = "".join("ACGT"[c] for c in rng.integers(0, 4, 300))
    y = "".join("ACGT"[c] for c in rng.integers(0, 4, 300))
    code, rep = align(tmp_path, capsys, x, y, "--alphabet", "ACGT", "--keep-prob", "0.95",
                      "--out", str(tmp_path / "rep.json"))
    assert code == 0
    sx, sy = Sequence.from_text(x, "ACGT"), Sequence.from_text(y, "ACGT")
    alpha = default_alpha(300, 0.95).value
    m = trial_metrics(sx.symbols, sy.symbols, alpha)
    assert rep["L"] == m["L_n"] and rep["highest"] == m["highest"].tolist()
    assert rep["hausdorff_l2"] == m["haus_l2"] and rep["max_horizontal"] == m["horiz"]
    assert rep["restricted_hausdorff"] == restricted_hausdorff(m["highest"], m["lowest"], 300, alpha)
    assert json.loads((tmp_path / "rep.json").read_text()) == rep


def test_align_identical_and_empty(tmp_path, capsys):
    code, rep = align(tmp_path, capsys, "GATTACA", "GATTACA")
    assert code == 0
    assert rep["hausdorff"] == rep["max_vertical"] == rep["max_horizontal"] == rep["stretch"] == 0.0
    code, rep = align(tmp_path, capsys, "", "ACGT")
    assert code == 0 and rep["L"] == 0 and rep["highest"] == [] and rep["lowest"] == []
    assert rep["hausdorff"] is None and rep["stretch"] is None


def test_align_l2_norm(tmp_path, capsys):
    _, rep = align(tmp_path, capsys, "ATACCGT", "CAACATG", "--norm", "l2", "--alpha", "fixed:0.1")
    assert rep["hausdorff"] == pytest.approx(2 ** 0.5)
    assert rep["restricted_hausdorff"] == pytest.approx(2 ** 0.5) and rep["alpha"] == 0.1


@pytest.mark.parametrize("x,extra", [
    ("AC1T", []),
    ("ACGU", ["--alphabet", "ACGT"]),
    ("ACGT\nACGT", []),
    ("ACGT", ["--alpha", "fixed:1.5"]),
    ("ACGT", ["--alpha", "sometimes"]),
])
def test_align_parse_errors(tmp_path, capsys, x, extra):
    code, _ = align(tmp_path, capsys, x, "ACGT", *extra)
    assert code == 2


def test_align_missing_file(tmp_path):
    assert main(["align", str(tmp_path / "nope"), str(tmp_path / "nope2")]) == 2


def test_align_memory_cap(tmp_path, capsys):
    code, _ = align(tmp_path, capsys, "ACGT" * 50, "ACGT" * 50, "--memory-cap", "1000")
    assert code == 3


# ---------------------------------------------------------------- bounds

@pytest.mark.parametrize("args,expected", [
    (["--k", "2"], "0.866595"),
    (["--k", "8"], "0.596756"),
    (["--dist", "uniform-3"], "0.786473"),
])
def test_bounds(capsys, args, expected):
    assert main(["bounds", *args]) == 0
    assert f"upper={expected}" in capsys.readouterr().out


def test_bounds_from_file_matches_library(tmp_path, capsys):
    p = [0.1, 0.2, 0.3, 0.4]
    assert main(["bounds", "--dist", write(tmp_path, "d.json", json.dumps(p))]) == 0
    out = capsys.readouterr().out
    lo, up = chvatal_sankoff_bounds(sum(v * v for v in p), 0.9)
    assert f"lower={lo:.6f} upper={up:.6f}" in out
    assert main(["bounds", "--dist", write(tmp_path, "d.txt", "0.1 0.2 0.3 0.4")]) == 0
    assert f"upper={up:.6f}" in capsys.readouterr().out


@pytest.mark.parametrize("args", [["--k", "1"], ["--dist", "uniform-x"], ["--dist", "/no/such/file"]])
def test_bounds_bad_input(args):
    assert main(["bounds", *args]) == 2


def test_bounds_bad_distribution(tmp_path):
    assert main(["bounds", "--dist", write(tmp_path, "d.txt", "0.5 0.6")]) == 2


def test_bounds_estimate(capsys):
    assert main(["bounds", "--k", "2", "--estimate", "--n", "300", "--trials", "4"]) == 0
    assert "gamma_hat=" in capsys.readouterr().out


# ---------------------------------------------------------------- gen

def test_gen_independent(tmp_path, capsys):
    out = str(tmp_path / "pair")
    assert main(["gen", "--model", "independent", "--k", "4", "--n", "1000", "--out", out, "--seed", "3"]) == 0
    x = (tmp_path / "pair_x.txt").read_text().strip()
    y = (tmp_path / "pair_y.txt").read_text().strip()
    assert len(x) == len(y) == 1000 and set(x) <= set("ACGT")
    assert not (tmp_path / "pair_ancestry.json").exists()
    assert main(["gen", "--model", "independent", "--k", "4", "--n", "1000", "--out", out + "2", "--seed", "3"]) == 0
    assert (tmp_path / "pair2_x.txt").read_text().strip() == x


def test_gen_related_matches_library(tmp_path):
    out = str(tmp_path / "rel")
    assert main(["gen", "--model", "paper-sec7", "--n", "949", "--out", out, "--seed", "8"]) == 0
    side = json.loads((tmp_path / "rel_ancestry.json").read_text())
    assert len(side["related_pairs"]) > 0
    g = gen_related_fixed(949, PRESETS["paper-sec7"], 8)
    assert side == json.loads(json.dumps(g.sidecar()))
    assert (tmp_path / "rel_x.txt").read_text().strip() == "".join("ACGT"[c] for c in g.x)


def test_gen_config_file_and_random_length(tmp_path):
    cfg = write(tmp_path, "m.json", json.dumps(ModelParams(2, [0.5, 0.5], np.eye(2), 0.8).to_dict()))
    out = str(tmp_path / "c")
    assert main(["gen", "--model", cfg, "--n", "200", "--random-length", "--out", out]) == 0
    side = json.loads((tmp_path / "c_ancestry.json").read_text())
    assert len(side["ancestor_letters"]) == 250


@pytest.mark.parametrize("args", [["--n", "-1"], ["--model", "no-such-model", "--n", "5"], ["--n", "5", "--k", "5", "--alphabet", "AB"]])
def test_gen_bad_flags(tmp_path, args):
    assert main(["gen", "--out", str(tmp_path / "z"), *args]) == 2


# ---------------------------------------------------------------- sweep

def test_sweep_writes_outputs_matching_library(tmp_path, capsys):
    csv_path, js = tmp_path / "s.csv", tmp_path / "s.json"
    args = ["sweep", "--n", "100,200", "--trials", "3", "--out", str(csv_path), "--summary", str(js), "--seed", "5"]
    assert main(args) == 0
    summary, recs = growth_sweep(ModelSpec.related("paper-sec7"), [100, 200], 3, 5)
    assert csv_path.read_text() == records_to_csv(recs)
    assert json.loads(js.read_text()) == json.loads(summary.to_json())
    first = csv_path.read_bytes()
    assert main(args + ["--jobs", "2"]) == 0
    assert csv_path.read_bytes() == first


def test_sweep_single_trial_marks_std_empty(tmp_path):
    js = tmp_path / "s.json"
    assert main(["sweep", "--n", "100", "--trials", "1", "--out", str(tmp_path / "s.csv"), "--summary", str(js)]) == 0
    row = json.loads(js.read_text())["per_n"][0]
    assert row["haus_max"]["std"] is None


def test_sweep_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("LCS_SEED", "99")
    assert main(["sweep", "--n", "50", "--trials", "2", "--out", str(tmp_path / "a.csv")]) == 0
    assert ",99," in (tmp_path / "a.csv").read_text().splitlines()[1]
    monkeypatch.delenv("LCS_SEED")
    assert main(["sweep", "--n", "50", "--trials", "2", "--out", str(tmp_path / "b.csv")]) == 0
    assert f",{DEFAULT_SEED}," in (tmp_path / "b.csv").read_text().splitlines()[1]
    monkeypatch.setenv("LCS_SEED", "abc")
    assert main(["sweep", "--n", "50", "--trials", "2", "--out", str(tmp_path / "c.csv")]) == 2


@pytest.mark.parametrize("args", [
    ["--n", "5000"],
    ["--n", "a,b"],
    ["--n", "100", "--alpha", "fixed:0"],
    ["--n", "100", "--trials", "0"],
])
def test_sweep_bad_input(tmp_path, args):
    out = tmp_path / "x.csv"
    assert main(["sweep", "--out", str(out), *args]) == 2
    assert not out.exists()


def test_sweep_memory_cap_leaves_no_output(tmp_path):
    out = tmp_path / "x.csv"
    assert main(["sweep", "--n", "300", "--trials", "2", "--memory-cap", "1000", "--out", str(out)]) == 3
    assert not out.exists()


def test_sweep_independent_model(tmp_path):
    out = tmp_path / "i.csv"
    assert main(["sweep", "--model", "independent", "--k", "2", "--n", "80", "--trials", "2", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1].split(",")[1] == "independent"


# ---------------------------------------------------------------- table1 and entry point

def test_table1(capsys):
    assert main(["table1", "--no-estimate"]) == 0
    out = capsys.readouterr().out
    for v in ("0.866595", "0.786473", "0.729705", "0.686117", "0.650983", "0.621719", "0.596756"):
        assert v in out
    assert main(["table1", "--k-list", "1"]) == 2


def test_usage_error_exit_code():
    assert main([]) == 2
    assert main(["align"]) == 2


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "extremal_lcs.cli", "bounds", "--k", "4"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "upper=0.729705" in res.stdout
