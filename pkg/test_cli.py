"""
End-to-end tests for the metafact command line, plus the trial runner and settings it relies on.
"""

import csv
import json

import numpy as np
import pytest

from metafact.cli.schemas import MethodRecord
from metafact.cli.trials import aggregate, run_trials
from metafact.config.settings import MetafactSettings
from metafact.io import read_factors, write_matrix_market
from metafact.main import main
from metafact.shared.utils.helpers import split_seed, split_seeds

RANK_FIVE = "rank_k:20x15:k=5:seed=7"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    lines = [line for line in out.splitlines() if line.strip()]
    return code, json.loads(out), lines


def without_timings(document):
    for record in document["methods"]:
        record.pop("elapsed_seconds")
    return document


# factorize


def test_factorize_svd_meta(capsys):
    code, report, lines = run(capsys, "factorize", "--synthetic", RANK_FIVE, "--method", "svd-meta", "--rank", "5")
    assert code == 0
    assert len(lines) == 1
    assert report["success"] is True
    assert report["command"] == "factorize"
    assert report["input"] == RANK_FIVE
    assert report["shape"] == [20, 15]
    assert report["seed"] == 7
    (record,) = report["methods"]
    assert record["method"] == "svd-meta"
    assert record["residual_rel"] <= 1e-10
    assert record["structural_checks_passed"] is True


def test_factorize_cpqr(capsys):
    code, report, _ = run(capsys, "factorize", "--synthetic", RANK_FIVE, "--method", "cpqr", "--rank", "5")
    assert code == 0
    assert report["methods"][0]["deviation"] <= 1e-10


@pytest.mark.parametrize("method", ["utv-row-svd", "utv-svd", "utv-qr", "utv-lu"])
def test_factorize_utv(capsys, method):
    code, report, _ = run(capsys, "factorize", "--synthetic", RANK_FIVE, "--method", method, "--rank", "5")
    assert code == 0
    record = report["methods"][0]
    assert record["residual_rel"] <= 1e-9
    assert record["structural_checks_passed"] is True
    assert set(record["orthonormality"]) == {"u", "v"}


def test_factorize_pinv_meta(capsys):
    code, report, _ = run(capsys, "factorize", "--synthetic", "rank_k:9x6:k=3:seed=1", "--method", "pinv-meta", "--pretty")
    assert code == 0
    record = report["methods"][0]
    assert record["k"] == 6
    assert record["detected_rank"] == 3
    assert record["structural_checks_passed"] is True


def test_factorize_rank_too_large(capsys):
    code, report, _ = run(capsys, "factorize", "--synthetic", RANK_FIVE, "--method", "svd-meta", "--rank", "99")
    assert code == 2
    assert report["success"] is False
    assert report["error"]["kind"] == "RankTooLarge"


def test_factorize_needs_rank(capsys):
    code, report, _ = run(capsys, "factorize", "--synthetic", RANK_FIVE, "--method", "cpqr")
    assert code == 2
    assert report["error"]["kind"] == "UsageError"


def test_factorize_writes_factors_and_verify_reads_them(capsys, tmp_path):
    out = tmp_path / "factors"
    code, report, _ = run(capsys, "factorize", "--synthetic", RANK_FIVE, "--method", "svd-meta", "--rank", "5", "--out", str(out))
    assert code == 0
    assert report["factors_dir"] == str(out)
    factors = read_factors(out)
    assert sorted(factors) == ["f", "g", "h"]
    assert factors["g"].shape == (5, 5)

    code, report, _ = run(capsys, "verify", "--synthetic", RANK_FIVE, "--check", "reconstruction", "--factors", str(out))
    assert code == 0
    assert report["passed"] is True
    assert report["checks"][0]["measured"] <= 1e-10

    write_matrix_market(2.0 * factors["g"], out / "g.mtx")
    code, report, _ = run(capsys, "verify", "--synthetic", RANK_FIVE, "--check", "reconstruction", "--factors", str(out))
    assert code == 1
    assert report["success"] is True
    assert report["passed"] is False
    assert report["checks"][0]["passed"] is False


def test_utv_factors_verify(capsys, tmp_path):
    out = tmp_path / "utv"
    code, _, _ = run(capsys, "factorize", "--synthetic", RANK_FIVE, "--method", "utv-qr", "--rank", "5", "--out", str(out))
    assert code == 0
    assert sorted(read_factors(out)) == ["t", "u", "v"]
    code, report, _ = run(capsys, "verify", "--synthetic", RANK_FIVE, "--check", "reconstruction", "--factors", str(out))
    assert code == 0


def test_reconstruction_check_against_wrong_input(capsys, tmp_path):
    out = tmp_path / "factors"
    run(capsys, "factorize", "--synthetic", RANK_FIVE, "--method", "svd-meta", "--rank", "5", "--out", str(out))
    code, report, _ = run(capsys, "verify", "--synthetic", "rank_k:15x20:k=5", "--check", "reconstruction", "--factors", str(out))
    assert code == 2
    assert report["error"]["kind"] == "DimensionMismatch"


# lowrank


def test_lowrank_wedderburn(capsys):
    code, report, _ = run(capsys, "lowrank", "--synthetic", "rank_k:10x8:k=4:seed=2", "--method", "wedderburn")
    assert code == 0
    record = report["methods"][0]
    assert record["steps"] == 4
    assert len(record["pivots"]) == 4
    assert record["residual_rel"] <= 1e-8
    assert report["aggregate"]["count"] == 1


def test_lowrank_cur(capsys):
    argv = ["lowrank", "--synthetic", "rank_k:12x10:k=3:seed=4", "--method", "cur", "--rows", "0,1,2", "--cols", "3,4,5"]
    code, report, _ = run(capsys, *argv)
    assert code == 0
    record = report["methods"][0]
    assert record["row_idx"] == [0, 1, 2]
    assert record["col_idx"] == [3, 4, 5]
    assert record["mode"] == "orthogonal"
    assert record["residual_rel"] <= 1e-8


def test_lowrank_cur_rejects_out_of_range_index(capsys):
    argv = ["lowrank", "--synthetic", "rank_k:12x10:k=3", "--method", "cur", "--rows", "0,1,2", "--cols", "0,1,99"]
    code, report, _ = run(capsys, *argv)
    assert code == 2
    assert report["error"]["kind"] == "IndexOutOfRange"


def test_lowrank_cur_needs_indices(capsys):
    code, report, _ = run(capsys, "lowrank", "--synthetic", "rank_k:12x10:k=3", "--method", "cur", "--rows", "0,1")
    assert code == 2
    assert report["error"]["kind"] == "UsageError"


def test_lowrank_nystrom_trials(capsys):
    argv = ["lowrank", "--synthetic", "decaying_geometric:40x30:decay=0.6:seed=1", "--method", "nystrom"]
    argv += ["--rank", "5", "--oversample", "5", "--trials", "3", "--seed", "5"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    assert [record["trial"] for record in first["methods"]] == [0, 1, 2]
    assert [record["seed"] for record in first["methods"]] == split_seeds(5, 3)
    assert all(record["oversample"] == 5 for record in first["methods"])
    assert first["aggregate"]["count"] == 3
    assert first["baseline_residual"] <= first["aggregate"]["min_residual"] * (1 + 1e-12)

    _, second, _ = run(capsys, *argv)
    assert without_timings(first) == without_timings(second)


def test_lowrank_nystrom_direct_and_cur_random(capsys):
    base = ["lowrank", "--synthetic", "rank_k:30x20:k=4:seed=3", "--rank", "4", "--trials", "2"]
    code, report, _ = run(capsys, *base, "--method", "nystrom-direct")
    assert code == 0
    assert all(record["residual_rel"] <= 1e-8 for record in report["methods"])
    code, report, _ = run(capsys, *base, "--method", "cur-random", "--mode", "interpolative")
    assert code == 0
    assert all(record["mode"] == "interpolative" for record in report["methods"])


def test_lowrank_csv(capsys, tmp_path):
    target = tmp_path / "trials.csv"
    argv = ["lowrank", "--synthetic", "rank_k:20x15:k=3", "--method", "nystrom", "--rank", "3"]
    code, report, _ = run(capsys, *argv, "--trials", "4", "--csv", str(target))
    assert code == 0
    with open(target, newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 4
    assert [int(row["trial"]) for row in rows] == [0, 1, 2, 3]
    assert float(rows[0]["residual_rel"]) == report["methods"][0]["residual_rel"]


def test_lowrank_oversized_sketch(capsys):
    argv = ["lowrank", "--synthetic", "rank_k:10x8:k=2", "--method", "nystrom", "--rank", "6", "--oversample", "6"]
    code, report, _ = run(capsys, *argv)
    assert code == 2
    assert report["error"]["kind"] == "InvalidSketch"


def test_lowrank_zero_matrix_is_a_breakdown(capsys, tmp_path):
    path = tmp_path / "zero.csv"
    path.write_text("0,0,0\n0,0,0\n0,0,0\n")
    code, report, _ = run(capsys, "lowrank", "--input", str(path), "--method", "nystrom", "--rank", "1")
    assert code == 3
    assert report["error"]["kind"] == "RankDeficientAnchor"


# verify


def test_verify_periodicity(capsys):
    code, report, _ = run(capsys, "verify", "--synthetic", "rank_k:12x9:k=4:seed=3", "--check", "periodicity", "--period", "2")
    assert code == 0
    check = report["checks"][0]
    assert check["name"] == "periodicity"
    assert check["passed"] is True
    assert len(check["details"]["periodic_residuals"]) == 4
    intermediate = check["details"]["intermediate_residuals"]
    assert sorted(intermediate) == ["1", "3", "5"]
    assert all(value > check["threshold"] for value in intermediate.values())
    assert check["details"]["k"] == 4


def test_verify_periodicity_with_rotation(capsys):
    argv = ["verify", "--synthetic", "rank_k:12x9:k=4:seed=3", "--check", "periodicity"]
    code, report, _ = run(capsys, *argv, "--generator", "rotation", "--period", "4", "--pmax", "2")
    assert code == 0
    assert report["checks"][0]["details"]["generator"] == "rotation"


def test_verify_several_checks(capsys):
    argv = ["verify", "--synthetic", "rank_k:15x10:k=4:seed=9"]
    for name in ("penrose", "projector", "rank-reduction", "penrose"):
        argv += ["--check", name]
    code, report, _ = run(capsys, *argv)
    assert code == 0
    assert [check["name"] for check in report["checks"]] == ["penrose", "projector", "rank-reduction"]
    assert report["passed"] is True


def test_verify_reconstruction_needs_factors(capsys):
    code, report, _ = run(capsys, "verify", "--synthetic", RANK_FIVE, "--check", "reconstruction")
    assert code == 2
    assert report["error"]["kind"] == "UsageError"


def test_verify_rank_above_input(capsys):
    code, report, _ = run(capsys, "verify", "--synthetic", "rank_k:6x5:k=2", "--check", "periodicity", "--rank", "9")
    assert code == 2
    assert report["error"]["kind"] == "RankTooLarge"


# usage and input errors


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["transpose"],
        ["factorize", "--method", "svd-meta"],
        ["factorize", "--input", "a.mtx", "--synthetic", RANK_FIVE, "--method", "cpqr"],
        ["factorize", "--synthetic", RANK_FIVE, "--method", "lu"],
        ["factorize", "--synthetic", RANK_FIVE, "--method", "cpqr", "--rank", "0"],
        ["lowrank", "--synthetic", RANK_FIVE, "--method", "nystrom", "--rank", "2", "--trials", "zero"],
        ["verify", "--synthetic", RANK_FIVE],
        ["verify", "--synthetic", RANK_FIVE, "--check", "projector", "--seed", "-1"],
        ["verify", "--synthetic", RANK_FIVE, "--check", "projector", "--seed", str(2**64)],
        ["lowrank", "--synthetic", RANK_FIVE, "--method", "nystrom", "--rank", "2", "--seed", "-3"],
    ],
)
def test_usage_errors_are_reported_as_json(capsys, argv):
    code, report, lines = run(capsys, *argv)
    assert code == 2
    assert len(lines) == 1
    assert report["success"] is False
    assert report["error"]["kind"] == "UsageError"


def test_input_errors(capsys, tmp_path):
    code, report, _ = run(capsys, "factorize", "--synthetic", "rank_k:4x4", "--method", "cpqr", "--rank", "1")
    assert (code, report["error"]["kind"]) == (2, "InvalidSpec")

    code, report, _ = run(capsys, "factorize", "--input", str(tmp_path / "missing.mtx"), "--method", "pinv-meta")
    assert (code, report["error"]["kind"]) == (2, "InputOutputError")

    code, report, _ = run(capsys, "factorize", "--input", str(tmp_path / "a.npy"), "--method", "pinv-meta")
    assert (code, report["error"]["kind"]) == (2, "UnsupportedFormat")

    bad = tmp_path / "bad.mtx"
    bad.write_text("%%MatrixMarket matrix array real general\n2 2\n1\n")
    code, report, _ = run(capsys, "factorize", "--input", str(bad), "--method", "pinv-meta")
    assert (code, report["error"]["kind"]) == (2, "ParseError")
    assert report["error"]["details"]["line"] == 3

    undecodable = {"latin1.mtx": b"%%MatrixMarket matrix array real general\n1 1\n\xff\n", "latin1.csv": b"\xff,1\n"}
    for name, data in undecodable.items():
        latin1 = tmp_path / name
        latin1.write_bytes(data)
        code, report, _ = run(capsys, "factorize", "--input", str(latin1), "--method", "pinv-meta")
        assert (code, report["error"]["kind"]) == (2, "ParseError")
        assert report["error"]["details"]["path"] == str(latin1)
        assert "offset" in report["error"]["details"]


def test_matrix_file_input(capsys, tmp_path, rng):
    path = tmp_path / "a.mtx"
    write_matrix_market(rng.standard_normal((6, 4)), path)
    code, report, _ = run(capsys, "factorize", "--input", str(path), "--method", "svd-meta", "--rank", "4")
    assert code == 0
    assert report["input"] == str(path)
    assert report["seed"] is None


# trials and settings


def test_split_seed_matches_splitmix64():
    assert split_seed(0, 0) == 0xE220A8397B1DCDAF
    assert split_seeds(7, 3) == [split_seed(7, i) for i in range(3)]
    assert split_seed(2**64 - 1, 1) == split_seed(0, 0)


def test_run_trials_keeps_trial_order():
    results = run_trials(lambda index, seed: (index, seed), master_seed=3, count=6, workers=2)
    assert results == list(zip(range(6), split_seeds(3, 6)))


def test_aggregate():
    records = [MethodRecord(method="nystrom", k=2, residual_rel=value) for value in (0.3, 0.1, 0.2)]
    stats = aggregate(records)
    assert (stats.count, stats.median_residual, stats.min_residual, stats.max_residual) == (3, 0.2, 0.1, 0.3)


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("METAFACT_SEED", "11")
    monkeypatch.setenv("METAFACT_LOG_LEVEL", "DEBUG")
    configured = MetafactSettings()
    assert configured.SEED == 11
    assert configured.LOG_LEVEL == "DEBUG"


def test_default_seed_comes_from_settings(capsys, settings_override):
    settings_override(SEED=13)
    code, report, _ = run(capsys, "lowrank", "--synthetic", "rank_k:10x8:k=2:seed=1", "--method", "nystrom", "--rank", "2")
    assert code == 0
    assert report["seed"] == 13
    assert report["methods"][0]["seed"] == split_seed(13, 0)
    assert np.isfinite(report["methods"][0]["residual_rel"])
