"""End-to-end command-line behavior: exit codes, schemas, determinism."""

import csv
import io
import json

import pytest

from epr.cli import BENCH_COLUMNS, EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_SYNTH, main
from epr.constants import ALPHA


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    return code, json.loads(out), err


@pytest.fixture()
def c4_path(tmp_path):
    path = tmp_path / "c4.el"
    code = main(["gen", "cycle", "--k", "4", "--out", str(path)])
    assert code == EXIT_OK
    return path


@pytest.fixture()
def triangle_path(tmp_path):
    path = tmp_path / "c3.el"
    assert main(["gen", "cycle", "--k", "3", "--out", str(path)]) == EXIT_OK
    return path


# ------------------------------------------------------------------------ gen


def test_gen_stdout_is_deterministic(capsys):
    code, first, _ = run_cli(capsys, "gen", "random_gnp", "--n", "8", "--p", "0.5", "--seed", "4")
    code2, second, _ = run_cli(capsys, "gen", "random_gnp", "--n", "8", "--p", "0.5", "--seed", "4")
    assert code == code2 == EXIT_OK
    assert first == second
    assert first.splitlines()[0] == "8"


def test_gen_json_suffix_writes_json(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, _, _ = run_cli(capsys, "gen", "star", "--leaves", "3", "--out", str(path))
    assert code == EXIT_OK
    obj = json.loads(path.read_text())
    assert obj["n"] == 4 and len(obj["edges"]) == 3


def test_gen_missing_parameters_is_input_error(capsys):
    code, _, err = run_cli(capsys, "gen", "random_gnp", "--seed", "1")
    assert code == EXIT_INPUT
    assert "input error" in err


# ---------------------------------------------------------------------- solve


def test_solve_emits_passing_certificate(c4_path, capsys):
    code, payload, _ = run_json(capsys, "solve", str(c4_path))
    assert code == EXIT_OK
    assert payload["pass"] is True
    assert payload["schema_version"] == 1
    assert payload["algorithm"] == "main"
    assert set(payload["constants"]) == {"alpha", "gamma", "theta"}
    assert payload["n"] == 4 and payload["num_edges"] == 4
    assert payload["min_ratio"] == pytest.approx(ALPHA, abs=1e-12)
    assert payload["state"]["n"] == 4


def test_solve_writes_identical_report_file(c4_path, tmp_path, capsys):
    out = tmp_path / "cert.json"
    code, stdout_payload, _ = run_json(capsys, "solve", str(c4_path), "--out", str(out))
    assert code == EXIT_OK
    assert json.loads(out.read_text()) == stdout_payload


def test_solve_qmc_records_frame(c4_path, capsys):
    code, payload, _ = run_json(capsys, "solve", str(c4_path), "--qmc")
    assert code == EXIT_OK
    assert payload["state"]["y_conjugated_qubits"] == [0, 2]


def test_solve_qmc_rejects_odd_cycles(triangle_path, capsys):
    code, _, err = run_cli(capsys, "solve", str(triangle_path), "--qmc")
    assert code == EXIT_INPUT
    assert "bipartite" in err


def test_solve_audit_all_pairs(c4_path, capsys):
    code, payload, _ = run_json(capsys, "solve", str(c4_path), "--audit-all-pairs")
    assert code == EXIT_OK
    audit = payload["audit_all_pairs"]
    assert audit["pass"] is True
    assert audit["min_pair_energy"] == pytest.approx(ALPHA / 2, abs=1e-12)


def test_solve_plots_renders_figure(c4_path, tmp_path, capsys):
    out = tmp_path / "cert.json"
    code, payload, _ = run_json(capsys, "solve", str(c4_path), "--out", str(out), "--plots")
    assert code == EXIT_OK
    png = tmp_path / "cert.png"
    assert png.exists() and png.stat().st_size > 0
    assert payload["plot"] == str(png)


def test_solve_baseline_fails_certificate_but_reports(c4_path, capsys):
    code, payload, _ = run_json(capsys, "solve", str(c4_path), "--algorithm", "baseline34")
    assert code == EXIT_FAIL  # 3/4 < alpha - tol: honest failure
    assert payload["algorithm"] == "baseline34"
    assert all(abs(r["ratio"] - 0.75) <= 1e-12 for r in payload["edges"])


def test_solve_baseline_rejects_odd_cycles(triangle_path, capsys):
    code, _, _ = run_cli(capsys, "solve", str(triangle_path), "--algorithm", "baseline34")
    assert code == EXIT_INPUT


def test_solve_input_errors(tmp_path, capsys):
    code, _, err = run_cli(capsys, "solve", str(tmp_path / "nope.el"))
    assert code == EXIT_INPUT

    bad = tmp_path / "bad.el"
    bad.write_text("2\n0 0 1.0\n")
    code, _, err = run_cli(capsys, "solve", str(bad))
    assert code == EXIT_INPUT
    assert "self-loop" in err

    good = tmp_path / "edge.el"
    good.write_text("2\n0 1 1.0\n")
    code, _, _ = run_cli(capsys, "solve", str(good), "--cert-tol", "-1")
    assert code == EXIT_INPUT


def test_corrupted_cache_is_a_synthesis_error(triangle_path, tmp_path, capsys):
    cache = tmp_path / "cache"
    cache.mkdir()
    (cache / "rho3.json").write_text("{ broken")
    code, _, err = run_cli(
        capsys, "solve", str(triangle_path), "--data-dir", str(cache)
    )
    assert code == EXIT_SYNTH
    assert "synthesis error" in err


# ------------------------------------------------------------------------- lp


def test_lp_reports_exact_value(tmp_path, capsys):
    path = tmp_path / "c5.el"
    main(["gen", "cycle", "--k", "5", "--out", str(path)])
    code, payload, _ = run_json(capsys, "lp", str(path))
    assert code == EXIT_OK
    assert payload["lp_value"] == 2.5
    assert payload["lp_value_exact"] == "5/2"
    assert payload["exact"] is True
    assert payload["cycles"] == [[0, 1, 2, 3, 4]]
    assert payload["matched"] == []
    assert payload["upper_bound"] == 3.75


# --------------------------------------------------------------------- oracle


def test_oracle_command(triangle_path, capsys):
    code, payload, _ = run_json(capsys, "oracle", str(triangle_path), "--audit-star")
    assert code == EXIT_OK
    assert payload["certificate_pass"] is True
    assert payload["lambda_max"] == pytest.approx(2.0, abs=1e-10)
    assert payload["star_bound_ok"] is True
    assert payload["ratio_vs_lambda_max"] >= ALPHA - 1e-9


def test_oracle_rejects_large_instances(tmp_path, capsys):
    path = tmp_path / "big.el"
    main(["gen", "random_gnp", "--n", "15", "--p", "0.2", "--seed", "1", "--out", str(path)])
    code, _, err = run_cli(capsys, "oracle", str(path))
    assert code == EXIT_INPUT
    assert "n <= 14" in err


# ----------------------------------------------------------------- verifiers


def test_verify_lemma5_command(capsys):
    code, payload, _ = run_json(capsys, "verify-lemma5", "--k", "7")
    assert code == EXIT_OK
    assert payload["report"]["passed"] is True
    assert payload["report"]["k"] == 7


def test_verify_lemma5_rejects_even_k(capsys):
    code, _, _ = run_cli(capsys, "verify-lemma5", "--k", "4")
    assert code == EXIT_INPUT


def test_verify_suite_passes(capsys):
    code, payload, err = run_json(capsys, "verify")
    assert code == EXIT_OK
    assert payload["passed"] is True
    groups = [g["group"] for g in payload["groups"]]
    assert "constants" in groups
    assert "state_identities" in groups
    assert "star_bound" in groups
    assert "psi_conditions" in groups
    assert "lemma5_k15" in groups
    assert "PASS" in err and "FAIL" not in err


def test_verify_restricted_ks(capsys):
    code, payload, _ = run_json(capsys, "verify", "--k", "3", "--k", "5")
    assert code == EXIT_OK
    groups = [g["group"] for g in payload["groups"]]
    assert "lemma5_k3" in groups and "lemma5_k5" in groups
    assert "lemma5_k7" not in groups


# ---------------------------------------------------------------------- bench


def _bench_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bench_csv_schema_and_determinism(capsys):
    code, out, _ = run_cli(capsys, "bench", "--limit", "6")
    assert code == EXIT_OK
    rows = _bench_rows(out)
    assert len(rows) == 6
    assert list(rows[0].keys()) == BENCH_COLUMNS
    assert all(r["certificate_pass"] == "True" for r in rows)
    assert all(r["schema_version"] == "1" for r in rows)

    _, again, _ = run_cli(capsys, "bench", "--limit", "6")

    def stable(text):
        return [{k: v for k, v in r.items() if k != "wall_time_s"} for r in _bench_rows(text)]

    assert stable(out) == stable(again)


def test_bench_out_file_and_plot(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    code, _, _ = run_cli(capsys, "bench", "--limit", "4", "--out", str(out), "--plots")
    assert code == EXIT_OK
    assert out.exists()
    assert (tmp_path / "bench.png").exists()
    assert len(_bench_rows(out.read_text())) == 4


# ---------------------------------------------------------------------- synth


def test_synth_writes_verified_state(tmp_path, capsys):
    out = tmp_path / "rho3.json"
    code, payload, _ = run_json(capsys, "synth", "--k", "3", "--out", str(out))
    assert code == EXIT_OK
    assert out.exists()
    entry = payload["synthesized"][0]
    assert entry["state"] == "rho3"
    assert entry["report"]["passed"] is True
    assert entry["seconds"] < 300.0


# --------------------------------------------------------------------- parser


def test_unknown_command_is_a_usage_error(capsys):
    with pytest.raises(SystemExit):
        main(["frobnicate"])
    with pytest.raises(SystemExit):
        main(["solve"])  # missing instance argument
    with pytest.raises(SystemExit):
        main([])
