import json
import math

import numpy as np
import pandas as pd
import pytest

from config.config import LOG_CONFIG
from src.construct.matrices import Provenance, ProvenanceKind, SignMatrix, build_bernoulli_baseline
from src.construct.matrix_io import read_matrix, write_matrix
from src.database.db_manager import DatabaseManager
from src.main import main


@pytest.fixture(autouse=True)
def no_log_file(monkeypatch):
    monkeypatch.setitem(LOG_CONFIG, "file", "")


@pytest.fixture
def hadamard_file(tmp_path):
    h = np.array([[1]])
    while h.shape[0] < 4:
        h = np.block([[h, h], [h, -h]])
    matrix = SignMatrix.from_signs(h.astype(np.int8), Provenance(ProvenanceKind.SMALL_BIAS, q=1, draw=0))
    path = tmp_path / "h.ripm"
    write_matrix(matrix, path)
    return str(path)


def run_json(capsys, argv):
    code = main(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


# --- plan ---------------------------------------------------------------------

def test_plan_reports_m(capsys):
    code, document = run_json(capsys, ["plan", "--n", "1000", "--k", "5", "--delta", "0.5"])
    assert code == 0
    expected = math.ceil((5760000 / 0.25) * 5 * math.log(5) ** 2 * math.log(1000))
    assert document["records"][0]["value"] == expected
    assert document["config"]["c1"] == 5760000


@pytest.mark.parametrize("argv", [
    ["plan", "--n", "10", "--k", "2", "--delta", "0"],
    ["plan", "--n", "5", "--k", "6", "--delta", "0.5"],
    ["verify", "--matrix", "m.ripm", "--checks", "spark"],
    ["gen", "--deterministic", "--h", "4", "--m", "1", "--n", "6", "--out", "x"],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


# --- gen ----------------------------------------------------------------------

def test_gen_seeded_all_squares(tmp_path, capsys):
    out = tmp_path / "m.ripm"
    assert main(["gen", "--m", "2", "--n", "2", "--h", "4", "--x", "0", "--prime", "23", "--out", str(out)]) == 0
    assert read_matrix(out).signs.tolist() == [[1, 1], [1, 1]]
    assert "check=\"no-zero\"" in capsys.readouterr().out


def test_gen_deterministic_mod_7(tmp_path):
    out = tmp_path / "d.ripm"
    assert main(["gen", "--deterministic", "--m", "1", "--n", "6", "--prime", "7", "--out", str(out)]) == 0
    assert read_matrix(out).signs.tolist() == [[1, 1, -1, 1, -1, -1]]


def test_gen_rejects_composite_prime(tmp_path, capsys):
    out = tmp_path / "d.ripm"
    assert main(["gen", "--deterministic", "--m", "1", "--n", "6", "--prime", "22", "--out", str(out)]) == 1
    assert "error: p no es un primo impar: 22" in capsys.readouterr().err
    assert not out.exists()


# --- verify ---------------------------------------------------------------------

def test_verify_rip_on_orthonormal_matrix(hadamard_file, capsys):
    code, document = run_json(capsys, ["verify", "--matrix", hadamard_file, "--checks", "rip", "coherence",
                                       "--k", "2"])
    assert code == 0
    rip, coh = document["records"]
    assert rip["value"] == 0.0 and rip["pass"] is True and rip["mode"] == "exhaustive"
    assert coh["value"] == 0.0


def test_verify_reruns_are_byte_identical(tmp_path, capsys):
    out = tmp_path / "m.ripm"
    main(["gen", "--m", "3", "--n", "5", "--h", "6", "--seed", "4", "--out", str(out)])
    capsys.readouterr()
    argv = ["verify", "--matrix", str(out), "--k", "2", "--workers", "2"]
    assert main(argv) == main(argv)
    first, second = capsys.readouterr().out.split("# tool")[1:]
    assert first == second


def test_verify_report_does_not_depend_on_workers(tmp_path, capsys):
    out = tmp_path / "m.ripm"
    main(["gen", "--m", "3", "--n", "6", "--h", "6", "--seed", "9", "--out", str(out)])
    capsys.readouterr()
    argv = ["verify", "--matrix", str(out), "--k", "2"]
    assert main(argv + ["--workers", "1"]) == main(argv + ["--workers", "4"])
    first, second = capsys.readouterr().out.split("# tool")[1:]
    assert first == second
    assert "workers" not in first


def test_verify_refuses_check_over_budget(tmp_path, capsys):
    path = tmp_path / "wide.ripm"
    write_matrix(build_bernoulli_baseline(4, 40, 5), path)
    code, document = run_json(capsys, ["verify", "--matrix", str(path), "--checks", "coherence", "fro",
                                       "--budget", "10"])
    assert code == 0
    coh, fro = document["records"]
    assert coh["check"] == "coherence" and coh["value"] is not None
    assert fro["check"] == "fro" and fro["mode"] == "refused" and fro["severity"] == "soft"
    assert fro["pass"] is None
    assert "presupuesto es 10" in fro["witness"]


def test_verify_consecutive_unavailable_for_explicit_signs(hadamard_file, capsys):
    code, document = run_json(capsys, ["verify", "--matrix", hadamard_file, "--checks", "consecutive", "no-zero"])
    assert code == 0
    consecutive, no_zero = document["records"]
    assert consecutive["mode"] == "unavailable" and consecutive["severity"] == "soft"
    assert no_zero["pass"] is True


def test_report_and_db(hadamard_file, tmp_path, capsys):
    report = tmp_path / "r.txt"
    url = f"sqlite:///{tmp_path / 'runs.db'}"
    assert main(["verify", "--matrix", hadamard_file, "--checks", "rip", "--report", str(report), "--db", url]) == 0
    assert report.read_text(encoding="utf-8") == capsys.readouterr().out
    stored = DatabaseManager(url).get_run(1)
    assert stored["run"]["command"] == "verify"
    assert stored["records"][0]["check"] == "rip"


# --- otros comandos -----------------------------------------------------------

def test_charsum_explicit_offsets(capsys):
    code, document = run_json(capsys, ["charsum", "--p", "7", "--offsets", "1", "2", "--t", "4"])
    assert code == 0
    record = document["records"][0]
    assert record["severity"] == "soft" and record["pass"] is True


def test_bias_exact(capsys):
    code, document = run_json(capsys, ["bias", "--p", "79", "--h", "6", "--i", "1", "2", "--columns", "4"])
    assert code == 0
    checks = [r["check"] for r in document["records"]]
    assert checks == ["bias", "bias-chain"]


def test_code_convert_legendre(tmp_path, capsys):
    out = tmp_path / "c.code"
    code, document = run_json(capsys, ["code-convert", "--legendre", "13", "3", "5", "--out", str(out)])
    assert code == 0
    assert [r["check"] for r in document["records"]] == ["biased-to-code", "welch-entropy"]
    assert out.read_text(encoding="utf-8").startswith("CODE v1 5 8\n")


def test_recover_on_orthonormal_matrix(hadamard_file, capsys):
    code, document = run_json(capsys, ["recover", "--matrix", hadamard_file, "--support", "3", "1",
                                       "--values", "2", "-1"])
    assert code == 0
    record = document["records"][0]
    assert record["witness"] == [1, 3] and record["pass"] is True


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code = main(["sweep", "--ensemble", "bernoulli", "--m", "4", "--n", "8", "--k-max", "5",
                 "--trials", "2", "--out", str(out)])
    assert code == 0
    assert out.read_text(encoding="utf-8").splitlines()[0] == "ensemble,K,trials,successes,success_rate,note"
    table = pd.read_csv(out, keep_default_na=False)
    assert len(table) == 6
    assert table["K"].tolist() == [0, 1, 2, 3, 4, 5]
    assert table["note"].iloc[-1] == "skipped: K > min(M, N)"
    assert table["success_rate"].iloc[-1] == ""
