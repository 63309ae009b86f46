import ast
import io
import json
from pathlib import Path

import pytest

import qsskit.cli as cli
from qsskit import codebook, serialize
from qsskit.cli import main
from qsskit.qssverify import build_qss_state


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    serialize.write_files(tmp_path, codebook.builtin("five-qubit"))
    serialize.write_files(tmp_path, codebook.builtin("steane"))
    serialize.write_json(tmp_path / "gamma5.json", codebook.gamma5_structure().to_json())
    return tmp_path


def test_no_arithmetic_in_cli():
    tree = ast.parse(Path(cli.__file__).read_text())
    assert not [n for n in ast.walk(tree) if isinstance(n, (ast.BinOp, ast.AugAssign))]


def test_verify_state(files, capsys):
    code, out, _ = run(["verify-state", "--state", str(files / "five_qubit_qss.json"),
                        "--access", str(files / "threshold_5_3.json")], capsys)
    data = json.loads(out)
    assert code == 0 and data["pass"] and len(data["records"]) == 31
    code, out, _ = run(["verify-state", "--state", str(files / "five_qubit_qss.json"),
                        "--access", str(files / "gamma5.json")], capsys)
    assert code == 1 and not json.loads(out)["pass"]


def test_pipe_bundle(capsys, monkeypatch):
    code, out, _ = run(["builtin", "--name", "steane"], capsys)
    assert code == 0
    code, out, _ = run(["verify-state"], capsys, stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["pass"]


def test_derive_access(files, capsys, monkeypatch):
    code, out, _ = run(["derive-access", "--state", str(files / "steane_qss.json")], capsys)
    assert code == 0
    assert json.loads(out) == codebook.fano_structure().to_json()
    ghz = {"n_qubits": 3, "amplitudes": [{"basis": "000", "re": 0.7071067811865476},
                                         {"basis": "111", "re": 0.7071067811865476}]}
    code, out, _ = run(["derive-access"], capsys, stdin=json.dumps(ghz), monkeypatch=monkeypatch)
    assert code == 1 and json.loads(out)["qss_state"] is False


def test_check_uniform(files, capsys):
    code, out, _ = run(["check-uniform", "--state", str(files / "steane_qss.json"), "--k", "4"], capsys)
    data = json.loads(out)
    assert code == 1 and not data["uniform"] and data["purity"] > 1 / 16
    code, out, _ = run(["check-uniform", "--state", str(files / "five_qubit_qss.json")], capsys)
    data = json.loads(out)
    assert code == 0 and data["k_max"] == 3 and data["ame"]
    code, _, err = run(["check-uniform", "--state", str(files / "five_qubit_qss.json"), "--k", "4"], capsys)
    assert code == 2 and "KOutOfRange" in err


def test_shadow(files, capsys):
    code, out, _ = run(["shadow", "--access", str(files / "gamma5.json"), "--t", "0,1,2,3"], capsys)
    data = json.loads(out)
    assert code == 1 and data == {"a": "-2", "b": "1/4", "verdict": "VIOLATED", "t": [0, 1, 2, 3]}
    code, out, _ = run(["shadow", "--state", str(files / "five_qubit_qss.json")], capsys)
    values = json.loads(out)
    assert code == 0 and len(values) == 64 and min(v["s_t"] for v in values) >= -1e-7
    pattern = files / "pattern.json"
    from qsskit.uniformity import mixed_pattern

    serialize.write_json(pattern, mixed_pattern(6).to_json())
    code, out, _ = run(["shadow", "--pattern", str(pattern)], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "INCONCLUSIVE"


def test_lp_feasible(files, capsys, tmp_path):
    code, out, _ = run(["lp-feasible", "--access", str(files / "threshold_5_3.json")], capsys)
    data = json.loads(out)
    assert code == 0 and data["status"] == "FEASIBLE" and data["sample"]
    serialize.write_json(tmp_path / "bad.json", {"n_players": 4, "minimal_authorized": [[1, 2], [3, 4]]})
    code, _, err = run(["lp-feasible", "--access", str(tmp_path / "bad.json")], capsys)
    assert code == 2 and "InvalidStructure" in err


def test_lp_infeasible_certificate(capsys, tmp_path):
    from qsskit.certcheck import check_infeasibility_certificate
    from qsskit.classify import enumerate_structures

    (four,) = enumerate_structures(4)
    serialize.write_json(tmp_path / "four.json", four.to_json())
    cert = tmp_path / "cert.json"
    code, out, _ = run(["lp-feasible", "--access", str(tmp_path / "four.json"), "--out", str(cert)], capsys)
    assert code == 1 and json.loads(out)["status"] == "INFEASIBLE"
    assert check_infeasibility_certificate(json.loads(cert.read_text()))[0]


def test_classify(capsys, tmp_path):
    code, out, _ = run(["classify", "--n", "5", "--out", str(tmp_path)], capsys)
    data = json.loads(out)
    assert code == 0
    assert [s["state"] for s in data["survivors"]] == ["five-qubit"]
    assert (tmp_path / "report.json").exists()
    code, _, err = run(["classify", "--n", "7", "--out", str(tmp_path)], capsys)
    assert code == 2 and "BadN" in err


def test_builtin_out_and_errors(capsys, tmp_path):
    code, out, _ = run(["builtin", "--name", "threshold:5:3", "--out", str(tmp_path)], capsys)
    assert code == 0 and (tmp_path / "threshold_5_3.json").exists()
    code, _, err = run(["builtin", "--name", "bogus"], capsys)
    assert code == 2


def test_bad_inputs(capsys, tmp_path, monkeypatch):
    dup = {"n_qubits": 1, "amplitudes": [{"basis": "0", "re": 1}, {"basis": "0", "re": 0}]}
    code, _, err = run(["entropy-profile"], capsys, stdin=json.dumps(dup), monkeypatch=monkeypatch)
    assert code == 2 and "FormatError" in err
    code, _, _ = run(["entropy-profile"], capsys, stdin="{not json", monkeypatch=monkeypatch)
    assert code == 2
    code, _, _ = run(["entropy-profile", "--state", str(tmp_path / "missing.json")], capsys)
    assert code == 2
    big = {"n_qubits": 13, "amplitudes": [{"basis": "0" * 13, "re": 1}]}
    code, _, _ = run(["entropy-profile"], capsys, stdin=json.dumps(big), monkeypatch=monkeypatch)
    assert code == 3


def test_entropy_profile(capsys, monkeypatch):
    state = build_qss_state(codebook.five_qubit_encoding()).to_json()
    code, out, _ = run(["entropy-profile"], capsys, stdin=json.dumps(state), monkeypatch=monkeypatch)
    data = json.loads(out)
    assert code == 0 and len(data) == 62
    assert all(abs(r["entropy_bits"] - min(len(r["subset"]), 6 - len(r["subset"]))) < 1e-9 for r in data)
