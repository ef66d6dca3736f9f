import csv
import io
import json

import pytest

from ricsim.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_json(capsys):
    code, out, _ = run_cli(capsys, "run", "--resource", "smolin", "--alpha", "0.6", "--p", "0.7",
                           "--shots", "2000", "--seed", "42", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert list(doc) == ["meta", "params", "results"]
    assert doc["meta"]["seed"] == 42 and doc["meta"]["resource"] == "smolin"
    assert doc["meta"]["version"]
    assert len(doc["results"]["counts"]) == 64
    assert sum(r["count"] for r in doc["results"]["counts"]) == 2000
    assert doc["results"]["mean_fidelity"] == pytest.approx(1, abs=1e-12)


def test_run_is_byte_reproducible(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        assert main(["run", "--resource", "ghz", "--shots", "500", "--seed", "3", "--output", str(path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_run_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("RICSIM_SEED", "17")
    _, out, _ = run_cli(capsys, "run", "--shots", "10")
    assert json.loads(out)["meta"]["seed"] == 17
    monkeypatch.setenv("RICSIM_SEED", "x")
    code, _, err = run_cli(capsys, "run", "--shots", "10")
    assert code == 2 and "RICSIM_SEED" in err


def test_run_degenerate_input_only_reachable(capsys):
    code, out, _ = run_cli(capsys, "run", "--resource", "ghz", "--alpha", "1", "--p", "1",
                           "--shots", "100", "--seed", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 64
    hit = {(int(r["l"]), int(r["j"]), int(r["k"])) for r in rows if int(r["count"]) > 0}
    # with p = 1 every Bell outcome pattern must put A,B,C in 000, 111, 101 or 010
    for t in hit:
        bits = "".join("0" if i < 2 else "1" for i in t)
        assert bits in {"000", "111", "101", "010"}


def test_invalid_alpha_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "run", "--alpha", "2")
    assert code == 2
    assert "alpha^2 + beta^2 = 1" in err


def test_bad_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "--resource", "w"])
    assert exc.value.code == 2


def test_branches_csv(capsys):
    code, out, _ = run_cli(capsys, "branches", "--resource", "ghz", "--alpha", "0.6", "--p", "0.7",
                           "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "l,j,k,probability,correction,fidelity,reachable"
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 64
    n16 = 16 * 1.58
    probs = {(r["l"], r["j"], r["k"]): float(r["probability"]) for r in rows}
    assert probs[("0", "0", "0")] == pytest.approx(1 / n16, abs=1e-12)
    assert probs[("2", "0", "2")] == pytest.approx(0.49 / n16, abs=1e-12)
    assert probs[("2", "2", "0")] == pytest.approx(0.09 / n16, abs=1e-12)
    labels = [r["correction"] for r in rows]
    assert all(labels.count(str(c)) == 16 for c in range(4))
    assert sum(r["reachable"] == "false" for r in rows) == 16


def test_branches_smolin_json(capsys):
    code, out, _ = run_cli(capsys, "branches", "--resource", "smolin")
    assert code == 0
    rows = json.loads(out)["results"]["branches"]
    assert all(r["probability"] == pytest.approx(0.015625, abs=1e-12) for r in rows)


def write_prior(tmp_path, entries):
    path = tmp_path / "prior.json"
    path.write_text(json.dumps(entries))
    return str(path)


def test_leak(capsys, tmp_path):
    prior = write_prior(tmp_path, [{"weight": 0.5, "alpha": 0.6, "p": 0.6},
                                   {"weight": 0.5, "alpha": 0.6, "p": 0.9}])
    code, out, _ = run_cli(capsys, "leak", "--resource", "smolin", "--prior", prior)
    assert code == 0
    assert abs(json.loads(out)["results"]["mutual_information_bits"]) < 1e-12
    code, out, _ = run_cli(capsys, "leak", "--resource", "ghz", "--prior", prior)
    assert json.loads(out)["results"]["mutual_information_bits"] > 1e-3

    single = write_prior(tmp_path, [{"weight": 1, "alpha": 0.28, "p": 0.7}])
    code, out, _ = run_cli(capsys, "leak", "--resource", "ghz", "--prior", single, "--format", "csv")
    row = next(csv.DictReader(io.StringIO(out)))
    assert abs(float(row["mutual_information_bits"])) < 1e-12


@pytest.mark.parametrize("content", ["not json", "{}", "[]", '[{"weight": 1, "alpha": 0.6}]',
                                     '[{"weight": 0.5, "alpha": 0.6, "p": 0.7}]',
                                     '[{"weight": 1, "alpha": 3, "p": 0.7}]'])
def test_leak_malformed_prior(capsys, tmp_path, content):
    path = tmp_path / "prior.json"
    path.write_text(content)
    code, _, err = run_cli(capsys, "leak", "--prior", str(path))
    assert code == 2 and err


def test_verify_default(capsys):
    code, out, _ = run_cli(capsys, "verify")
    assert code == 0
    assert out.rstrip().endswith("OVERALL: PASS")


def test_verify_negative_control(capsys):
    code, out, _ = run_cli(capsys, "verify", "--negative-control", "--shots", "2000", "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["results"]["passed"] is False
    assert doc["params"]["negative_control"] is True


def test_verify_dense_grid(capsys):
    code, out, _ = run_cli(capsys, "verify", "--grid", "dense", "--shots", "20000")
    assert code == 0
    assert "FAIL" not in out
