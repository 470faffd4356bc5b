import json
import subprocess
import sys

import pytest

from ergokit.cli import main

from _oracles import qubit_sweep_closed_form

QUBIT_INSTANCE = {
    "dimension": 2,
    "hamiltonian": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
    "state": [[[0.25, 0], [0, 0]], [[0, 0], [0.75, 0]]],
    "measurements": {
        "computational": [
            [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
            [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
        ],
        "diagonal_basis": [
            [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]],
            [[[0.5, 0], [-0.5, 0]], [[-0.5, 0], [0.5, 0]]],
        ],
        "trivial": [
            [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
        ],
    },
    "post_processing": {"halfmerge": [[0.5, 1.0], [0.5, 0.0]]},
}


@pytest.fixture
def qubit_file(tmp_path):
    path = tmp_path / "qubit.json"
    path.write_text(json.dumps(QUBIT_INSTANCE))
    return str(path)


def write_instance(tmp_path, doc, name="instance.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestReport:
    def test_json_fields(self, qubit_file, capsys):
        code, out, _ = run_cli(capsys, "report", qubit_file)
        assert code == 0
        doc = json.loads(out)
        assert doc == {"d": 2, "mean": 0.75, "passive": 0.25, "ergotropy": 0.5,
                       "incoherent": 0.5, "coherent": 0.0, "observational": None}

    def test_csv_row(self, qubit_file, capsys):
        code, out, _ = run_cli(capsys, "report", qubit_file, "--format", "csv")
        assert code == 0
        assert out == "d,mean,passive,ergotropy,incoherent,coherent,observational\n2,0.75,0.25,0.5,0.5,0.0,\n"

    def test_named_measurement(self, qubit_file, capsys):
        code, out, _ = run_cli(capsys, "report", qubit_file, "--measurement", "computational")
        assert code == 0
        assert json.loads(out)["observational"] == pytest.approx(0.5, abs=1e-12)

    def test_coherent_basis_measurement(self, qubit_file, capsys):
        # the +/- basis estimate of a diagonal state is maximally mixed
        code, out, _ = run_cli(capsys, "report", qubit_file, "--measurement", "diagonal_basis")
        assert code == 0
        assert json.loads(out)["observational"] == pytest.approx(0.25, abs=1e-12)

    def test_unknown_measurement(self, qubit_file, capsys):
        code, _, err = run_cli(capsys, "report", qubit_file, "--measurement", "nope")
        assert code == 2
        assert "measurements.nope" in err

    def test_maximally_mixed_instance(self, tmp_path, capsys):
        doc = {
            "dimension": 2,
            "hamiltonian": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
            "state": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]],
        }
        code, out, _ = run_cli(capsys, "report", write_instance(tmp_path, doc))
        assert code == 0
        rep = json.loads(out)
        assert rep["ergotropy"] == 0.0
        assert rep["incoherent"] == 0.0
        assert rep["coherent"] == 0.0

    def test_plus_state_instance(self, tmp_path, capsys):
        doc = {
            "dimension": 2,
            "hamiltonian": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
            "state": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]],
        }
        code, out, _ = run_cli(capsys, "report", write_instance(tmp_path, doc))
        assert code == 0
        rep = json.loads(out)
        assert rep["incoherent"] == pytest.approx(0.0, abs=1e-12)
        assert rep["coherent"] == pytest.approx(0.5, abs=1e-12)

    def test_output_file(self, qubit_file, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out, _ = run_cli(capsys, "report", qubit_file, "--output", str(target))
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["ergotropy"] == 0.5


class TestReportErrors:
    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "report", str(tmp_path / "absent.json"))
        assert code == 2
        assert "absent.json" in err

    def test_unparsable_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run_cli(capsys, "report", str(path))
        assert code == 2
        assert "line 1" in err

    def test_invalid_state_reports_field_path(self, tmp_path, capsys):
        doc = dict(QUBIT_INSTANCE, state=[[[0.9, 0], [0, 0]], [[0, 0], [0.9, 0]]])
        code, _, err = run_cli(capsys, "report", write_instance(tmp_path, doc))
        assert code == 2
        assert "state:" in err

    def test_bad_entry_reports_cell_path(self, tmp_path, capsys):
        doc = dict(QUBIT_INSTANCE)
        doc = json.loads(json.dumps(doc))
        doc["hamiltonian"][1][1] = "oops"
        code, _, err = run_cli(capsys, "report", write_instance(tmp_path, doc))
        assert code == 2
        assert "hamiltonian[1][1]" in err


class TestSweep:
    def test_merge_family_matches_closed_form(self, qubit_file, capsys):
        code, out, _ = run_cli(capsys, "sweep", qubit_file, "--family", "merge", "--grid", "0:1:5")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "parameter,observational_ergotropy"
        values = [tuple(map(float, line.split(","))) for line in lines[1:]]
        assert [v[0] for v in values] == [0.0, 0.25, 0.5, 0.75, 1.0]
        for b, r in values:
            assert r == pytest.approx(qubit_sweep_closed_form(b), abs=1e-10)
        results = [v[1] for v in values]
        assert results == sorted(results, reverse=True)

    def test_comma_grid_and_json_format(self, qubit_file, capsys):
        code, out, _ = run_cli(capsys, "sweep", qubit_file, "--family", "merge",
                               "--grid", "0,1", "--format", "json")
        assert code == 0
        docs = [json.loads(line) for line in out.strip().splitlines()]
        assert docs[0]["observational_ergotropy"] == pytest.approx(0.5, abs=1e-12)
        assert docs[1]["observational_ergotropy"] == pytest.approx(0.25, abs=1e-12)

    def test_mix_family_on_named_measurement(self, qubit_file, capsys):
        code, out, _ = run_cli(capsys, "sweep", qubit_file, "--family", "mix",
                               "--grid", "0:1:3", "--measurement", "computational")
        assert code == 0
        assert len(out.strip().splitlines()) == 4

    def test_unknown_family(self, qubit_file, capsys):
        code, _, err = run_cli(capsys, "sweep", qubit_file, "--family", "nope", "--grid", "0:1:3")
        assert code == 2
        assert "unknown family" in err

    @pytest.mark.parametrize("grid", ["", "0:1", "a,b", "0:1:0"])
    def test_invalid_grid(self, qubit_file, capsys, grid):
        code, _, err = run_cli(capsys, "sweep", qubit_file, "--family", "merge", "--grid", grid)
        assert code == 2

    def test_out_of_range_parameter(self, qubit_file, capsys):
        code, _, err = run_cli(capsys, "sweep", qubit_file, "--family", "merge", "--grid", "0:2:3")
        assert code == 2
        assert "[0, 1]" in err

    def test_merge_needs_two_outcomes(self, qubit_file, capsys):
        code, _, err = run_cli(capsys, "sweep", qubit_file, "--family", "merge",
                               "--grid", "0:1:3", "--measurement", "trivial")
        assert code == 2
        assert "2-outcome" in err


class TestVerify:
    def test_single_claim_single_trial(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "theorem1", "--trials", "1", "--seed", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 1
        doc = json.loads(lines[0])
        assert doc["claim"] == "theorem1"
        assert doc["violations"] == 0

    def test_all_claims(self, capsys):
        code, out, err = run_cli(capsys, "verify", "all", "--d", "2", "--n", "2",
                                 "--trials", "20", "--seed", "3")
        assert code == 0
        docs = [json.loads(line) for line in out.strip().splitlines()]
        assert [d["claim"] for d in docs] == ["theorem1", "theorem2", "theorem3", "lemma1", "schur"]
        assert all(d["violations"] == 0 for d in docs)
        assert "trials" in err  # timing goes to stderr

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "schur", "--trials", "10", "--seed", "2",
                               "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "claim,trials,violations,worst_margin"
        assert lines[1].startswith("schur,10,0,")

    def test_violations_exit_code(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "theorem2", "--trials", "20", "--seed", "11",
                               "--tol", "1e-300")
        assert code == 1
        assert json.loads(out)["violations"] > 0

    def test_bogus_claim(self, capsys):
        code, _, err = run_cli(capsys, "verify", "bogus")
        assert code == 2
        assert "unknown claim" in err

    def test_invalid_config(self, capsys):
        code, _, err = run_cli(capsys, "verify", "schur", "--trials", "0")
        assert code == 2

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "audit.jsonl"
        code, out, _ = run_cli(capsys, "verify", "schur", "--trials", "5", "--seed", "4",
                               "--output", str(target))
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["claim"] == "schur"


def test_povm_json_round_trip(tmp_path, capsys):
    # a POVM serialized with the library loads back through an instance file
    import numpy as np

    from ergokit.instances import load_instance, matrix_to_json, povm_to_json
    from ergokit.measurement import StochasticMatrix, computational_basis, post_process

    coarse = post_process(computational_basis(2), StochasticMatrix(np.array([[0.5, 1.0], [0.5, 0.0]])))
    doc = {
        "dimension": 2,
        "hamiltonian": matrix_to_json(np.diag([0.0, 1.0])),
        "state": matrix_to_json(np.diag([0.25, 0.75])),
        "measurements": {"coarse": povm_to_json(coarse)},
    }
    path = tmp_path / "roundtrip.json"
    path.write_text(json.dumps(doc))
    loaded = load_instance(path)
    for original, reloaded in zip(coarse.elements, loaded.measurements["coarse"].elements):
        assert np.max(np.abs(original - reloaded)) == 0.0
    code, out, _ = run_cli(capsys, "report", str(path), "--measurement", "coarse")
    assert code == 0
    assert json.loads(out)["observational"] == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_identical_invocations_are_byte_identical():
    cmd = [sys.executable, "-m", "ergokit", "verify", "all", "--d", "2", "--n", "3",
           "--trials", "25", "--seed", "9"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    assert first.returncode == 0 and second.returncode == 0
    assert first.stdout == second.stdout


def test_usage_error_exits_2():
    proc = subprocess.run([sys.executable, "-m", "ergokit"], capture_output=True)
    assert proc.returncode == 2
