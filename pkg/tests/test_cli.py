import json
import subprocess
import sys

import jsonschema
import pytest

from iontrapqc.cli import OUTPUT_DIR_ENV, main
from iontrapqc.pulse.gates import dump_sequence, hadamard_sequence
from iontrapqc.schemas import load_schema


@pytest.fixture
def seq_file(tmp_path):
    path = tmp_path / "seq.json"
    dump_sequence(hadamard_sequence(1), path)
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


JSON_COMMANDS = [
    ("species", ["species"]),
    ("chain", ["chain", "--n", "3", "--axial-khz", "200"]),
    ("trap", ["trap"]),
    ("trap", ["trap", "--temperature-k", "85e-6", "--spot-um", "21.6", "--ions", "2", "--radial-mhz", "5"]),
    ("laser", ["laser"]),
    ("laser", ["laser", "--scheme", "raman", "--raman-detuning-mhz", "100", "--pump-projection", "1", "--stokes-projection", "-1"]),
    ("pulse run", ["pulse", "run", "--seq", "SEQ", "--shots", "100"]),
    ("pulse cnot-verify", ["pulse", "cnot-verify"]),
    ("pulse scan", ["pulse", "scan", "--format", "json", "--tu-range", "10", "20", "2"]),
    ("shor factor", ["shor", "factor", "--n", "15", "--seed", "7"]),
    ("shor estimate", ["shor", "estimate", "--bits", "430", "--clock-mhz", "100"]),
    ("shor qft-demo", ["shor", "qft-demo", "--format", "json"]),
]


def _argv(argv, seq_file):
    return [seq_file if a == "SEQ" else a for a in argv]


@pytest.mark.parametrize("schema, argv", JSON_COMMANDS)
def test_json_output_validates(capsys, seq_file, schema, argv):
    code, out, err = run(capsys, _argv(argv, seq_file))
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema(schema))
    assert doc["command"] == schema
    assert "config" in doc and "version" in doc


@pytest.mark.parametrize("schema, argv", JSON_COMMANDS)
def test_repeated_runs_byte_identical(capsys, seq_file, schema, argv):
    first = run(capsys, _argv(argv, seq_file))[1]
    second = run(capsys, _argv(argv, seq_file))[1]
    assert first == second


def test_chain_positions(capsys):
    doc = json.loads(run(capsys, ["chain", "--ion", "ca40", "--n", "3", "--axial-khz", "200"])[1])
    assert doc["result"]["scaled_positions"] == pytest.approx([-1.0772, 0.0, 1.0772], abs=1e-4)


def test_estimate_wall_clock(capsys):
    doc = json.loads(run(capsys, ["shor", "estimate", "--bits", "430", "--clock-mhz", "100"])[1])
    assert doc["result"]["wall_clock"] == pytest.approx(19.1, abs=0.05)
    assert doc["result"]["nfs_fleet"]["days"] == pytest.approx(18.0, rel=0.1)


def test_cnot_verify_fidelity(capsys):
    doc = json.loads(run(capsys, ["pulse", "cnot-verify", "--report", "json"])[1])
    assert doc["result"]["fidelity"] >= 1 - 1e-10
    assert doc["result"]["passed"] is True
    assert len(doc["result"]["matrix"]) == 4


def test_factor_output(capsys):
    doc = json.loads(run(capsys, ["shor", "factor", "--n", "21", "--seed", "3"])[1])
    assert doc["result"]["factors"] == [3, 7]


def test_conventions_block(capsys):
    doc = json.loads(run(capsys, ["trap", "--conventions"])[1])
    assert "frequency_inputs" in doc["conventions"]


@pytest.mark.parametrize(
    "argv, header",
    [
        (["pulse", "scan", "--tu-range", "10", "20", "2"], "t_u_s,multiple_of_bound,infidelity"),
        (["shor", "qft-demo"], "value,probability"),
        (["chain", "--n", "4", "--format", "csv"], "ion,position_um,scaled_position"),
        (["chain", "--n", "2", "--sweep-khz", "100", "500", "3"], "axial_khz,min_spacing_fit_um,min_spacing_exact_um"),
    ],
)
def test_csv_headers(capsys, argv, header):
    code, out, _ = run(capsys, argv)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# iontrapqc ")
    assert lines[1].startswith("# config: ")
    assert lines[2] == header


def test_qft_demo_peaks(capsys):
    out = run(capsys, ["shor", "qft-demo", "--qubits", "8", "--period", "4"])[1]
    rows = [line.split(",") for line in out.splitlines()[3:]]
    probs = {int(v): float(p) for v, p in rows}
    assert sum(probs[k] for k in (0, 64, 128, 192)) > 0.99


@pytest.mark.parametrize("group_argv", [["species"], ["chain"], ["trap"], ["laser"], ["pulse", "cnot-verify"], ["shor", "estimate"]])
def test_reference_examples_pass(capsys, group_argv):
    code, out, _ = run(capsys, group_argv + ["--reference-examples"])
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema("reference_examples"))
    assert code == 0
    assert all(row["passed"] for row in doc["reference_examples"])


def test_reference_examples_csv(capsys):
    code, out, _ = run(capsys, ["chain", "--reference-examples", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[2] == "check,value,expected,tolerance,mode,status"


@pytest.mark.parametrize(
    "argv, code, kind",
    [
        (["chain", "--bogus"], 2, "UsageError"),
        (["nonsense"], 2, "UsageError"),
        (["chain", "--n", "0"], 3, "ValueError"),
        (["shor", "factor", "--n", "17"], 3, "PrimeModulusError"),
        (["pulse", "run", "--seq", "/nonexistent/seq.json"], 3, "FileNotFoundError"),
        (["species", "--ion", "unobtainium"], 3, "KeyError"),
    ],
)
def test_errors_are_json_on_stderr(capsys, argv, code, kind):
    with pytest.raises(SystemExit) if code == 2 else _nullcontext() as info:
        result = main(argv)
    status = info.value.code if code == 2 else result
    out, err = capsys.readouterr()
    assert status == code
    assert out == ""
    doc = json.loads(err)
    jsonschema.validate(doc, load_schema("error"))
    assert doc["error"]["type"] == kind


def test_output_file(capsys, tmp_path):
    target = tmp_path / "chain.json"
    code, out, _ = run(capsys, ["chain", "--output", str(target)])
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "chain"


def test_output_dir_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(capsys, ["shor", "estimate"])
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "shor_estimate.json").read_text())["result"]["qubit_count"] == 2154


def test_warnings_captured(capsys):
    doc = json.loads(run(capsys, ["laser", "--ions", "1", "--axial-khz", "5", "--projection-deg", "90"])[1])
    assert any("eta/sqrt(N)" in w for w in doc["warnings"])


def test_trap_flags_large_q(capsys):
    doc = json.loads(run(capsys, ["trap", "--rf-volts", "5000"])[1])
    assert "pseudopotential_suspect" in doc["result"]["flags"]


def test_pulse_run_state_and_counts(capsys, seq_file):
    doc = json.loads(run(capsys, ["pulse", "run", "--seq", seq_file, "--shots", "1000", "--seed", "2"])[1])
    counts = doc["result"]["counts"]
    assert set(counts) == {"00", "10"}
    assert sum(counts.values()) == 1000


def test_console_script_is_deterministic(tmp_path):
    argv = [sys.executable, "-m", "iontrapqc.cli", "shor", "factor", "--n", "15", "--seed", "11"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["result"]["success"] is True


class _nullcontext:
    def __enter__(self):
        return None

    def __exit__(self, *exc):
        return False
