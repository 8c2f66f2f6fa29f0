import json

import pytest

from pulseforge import cli, io, library
from pulseforge import circuit as ir


@pytest.fixture
def device_file(tmp_path, device):
    path = tmp_path / "device.json"
    path.write_text(io.dumps(io.device_to_dict(device)))
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_synth_cnot_exit_zero(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "synth", "--target", "cnot", "--n", "1", "--alphabet", "cx01", "--restarts", "2", "--out", str(out))
    assert code == 0
    results = json.loads(out.read_text())
    assert results and all(r["feasible"] for r in results)
    assert set(results[0]) >= {"config", "beta", "residual_sq", "penalty", "infidelity", "feasible"}
    manifest = json.loads((tmp_path / "r.json.manifest.json").read_text())
    assert manifest["command"] == "synth" and manifest["seed"] == 0 and "wall_time_s" in manifest


def test_synth_negative_n_is_usage_error(capsys):
    assert run(capsys, "synth", "--target", "cnot", "--n", "-1")[0] == 2


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["synth", "--bogus"])
    assert info.value.code == 2


def test_synth_infeasible_exit_three(capsys):
    code, out, _ = run(capsys, "synth", "--target", "toffoli", "--n", "1", "--restarts", "1", "--quiet")
    assert code == 3
    assert json.loads(out)[0]["feasible"] is False


def test_synth_results_identical_across_jobs(capsys, tmp_path):
    paths = []
    for jobs in (1, 4):
        path = tmp_path / f"j{jobs}.json"
        code, _, _ = run(capsys, "synth", "--target", "cnot_3q", "--n", "2", "--restarts", "2", "--seed", "3",
                         "--max-iterations", "40", "--jobs", str(jobs), "--out", str(path), "--quiet")
        paths.append(path.read_bytes())
    assert paths[0] == paths[1]


def test_seed_from_environment(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("PULSEFORGE_SEED", "9")
    out = tmp_path / "r.json"
    run(capsys, "synth", "--target", "cnot", "--n", "1", "--alphabet", "cx01", "--restarts", "1", "--out", str(out), "--quiet")
    assert json.loads((tmp_path / "r.json.manifest.json").read_text())["seed"] == 9
    monkeypatch.setenv("PULSEFORGE_SEED", "x")
    assert run(capsys, "synth", "--target", "cnot", "--n", "1", "--quiet")[0] == 2


def test_opt_reduces_canonical_toffoli(capsys, tmp_path):
    out = tmp_path / "o.json"
    code, stdout, err = run(capsys, "opt", "--in", "canonical_toffoli", "--out", str(out))
    assert code == 0
    report = json.loads(stdout)
    assert report["after"]["native_gate_count"] < report["before"]["native_gate_count"]
    assert "native gates" in err
    assert run(capsys, "verify", "--in", str(out), "--target", "toffoli")[0] == 0


def test_opt_passes_none_is_identity(capsys, tmp_path):
    src = tmp_path / "in.json"
    io.save_circuit(library.optimized_toffoli(), src)
    out = tmp_path / "o.json"
    assert run(capsys, "opt", "--in", str(src), "--passes", "none", "--out", str(out))[0] == 0
    assert out.read_bytes() == src.read_bytes()


def test_opt_length_without_device(capsys, tmp_path):
    assert run(capsys, "opt", "--in", "optimized_toffoli", "--objective", "length")[0] == 2
    missing = str(tmp_path / "missing.json")
    assert run(capsys, "opt", "--in", "optimized_toffoli", "--objective", "length", "--device", missing)[0] == 2


def test_opt_length_with_device(capsys, device_file):
    code, out, _ = run(capsys, "opt", "--in", "canonical_toffoli", "--objective", "length", "--device", device_file)
    assert code == 0
    report = json.loads(out)
    assert report["after"]["length_ns"] <= report["before"]["length_ns"]


def test_verify_exit_codes(capsys, tmp_path):
    assert run(capsys, "verify", "--in", "optimized_toffoli", "--target", "toffoli")[0] == 0
    xfile = tmp_path / "x.json"
    io.save_circuit(ir.Circuit(1, (ir.x(0),)), xfile)
    assert run(capsys, "verify", "--in", str(xfile), "--target", "identity")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "verify", "--in", str(bad), "--target", "toffoli")[0] == 2


def test_report_empty_circuit(capsys, tmp_path, device_file):
    empty = tmp_path / "e.json"
    io.save_circuit(ir.Circuit(2, ()), empty)
    code, out, _ = run(capsys, "report", "--in", str(empty), "--device", device_file)
    rep = json.loads(out)
    assert code == 0
    assert (rep["length_ns"], rep["total_rotation_deg"], rep["native_gate_count"]) == (0.0, 0.0, 0)


def test_report_reference_proxy_numbers(capsys):
    rep = json.loads(run(capsys, "report", "--in", "optimized_toffoli", "--quiet")[1])
    assert (rep["native_gate_count"], rep["total_rotation_deg"]) == (17, 2250.0)
    rep = json.loads(run(capsys, "report", "--in", "canonical_toffoli", "--quiet")[1])
    assert (rep["native_gate_count"], rep["total_rotation_deg"]) == (28, 3960.0)


def test_estimate_perfect_device(capsys, tmp_path):
    dev = tmp_path / "perfect.json"
    dev.write_text(json.dumps({"fidelities": {"toffoli": 1.0, "u3": 1.0}}))
    stats = tmp_path / "s.json"
    stats.write_text(json.dumps({"label": "grovers", "counts": {"toffoli": 84, "u3": 78}, "delta_ns": 0}))
    code, out, _ = run(capsys, "estimate", "--device", str(dev), "--stats", str(stats))
    assert code == 0
    assert json.loads(out)["variants"][0]["probability"] == 1.0


def test_estimate_missing_fidelity(capsys, tmp_path):
    dev = tmp_path / "d.json"
    dev.write_text(json.dumps({"fidelities": {}}))
    stats = tmp_path / "s.json"
    stats.write_text(json.dumps({"counts": {"toffoli": 1}}))
    assert run(capsys, "estimate", "--device", str(dev), "--stats", str(stats))[0] == 2


def test_estimate_circuits_and_benchmarks(capsys, device_file):
    code, out, _ = run(capsys, "estimate", "--device", device_file, "--in", "canonical_toffoli", "--in", "optimized_toffoli")
    variants = json.loads(out)["variants"]
    assert code == 0 and variants[0]["label"] == "optimized_toffoli"
    code, out, err = run(capsys, "estimate", "--device", device_file, "--benchmarks")
    assert code == 0 and len(json.loads(out)["rows"]) == 10 and "geometric mean" in err


def test_decompose_then_verify(capsys, tmp_path):
    out = tmp_path / "d.json"
    assert run(capsys, "decompose-ccx", "--in", "ccx", "--impl", "optimized", "--out", str(out))[0] == 0
    assert run(capsys, "verify", "--in", str(out), "--target", "toffoli")[0] == 0
    assert run(capsys, "decompose-ccx", "--in", "ccx", "--coupling", "0-2")[0] == 2


def test_outputs_are_deterministic(capsys, device_file):
    first = run(capsys, "opt", "--in", "canonical_toffoli", "--device", device_file, "--quiet")[1]
    second = run(capsys, "opt", "--in", "canonical_toffoli", "--device", device_file, "--quiet")[1]
    assert first == second
