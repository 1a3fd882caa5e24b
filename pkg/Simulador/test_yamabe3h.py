import json
import math

import pytest

from Complexo.arquivos import serialize, serialize_packing
from Complexo.triangulacao import Complex, Packing
from Geometria.tetraedro import regular_solid_angle
from Simulador import yamabe3h
from Simulador.autoteste import CheckResult
from Simulador.yamabe3h import EXIT_INPUT, EXIT_NEGATIVE, EXIT_NUMERIC, EXIT_OK, main

VIRTUAL = (0.05, 1.5, 2.0, 2.5, 3.0)


def reject_constant(name):
    raise ValueError(f"constante não JSON: {name}")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out, parse_constant=reject_constant) if out else None)


@pytest.fixture
def virtual_radii(tmp_path):
    path = tmp_path / "virtual.json"
    path.write_bytes(serialize_packing(Packing(VIRTUAL)))
    return str(path)


def test_validate_builtin(capsys):
    code, report = run(capsys, "validate", "builtin:pentachoron")
    assert code == EXIT_OK
    assert report["passed"] is True
    assert report["tetra_count"] == 5
    assert report["manifest"]["status"] == "passed"
    assert len(report["manifest"]["inputs"]["tri_file"]) == 64


def test_validate_pinched_file(capsys, tmp_path):
    first = [tuple(v for v in range(5) if v != skip) for skip in range(5)]
    second = [tuple(v for v in (0, 5, 6, 7, 8) if v != skip) for skip in (0, 5, 6, 7, 8)]
    path = tmp_path / "pinched.json"
    path.write_bytes(serialize(Complex(9, tuple(first + second))))
    code, report = run(capsys, "validate", str(path))
    assert code == EXIT_NEGATIVE
    assert report["passed"] is False
    assert report["failed_checks"] == ["vertex_links"]


def test_validate_corrupted_file(capsys, tmp_path):
    path = tmp_path / "quebrado.json"
    path.write_bytes(b'{"format": "yamabe3h-tri/1",\n "vertex_count": 5,\n "tetrahedra": [[0, 1, 2, 3],\n')
    assert main(["validate", str(path)]) == EXIT_INPUT
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "linha" in captured.err


@pytest.mark.parametrize("argv", [
    ["validate", "nao_existe.json"],
    ["validate", "builtin:torus"],
    ["curvature", "builtin:pentachoron", "--radii", "uniform:abc"],
    ["curvature", "builtin:pentachoron", "--radii", "uniform:-1"],
    ["flow", "builtin:pentachoron", "--dt", "-1"],
    ["solve-regular", "--degree", "0"],
])
def test_invalid_input_exit_code(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == EXIT_INPUT


def test_invalid_radius_environment_is_input_error(capsys, monkeypatch):
    monkeypatch.setenv("YAMABE3H_RADIUS_MIN", "abc")
    assert main(["curvature", "builtin:pentachoron", "--radii", "uniform:1"]) == EXIT_INPUT
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "YAMABE3H_RADIUS_MIN" in captured.err


@pytest.mark.parametrize("argv", [[], ["unknown"], ["flow", "builtin:pentachoron", "--stride", "0"]])
def test_usage_errors_exit_with_input_code(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == EXIT_INPUT


def test_curvature(capsys):
    code, report = run(capsys, "curvature", "builtin:pentachoron", "--radii", "uniform:1")
    assert code == EXIT_OK
    expected = 4.0 * math.pi - 4.0 * regular_solid_angle(1.0)
    assert report["curvature"] == pytest.approx([expected] * 5, abs=1e-12)
    assert report["real_count"] == 5 and report["virtual_count"] == 0
    assert report["manifest"]["config"]["radii"] == "uniform:1"


def test_energy_with_hessian(capsys):
    code, report = run(capsys, "energy", "builtin:pentachoron", "--hessian")
    assert code == EXIT_OK
    assert report["s_rel"] == 0.0
    assert len(report["hessian"]) == 5


def test_energy_hessian_on_virtual_packing(capsys, virtual_radii):
    code, _ = run(capsys, "energy", "builtin:pentachoron", "--radii", virtual_radii, "--hessian")
    assert code == EXIT_INPUT


def test_flow_writes_trace_and_manifest(capsys, tmp_path):
    out = tmp_path / "traco.csv"
    argv = ["flow", "builtin:pentachoron", "--t-max", "0.01", "--no-energy", "--stride", "5", "--out", str(out)]
    code, summary = run(capsys, *argv)
    assert code == EXIT_OK
    assert summary["status"] == "t_max_reached"
    assert summary["samples"] == 3
    assert summary["s_rel_final"] is None
    first = out.read_bytes()
    assert first.startswith(b"t,r_0,")
    manifest = json.loads((tmp_path / "traco.csv.manifest.json").read_text(), parse_constant=reject_constant)
    assert manifest["outputs"][str(out)] == summary["manifest"]["outputs"][str(out)]
    assert manifest["config"]["dt"] == 1e-3
    run(capsys, *argv)
    assert out.read_bytes() == first


def test_flow_non_extended_leaves_real_domain(capsys, virtual_radii):
    code, summary = run(capsys, "flow", "builtin:pentachoron", "--radii", virtual_radii, "--non-extended",
                        "--no-energy")
    assert code == EXIT_NEGATIVE
    assert summary["status"] == "left_real_domain"
    assert summary["virtual_count_final"] == 4


def test_solve_regular(capsys):
    code, report = run(capsys, "solve-regular", "--degree", "23")
    assert code == EXIT_OK
    assert report["t0"] == pytest.approx(0.0837, abs=1e-4)
    assert report["residual"] < 1e-12


def test_solve_regular_without_solution(capsys):
    code, report = run(capsys, "solve-regular", "--degree", "22")
    assert code == EXIT_NEGATIVE
    assert report["status"] == "no_solution"


def test_selfcheck(capsys):
    code, report = run(capsys, "selfcheck", "--samples", "20", "--gradient-samples", "2")
    assert code == EXIT_OK
    assert report["failed"] == []
    assert [check["name"] for check in report["checks"]] == ["jacobian_at_unit", "cosine_agreement",
                                                              "gradient_identities"]


def test_selfcheck_failure_is_numeric(capsys, monkeypatch):
    failing = [CheckResult("cosine_agreement", False, 1.0, 1e-10, 1)]
    monkeypatch.setattr(yamabe3h, "run_selfcheck", lambda *args: failing)
    code, report = run(capsys, "selfcheck")
    assert code == EXIT_NUMERIC
    assert report["failed"] == ["cosine_agreement"]
