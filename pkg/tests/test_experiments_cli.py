import json
import math
from pathlib import Path

import pytest

from irsroute import cli
from irsroute.experiments import (
    COLUMNS,
    SolutionMismatch,
    cmd_evaluate,
    cmd_route,
    cmd_sweep,
    parse_values,
    read_csv,
    single_reflection_baseline,
    solution_from_json,
    solution_to_json,
    write_csv,
)
from irsroute.scenario import load_bundled

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def scene():
    return load_bundled("paperlike-7irs")


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_route_csv_matches_golden(capsys):
    code, out, err = _run(capsys, "route", "paperlike-7irs")
    assert code == 0
    assert out == (FIXTURES / "golden_route.csv").read_text()
    assert "Q=3" in err


def test_sweep_csv_matches_golden(capsys):
    code, out, _ = _run(capsys, "sweep", "paperlike-7irs", "--param", "k", "--values", "1,2,3,4",
                        "--n-seeds", "200")
    assert code == 0
    assert out == (FIXTURES / "golden_sweep_k.csv").read_text()


def test_golden_gamma_consistent_with_sum_of_squares():
    row = read_csv((FIXTURES / "golden_route.csv").read_text())[0]
    amps_db = [float(x) for x in row["amplitudes_db"].split(";")]
    # 30 dBm transmit power is 1 W, so gamma in dBm is 10 log10(sum |h|^2) + 30
    expect = 10 * math.log10(sum(10 ** (a / 10) for a in amps_db)) + 30.0
    assert float(row["gamma_free_dbm"]) == pytest.approx(expect, abs=2e-6)


def test_out_file_puts_summary_on_stdout(capsys, tmp_path):
    out_csv = tmp_path / "r.csv"
    code, out, _ = _run(capsys, "route", "single-irs", "--out", str(out_csv))
    assert code == 0
    assert out.startswith("status: ok")
    assert out_csv.read_text().splitlines()[0] == ",".join(COLUMNS)


def test_infeasible_exit_code(capsys):
    code, out, err = _run(capsys, "route", "blocked")
    assert code == 3
    assert read_csv(out)[0]["status"] == "infeasible"
    assert "infeasible" in err


def test_errors_exit_one(capsys, tmp_path):
    assert _run(capsys, "route", str(tmp_path / "missing.yaml"))[0] == 1
    assert _run(capsys, "sweep", "two-irs", "--param", "k", "--values", "a,b")[0] == 1
    assert _run(capsys, "sweep", "two-irs", "--param", "k", "--values", "1.5")[0] == 1
    assert _run(capsys, "route", "two-irs", "--k", "0")[0] == 1
    with pytest.raises(SystemExit):
        cli.main(["sweep", "two-irs", "--param", "nope", "--values", "1"])


def test_solution_roundtrip_through_cli(capsys, tmp_path):
    sol_path = tmp_path / "sol.json"
    assert _run(capsys, "route", "paperlike-7irs", "--solution-out", str(sol_path))[0] == 0
    doc = json.loads(sol_path.read_text())
    assert doc["paths"] == [[1, 4], [3, 7], [2, 5]]
    code, out, _ = _run(capsys, "evaluate", "paperlike-7irs", "--solution", str(sol_path),
                        "--n-seeds", "50")
    assert code == 0
    row = read_csv(out)[0]
    assert row["gamma_free_dbm"] == "-45.161168"
    assert row["gap_db"] == "0.000035"
    # the same file against another deployment is refused
    assert _run(capsys, "evaluate", "two-irs", "--solution", str(sol_path))[0] == 1


def test_solution_from_json_validation(scene):
    sol, _ = cmd_route(scene)
    text = solution_to_json(scene, sol)
    again = solution_from_json(text, scene)
    assert again.gamma_u == pytest.approx(sol.gamma_u, rel=1e-12)
    doc = json.loads(text)
    doc["paths"][1] = [1, 3]
    with pytest.raises(SolutionMismatch):
        solution_from_json(json.dumps(doc), scene)  # shares IRS 1 with the first path
    doc = json.loads(text)
    doc["alphas"] = [0.5, 0.5, 0.5]
    with pytest.raises(SolutionMismatch):
        solution_from_json(json.dumps(doc), scene)


def test_figures_written(capsys, tmp_path):
    png = tmp_path / "scene.png"
    assert _run(capsys, "route", "paperlike-7irs", "--figure", str(png))[0] == 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    sweep_png = tmp_path / "sweep.png"
    assert _run(capsys, "sweep", "two-irs", "--param", "m0", "--values", "8,12",
                "--n-seeds", "10", "--figure", str(sweep_png))[0] == 0
    assert sweep_png.stat().st_size > 1000


def test_timing_column_only_on_request(scene):
    _, row = cmd_route(scene)
    assert row.runtime_ms == ""
    _, timed = cmd_route(scene, timing=True)
    assert float(timed.runtime_ms) > 0


def test_evaluate_random_phase_below_coherent(scene):
    row = cmd_evaluate(scene, n_random=300)
    assert float(row.random_mean_dbm) < float(row.gamma_free_dbm)
    assert float(row.random_max_dbm) <= float(row.gamma_free_dbm) + 1e-6


def test_rho_sweep_baseline_decreases_with_exponent():
    rows = cmd_sweep(load_bundled("paperlike-7irs"), "rho", [2.2, 3.0, 3.8], n_random=0)
    base = [float(r.baseline_dbm) for r in rows]
    assert base[0] > base[1] > base[2]
    assert len({r.gamma_free_dbm for r in rows}) == 1  # routing does not depend on rho


def test_single_reflection_baseline_deterministic():
    sc = load_bundled("paperlike-7irs")
    assert single_reflection_baseline(sc, 3.0, 1) == single_reflection_baseline(sc, 3.0, 1)


def test_m0_sweep_rejects_fraction():
    with pytest.raises(ValueError):
        cmd_sweep(load_bundled("two-irs"), "m0", [7.5])
    with pytest.raises(ValueError):
        cmd_sweep(load_bundled("two-irs"), "gain", [1])
    with pytest.raises(ValueError):
        parse_values(",")


def test_csv_roundtrip_preserves_columns(scene):
    _, row = cmd_route(scene)
    parsed = read_csv(write_csv([row]))
    assert list(parsed[0]) == COLUMNS
    assert parsed[0]["paths"] == "0-1-4-8|0-3-7-8|0-2-5-8"
