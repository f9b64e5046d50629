import csv
import json

import pytest

from mpcc import cli, instance_from_json, solution_violations


def run_cli(*argv):
    return cli.run(list(argv))


def gen_instance(tmp_path, n=10, m=2, k=6, seed=7):
    path = tmp_path / "instance.json"
    code = run_cli(
        "gen", "--n", str(n), "--m", str(m), "--k", str(k),
        "--side", "40", "--seed", str(seed), "--out", str(path),
    )
    assert code == cli.EXIT_OK
    return path


def test_gen_writes_valid_instance(tmp_path, capsys):
    path = gen_instance(tmp_path)
    out = capsys.readouterr().out
    assert "seed=7" in out
    inst = instance_from_json(path.read_text())
    assert inst.n == 10 and inst.m == 2 and inst.k == 6


def test_gen_is_reproducible(tmp_path):
    a = gen_instance(tmp_path, seed=3)
    text_a = a.read_text()
    b_path = tmp_path / "again.json"
    run_cli("gen", "--n", "10", "--m", "2", "--k", "6", "--side", "40",
            "--seed", "3", "--out", str(b_path))
    assert b_path.read_text() == text_a


def test_gen_rejects_capacity_shortfall(tmp_path, capsys):
    code = run_cli("gen", "--n", "5", "--m", "1", "--k", "4",
                   "--out", str(tmp_path / "x.json"))
    assert code == cli.EXIT_VALIDATION
    assert "m*k" in capsys.readouterr().err


@pytest.mark.parametrize("alg", ["mlr", "nca"])
def test_solve_then_check_round_trip(tmp_path, capsys, alg):
    inst_path = gen_instance(tmp_path)
    sol_path = tmp_path / "solution.json"
    code = run_cli("solve", "--alg", alg, "--in", str(inst_path),
                   "--out", str(sol_path))
    assert code == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "total_power=" in out and "variance=" in out
    code = run_cli("check", "--instance", str(inst_path),
                   "--solution", str(sol_path))
    assert code == cli.EXIT_OK


def test_solve_known_instance_total(tmp_path, capsys):
    inst_path = tmp_path / "tiny.json"
    inst_path.write_text(
        '{"c": 1, "alpha": 2, "k": 2, "aps": [[0, 0]], "tds": [[1, 0], [2, 0]]}'
    )
    code = run_cli("solve", "--alg", "mlr", "--in", str(inst_path),
                   "--out", str(tmp_path / "sol.json"))
    assert code == cli.EXIT_OK
    assert "total_power=4" in capsys.readouterr().out


def test_solve_writes_trace(tmp_path):
    inst_path = gen_instance(tmp_path)
    trace_path = tmp_path / "trace.jsonl"
    code = run_cli("solve", "--alg", "mlr", "--in", str(inst_path),
                   "--out", str(tmp_path / "sol.json"), "--trace", str(trace_path))
    assert code == cli.EXIT_OK
    lines = trace_path.read_text().splitlines()
    assert 1 <= len(lines) <= 10
    assert all({"iter", "disk", "ratio", "covered", "removed"} <= set(json.loads(l))
               for l in lines)


def test_trace_requires_mlr(tmp_path, capsys):
    inst_path = gen_instance(tmp_path)
    code = run_cli("solve", "--alg", "nca", "--in", str(inst_path),
                   "--out", str(tmp_path / "sol.json"), "--trace", str(tmp_path / "t"))
    assert code == cli.EXIT_USAGE


def test_solve_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    code = run_cli("solve", "--alg", "mlr", "--in", str(bad),
                   "--out", str(tmp_path / "sol.json"))
    assert code == cli.EXIT_PARSE


def test_solve_validation_exit_code(tmp_path, capsys):
    bad = tmp_path / "invalid.json"
    bad.write_text('{"c": 1, "alpha": 2, "k": 1, "aps": [[0, 0]], "tds": [[1, 0], [2, 0]]}')
    code = run_cli("solve", "--alg", "mlr", "--in", str(bad),
                   "--out", str(tmp_path / "sol.json"))
    assert code == cli.EXIT_VALIDATION


def test_exact_budget_exit_code(tmp_path, capsys):
    inst_path = gen_instance(tmp_path, n=12, m=3, k=4)
    code = run_cli("solve", "--alg", "exact", "--in", str(inst_path),
                   "--out", str(tmp_path / "sol.json"), "--max-nodes", "4")
    assert code == cli.EXIT_BUDGET
    assert "budget exceeded" in capsys.readouterr().err
    assert not (tmp_path / "sol.json").exists()


def test_exact_solves_small_instance(tmp_path, capsys):
    inst_path = tmp_path / "tiny.json"
    inst_path.write_text(
        '{"c": 1, "alpha": 2, "k": 1, "aps": [[0, 0], [10, 0]], '
        '"tds": [[1, 0], [9, 0]]}'
    )
    code = run_cli("solve", "--alg", "exact", "--in", str(inst_path),
                   "--out", str(tmp_path / "sol.json"))
    assert code == cli.EXIT_OK
    assert "total_power=2" in capsys.readouterr().out


def test_check_flags_dropped_td(tmp_path, capsys):
    inst_path = gen_instance(tmp_path)
    sol_path = tmp_path / "solution.json"
    run_cli("solve", "--alg", "mlr", "--in", str(inst_path), "--out", str(sol_path))
    doc = json.loads(sol_path.read_text())
    victim = doc["assignments"][0]["covered"].pop()
    sol_path.write_text(json.dumps(doc))
    capsys.readouterr()
    code = run_cli("check", "--instance", str(inst_path), "--solution", str(sol_path))
    assert code == cli.EXIT_INFEASIBLE
    assert f"TD {victim} is not covered" in capsys.readouterr().out


def test_check_flags_duplicate_ap(tmp_path, capsys):
    inst_path = gen_instance(tmp_path)
    sol_path = tmp_path / "solution.json"
    run_cli("solve", "--alg", "mlr", "--in", str(inst_path), "--out", str(sol_path))
    doc = json.loads(sol_path.read_text())
    doc["assignments"].append(dict(doc["assignments"][0], covered=[]))
    sol_path.write_text(json.dumps(doc))
    capsys.readouterr()
    code = run_cli("check", "--instance", str(inst_path), "--solution", str(sol_path))
    assert code == cli.EXIT_INFEASIBLE
    assert "more than one disk" in capsys.readouterr().out


def test_check_distinguishes_parse_errors(tmp_path):
    inst_path = gen_instance(tmp_path)
    bad = tmp_path / "bad.json"
    bad.write_text('{"total_power": []}')
    assert run_cli("check", "--instance", str(inst_path),
                   "--solution", str(bad)) == cli.EXIT_PARSE


def _strip_wall_ms(path):
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        r.pop("wall_ms")
    return rows


def test_bench_preset_truncated_and_reproducible(tmp_path, capsys):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    for out in (out1, out2):
        code = run_cli("bench", "--preset", "1", "--max-n", "50",
                       "--trials", "2", "--out-dir", str(out))
        assert code == cli.EXIT_OK
    # identical modulo the timing column, which necessarily jitters
    assert _strip_wall_ms(out1 / "results.csv") == _strip_wall_ms(out2 / "results.csv")
    rows = _strip_wall_ms(out1 / "results.csv")
    assert {r["n"] for r in rows} == {"20", "50"}
    assert len(rows) == 2 * 2 * 2
    for name in ("mean_total_power.csv", "mean_variance.csv"):
        a = (out1 / name).read_text()
        assert a == (out2 / name).read_text()
        assert a.splitlines()[0] == "n,mlr,nca"


def test_bench_config_file(tmp_path):
    cfg_path = tmp_path / "sweep.json"
    cfg_path.write_text(json.dumps([
        {"n": 10, "m": 2, "k": 6, "side": 40, "trials": 2, "seed": 5},
        {"n": 14, "m": 3, "k": 6, "side": 40, "trials": 2, "seed": 5},
    ]))
    out = tmp_path / "out"
    assert run_cli("bench", "--config", str(cfg_path),
                   "--out-dir", str(out)) == cli.EXIT_OK
    rows = _strip_wall_ms(out / "results.csv")
    assert len(rows) == 2 * 2 * 2


def test_bench_rejects_invalid_config(tmp_path, capsys):
    cfg_path = tmp_path / "sweep.json"
    cfg_path.write_text(json.dumps([{"n": 10, "m": 1, "k": 2, "side": 40}]))
    assert run_cli("bench", "--config", str(cfg_path),
                   "--out-dir", str(tmp_path / "out")) == cli.EXIT_VALIDATION


def test_solution_files_match_library_checker(tmp_path):
    inst_path = gen_instance(tmp_path)
    sol_path = tmp_path / "solution.json"
    run_cli("solve", "--alg", "nca", "--in", str(inst_path), "--out", str(sol_path))
    inst = instance_from_json(inst_path.read_text())
    assert solution_violations(sol_path.read_text(), inst) == []
