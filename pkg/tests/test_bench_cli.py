import json
from pathlib import Path

import pytest

from ercheck import bench
from ercheck.cli import main
from ercheck.instances import GenParams, gen_random, save

FIXTURES = Path(__file__).parent / "fixtures"


def test_csv_schema_round_trip():
    rows = bench.run_bench("random10", ["tt+sweep", "tt+baptiste"], count=3)
    assert len(rows) == 6
    text = bench.write_csv(rows)
    assert text.splitlines()[0] == ",".join(bench.CSV_COLUMNS)
    assert bench.read_csv(text) == rows


def test_rows_are_deterministic_in_nodes():
    a = bench.run_bench("random10", ["tt+sweep"], count=4)
    b = bench.run_bench("random10", ["tt+sweep"], count=4)
    assert [r.nodes for r in a] == [r.nodes for r in b]


def test_checker_variants_share_node_column():
    rows = bench.run_bench("random10", ["tt+sweep", "tt+baptiste", "tt+cubic"], count=5)
    by = {}
    for r in rows:
        by.setdefault(r.instance, set()).add(r.nodes)
    assert all(len(v) == 1 for v in by.values())


def test_missing_file_gives_error_row(tmp_path):
    good = tmp_path / "a.json"
    save(gen_random(GenParams(5, seed=1)), good)
    bad = tmp_path / "b.json"
    bad.write_text("{broken")
    rows = bench.run_bench(str(tmp_path / "*.json"), ["tt"])
    assert [r.instance for r in rows] == ["a.json", "b.json"]
    assert not rows[0].result.startswith("error")
    assert rows[1].result.startswith("error")
    with pytest.raises(ValueError):
        bench.resolve_suite(str(tmp_path / "none*.json"))
    (missing,) = bench.run_bench(str(tmp_path / "gone.json"), ["tt"])
    assert missing.result.startswith("error")


def test_env_time_limit(monkeypatch):
    monkeypatch.delenv("ERC_TIME_LIMIT", raising=False)
    assert bench.env_time_limit(5.0) == 5.0
    monkeypatch.setenv("ERC_TIME_LIMIT", "30s")
    assert bench.env_time_limit(5.0) == 30.0


def test_interval_reduction_factor_small_sample():
    mean, factor = bench.interval_reduction_factor(200)
    assert 0 < mean <= 8
    assert factor == pytest.approx(15 / mean)


@pytest.fixture
def inst_file(tmp_path):
    path = tmp_path / "inst.json"
    save(gen_random(GenParams(6, seed=3)), path)
    return path


def test_cli_gen_and_check(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert main(["gen", "--n", "8", "--seed", "7", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["activities"]
    code = main(["check", str(out), "--checker", "sweep", "--stats", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == (0 if doc["feasible"] else 1)
    assert "intervals_examined" in doc["resources"][0]


def test_cli_check_exit_codes(inst_file, capsys):
    # this instance is overloaded: every checker must say so
    for checker in ("brute", "cubic", "baptiste", "sweep"):
        assert main(["check", str(inst_file), "--checker", checker]) == 1
    assert main(["check", str(inst_file), "--checker", "sweep", "--no-mirror"]) == 1
    assert main(["check", str(inst_file / "nope")]) == 2


def test_cli_solve_and_filter(tmp_path, capsys):
    path = tmp_path / "p.json"
    save(gen_random(GenParams(8, windows="planted", seed=2)), path)
    assert main(["solve", str(path), "--config", "tt+sweep", "--objective", "makespan",
                 "--time-limit", "30s"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["result"] == "optimal" and doc["proved_optimal"] and "makespan" in doc
    assert main(["solve", str(path), "--config", "tt", "--objective", "makespan",
                 "--node-limit", "1"]) == 3
    capsys.readouterr()
    assert main(["filter", str(path)]) == 0
    assert isinstance(json.loads(capsys.readouterr().out), list)


def test_cli_intervals(inst_file, capsys):
    assert main(["intervals", str(inst_file), "--family", "baptiste"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t1,t2,provenance" and lines[1].endswith(",baptiste")
    assert main(["intervals", str(inst_file), "--pair", "0", "0"]) == 0
    assert capsys.readouterr().out.split()[0] == "A"


def test_cli_convert_and_bench(tmp_path, capsys):
    out = tmp_path / "c.json"
    assert main(["convert", str(FIXTURES / "three_jobs.sm"), "--from", "psplib", "--to", "json",
                 "--out", str(out)]) == 0
    assert json.loads(out.read_text())["capacity"] == 4
    assert main(["convert", str(FIXTURES / "cyclic.sm")]) == 2
    csv_out = tmp_path / "r.csv"
    assert main(["bench", "--suite", "random10", "--count", "2", "--configs", "sweep,baptiste",
                 "--pairs", "100", "--out", str(csv_out)]) == 0
    assert len(bench.read_csv(csv_out.read_text())) == 4
    assert "reduction factor" in capsys.readouterr().err
