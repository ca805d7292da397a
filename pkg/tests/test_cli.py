import json
import subprocess
import sys
from pathlib import Path

from gensupport.cli import main
from gensupport.instance import load

DATA = Path(__file__).parent / "data"


def test_solve_prints_solutions_and_stats(tmp_path, capsys):
    out = tmp_path / "stats.json"
    assert main(["solve", str(DATA / "sum_table.inst"), "--all", "--stats-json", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["x=0 y=1 z=1", "x=1 y=0 z=1", "x=1 y=1 z=0"]
    stats = json.loads(out.read_text())
    assert set(stats) == {"nodes", "solutions", "prop_calls", "wall_ms", "limit_hit"}
    assert stats["solutions"] == 3 and stats["limit_hit"] is False


def test_solve_node_limit_and_modes(tmp_path):
    inst = tmp_path / "b.inst"
    from gensupport.bench import gen_benchmark
    from gensupport.instance import dump

    dump(gen_benchmark(12, 2), inst)
    for mode in ("watched", "static"):
        out = tmp_path / f"{mode}.json"
        assert main(["solve", str(inst), "--all", "--node-limit", "50", "--occ-mode", mode,
                     "--engine", "python", "--stats-json", str(out)]) == 0
        st = json.loads(out.read_text())
        assert st["nodes"] == 50 and st["limit_hit"]


def test_check_gac(capsys):
    assert main(["check-gac", str(DATA / "element.inst")]) == 0
    assert "GAC" in capsys.readouterr().out
    # every value of the three-row table has a supporting row
    assert main(["check-gac", str(DATA / "sum_table.inst")]) == 0


def test_check_gac_root_failure(tmp_path, capsys):
    p = tmp_path / "f.inst"
    p.write_text("var x 1 1\nvar y 1 1\nvec V x y\noccurrenceleq V 1 1\n")
    assert main(["check-gac", str(p)]) == 1
    assert "fails" in capsys.readouterr().out


def test_verify_clean_family(tmp_path, capsys):
    rc = main(["verify", "--family", "occleq", "--max-vars", "2", "--max-val", "2",
               "--check", "schema", "--out-dir", str(tmp_path)])
    assert rc == 0
    assert "ok" in capsys.readouterr().out
    assert not list(tmp_path.iterdir())


def test_verify_writes_replayable_counterexamples(tmp_path, capsys):
    rc = main(["verify", "--family", "element", "--max-vars", "1", "--max-val", "1",
               "--check", "btstable", "--out-dir", str(tmp_path)])
    assert rc == 1
    files = sorted(tmp_path.iterdir())
    assert files
    for f in files:
        inst = load(f)
        assert len(inst.constraints) == 1
        assert main(["check-gac", str(f)]) in (0, 1)


def test_bench_csv(tmp_path, capsys):
    csv_path = tmp_path / "r.csv"
    assert main(["bench", "--n", "10", "--copies", "3", "--limits", "0,200",
                 "--engine", "python", "--report-csv", str(csv_path)]) == 0
    rows = csv_path.read_text().splitlines()
    assert rows[0].startswith("limit,mode,nodes")
    assert len(rows) == 1 + 4


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.inst"
    p.write_text("var x 1\n")
    assert main(["solve", str(p)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "gensupport", "solve", str(DATA / "element.inst")],
                       capture_output=True, text=True, check=True)
    assert r.stdout.strip() == "x=5 y=0 z=5"
