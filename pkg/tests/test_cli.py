import subprocess
import sys

import pytest

from smti import TABLE1, read_instance
from smti.bench import read_csv, run_seed
from smti.cli import instance_filename, main
from smti.generator import derive_seed

from conftest import FORCED2, MINIMAL


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in (("table1", TABLE1), ("minimal", MINIMAL), ("forced", FORCED2),
                       ("bad", "smti 2\nm 1: 1\n")):
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_table1(files, capsys):
    code, out, _ = run(capsys, "solve", files["table1"], "--lenient", "--seed", "1")
    meta, rows = read_csv(out)
    assert code == 0 and meta["kind"] == "solve"
    assert rows[0]["stable"] == "1" and rows[0]["size"] == "4"
    assert "-" not in rows[0]["matching"]


def test_solve_table1_strict_is_rejected(files, capsys):
    code, _, err = run(capsys, "solve", files["table1"])
    assert code == 1 and "asymmetric" in err


def test_solve_minimal(files, capsys):
    code, out, _ = run(capsys, "solve", files["minimal"])
    row = read_csv(out)[1][0]
    assert code == 0 and row["matching"] == "1" and row["stable"] == "1" and row["perfect"] == "1"


def test_solve_malformed(files, capsys):
    code, _, err = run(capsys, "solve", files["bad"])
    assert code == 1 and "error" in err


def test_solve_missing_file(capsys):
    assert run(capsys, "solve", "/nonexistent/x.txt")[0] == 1


def test_solve_unstable_exit_code(tmp_path, capsys):
    # a short LTI run from a random start on a larger instance usually stays unstable;
    # search for a seed that does, then check the status
    from smti.generator import GenParams, generate
    from smti.instance import write_instance
    from smti.localsearch import SearchConfig, search
    inst = generate(GenParams(60, 0.2, 0.0, seed=1))
    path = tmp_path / "i.txt"
    write_instance(inst, path)
    seed = next(s for s in range(50)
                if not search(inst, SearchConfig(variant="lti", max_steps=3, seed=s)).stable)
    code, out, _ = run(capsys, "solve", str(path), "--variant", "lti", "--max-steps", "3",
                       "--seed", str(seed))
    assert code == 3 and read_csv(out)[1][0]["stable"] == "0"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 2


def test_solve_out_file(files, tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert run(capsys, "solve", files["forced"], "--out", str(out))[0] == 0
    assert read_csv(out.read_text())[1][0]["matching"] == "1 2"


def test_oracle_command(files, capsys):
    code, out, _ = run(capsys, "oracle", files["table1"], "--lenient")
    meta, rows = read_csv(out)
    assert code == 0 and meta["max_size"] == "4" and rows == [{"size": "4", "count": "4"}]
    meta, rows = read_csv(run(capsys, "oracle", files["minimal"])[1])
    assert meta["stable_count"] == "1" and rows == [{"size": "1", "count": "1"}]


def test_oracle_strict_instances_single_size(tmp_path, capsys):
    assert run(capsys, "gen", "--n", "6", "--p1", "0.2,0.5", "--p2", "0", "--per-cell", "3",
               "--out", str(tmp_path))[0] == 0
    for p in tmp_path.glob("*.txt"):
        rows = read_csv(run(capsys, "oracle", str(p))[1])[1]
        assert len(rows) == 1


def test_oracle_size_cap(tmp_path, capsys):
    run(capsys, "gen", "--n", "9", "--p1", "0.5", "--p2", "0.5", "--out", str(tmp_path))
    path = next(tmp_path.glob("*.txt"))
    assert run(capsys, "oracle", str(path))[0] == 1


def test_gen_complete_strict(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "--n", "4", "--p1", "0", "--p2", "0", "--seed", "7",
                       "--out", str(tmp_path))
    files = list(tmp_path.iterdir())
    assert code == 0 and [f.name for f in files] == [instance_filename(4, 0.0, 0.0, 0)]
    inst = read_instance(files[0])
    for lst in inst.men_prefs + inst.women_prefs:
        assert len(lst) == 4 and all(len(g) == 1 for g in lst)


def test_gen_default_grid_count(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "--n", "10", "--per-cell", "2", "--out", str(tmp_path))
    assert code == 0 and len(list(tmp_path.glob("smti_n10_*.txt"))) == 8 * 11 * 2
    assert "wrote 176" in out


def test_gen_reject_cap(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "--n", "5", "--p1", "0.99", "--p2", "0",
                       "--max-rejects", "200", "--out", str(tmp_path))
    assert code == 1 and "empty list" in err


def test_filename_scheme():
    assert instance_filename(100, 0.3, 0.5, 7) == "smti_n100_p10.3_p20.5_i7.txt"


def test_sweep_matches_solve(tmp_path, capsys):
    args = ["--n", "12", "--p1", "0.3", "--p2", "0.4", "--per-cell", "1", "--seed", "5"]
    code, out, _ = run(capsys, "sweep", *args, "--runs-log", str(tmp_path / "runs.csv"))
    assert code == 0
    meta, cells = read_csv(out)
    assert len(cells) == 1 and meta["kind"] == "sweep"
    run(capsys, "gen", *args, "--out", str(tmp_path / "inst"))
    path = tmp_path / "inst" / instance_filename(12, 0.3, 0.4, 0)
    seed = run_seed(5, derive_seed(5, 0.3, 0.4, 0), 0)
    _, out, _ = run(capsys, "solve", str(path), "--seed", str(seed))
    solo = read_csv(out)[1][0]
    cell = cells[0]
    assert float(cell["stable_rate"]) == float(solo["stable"])
    assert float(cell["perfect_rate"]) == float(solo["perfect"])
    assert float(cell["avg_size"]) == float(solo["size"])
    assert float(cell["avg_steps"]) == float(solo["steps"])
    assert float(cell["avg_restarts"]) == float(solo["restarts"])
    runs = read_csv((tmp_path / "runs.csv").read_text())[1]
    assert runs[0]["search_seed"] == str(seed)


def _without_wall_time(text):
    meta, rows = read_csv(text)
    for r in rows:
        r.pop("avg_wall_time", None)
        r.pop("wall_time", None)
    return meta, rows


def test_sweep_determinism_and_cross_consistency(tmp_path, capsys):
    args = ["sweep", "--n", "10,14", "--p1", "0.2,0.6", "--p2", "0,0.5,1", "--per-cell", "3",
            "--runs", "2", "--max-steps", "2000", "--seed", "3"]
    outs = []
    for k, jobs in enumerate(("1", "2")):
        log = tmp_path / f"runs{k}.csv"
        code, out, _ = run(capsys, *args, "--jobs", jobs, "--runs-log", str(log))
        assert code == 0
        outs.append((out, log.read_text()))
    assert _without_wall_time(outs[0][0]) == _without_wall_time(outs[1][0])
    assert _without_wall_time(outs[0][1]) == _without_wall_time(outs[1][1])
    cells = read_csv(outs[0][0])[1]
    runs = read_csv(outs[0][1])[1]
    assert len(cells) == 12 and len(runs) == 12 * 3 * 2
    for c in cells:
        mine = [int(r["size"]) for r in runs
                if (r["n"], r["p1"], r["p2"]) == (c["n"], c["p1"], c["p2"])]
        assert len(mine) == 6
        assert float(c["avg_size"]) == pytest.approx(sum(mine) / 6, rel=1e-9)
        assert c["schema_version"] == "1" and c["error"] == ""
        assert 0 <= float(c["stable_rate"]) <= 1 and float(c["avg_size"]) <= int(c["n"])


def test_sweep_records_generation_errors(capsys):
    code, out, err = run(capsys, "sweep", "--n", "3", "--p1", "0.99", "--p2", "0",
                         "--per-cell", "1", "--max-rejects", "5")
    cells = read_csv(out)[1]
    assert code == 0 and cells[0]["error"] and cells[0]["runs"] == "0"
    assert "p1=0.99" in err


def test_trajectory_forced(files, capsys):
    code, out, _ = run(capsys, "trajectory", files["forced"], "--until", "20", "--stride", "1")
    meta, rows = read_csv(out)
    assert code == 0 and meta["normalization"] == "n"
    assert [r["step"] for r in rows] == [str(s) for s in range(21)]
    assert float(rows[5]["avg_bp_norm"]) == 0 and float(rows[5]["avg_singles_norm"]) == 0
    assert float(rows[-1]["frac_stable"]) == 1


def test_trajectory_from_grid(capsys):
    code, out, _ = run(capsys, "trajectory", "--n", "20", "--p1", "0.3", "--p2", "0.5",
                       "--per-cell", "3", "--runs", "2", "--until", "50", "--stride", "10")
    meta, rows = read_csv(out)
    assert code == 0 and len(rows) == 6 and rows[0]["runs"] == "6"
    singles = [float(r["avg_singles_norm"]) for r in rows]
    assert all(0 <= s <= 1 for s in singles)


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "smti", "solve", files["minimal"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "\n1," in proc.stdout
