import csv
import json
import subprocess
import sys

import pytest

from lmcsi.cli import main
from lmcsi.generators import FAMILIES


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return p


PAIR = {"k": 2, "intervals": [{"x": "0", "color": 0}, {"x": "1", "color": 1}]}
LOWER = {"k": 2, "intervals": [{"x": x, "color": 0} for x in ("0", "1/2", "1")]
         + [{"x": "1/2", "color": 1}]}
THREE = {"k": 3, "intervals": [{"x": "0", "color": 0}, {"x": "1/2", "color": 1},
                               {"x": "1/4", "color": 2}]}


def test_solve_extremal_files(tmp_path, capsys):
    code, out, _ = run(capsys, "solve", write(tmp_path, "p.json", PAIR))
    assert code == 0
    assert json.loads(out) == {"q_star": "2", "reps": ["0", "2"], "method": "TwoColor"}
    code, out, _ = run(capsys, "solve", write(tmp_path, "l.json", LOWER))
    assert code == 0 and json.loads(out)["q_star"] == "3/4"


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "solve", write(tmp_path, "t.json", THREE))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run(capsys, "solve", bad)[0] == 1
    assert run(capsys, "solve", tmp_path / "missing.json")[0] == 1
    assert run(capsys, "decide", write(tmp_path, "t2.json", THREE), "--q", "1")[0] == 2
    assert run(capsys, "decide", write(tmp_path, "p.json", PAIR), "--q", "abc")[0] == 1
    big = tmp_path / "big.json"
    assert run(capsys, "generate", "--family", "TwoColorOverlap", "--n", 12, "--out", big)[0] == 0
    assert run(capsys, "oracle", big)[0] == 3


def test_decide_and_oracle(tmp_path, capsys):
    path = write(tmp_path, "p.json", PAIR)
    code, out, _ = run(capsys, "decide", path, "--q", "2")
    assert code == 0 and out.splitlines() == ["YES", "witness: 0 2"]
    assert run(capsys, "decide", path, "--q", "21/10")[1].strip() == "NO"
    assert run(capsys, "oracle", path)[1].strip() == "q_star: 2"
    assert run(capsys, "oracle", path, "--q", "2")[1].splitlines()[0] == "YES"
    assert run(capsys, "oracle", path, "--q", "3")[1].strip() == "NO"


def test_verify_detects_tampering(tmp_path, capsys):
    inst = write(tmp_path, "p.json", PAIR)
    good = write(tmp_path, "r.json", {"q_star": "2", "reps": ["0", "2"]})
    code, out, _ = run(capsys, "verify", inst, "--realization", good)
    assert code == 0 and out.splitlines() == ["mcsi_length: 2", "verdict: VALID"]
    outside = write(tmp_path, "o.json", {"q_star": "2", "reps": ["0", "5/2"]})
    code, out, _ = run(capsys, "verify", inst, "--realization", outside)
    assert code == 4 and out.splitlines()[-1] == "verdict: INVALID"
    code, out, _ = run(capsys, "verify", inst, "--realization", good, "--q", "3")
    assert code == 4 and "INVALID" in out
    short = write(tmp_path, "s.json", {"reps": ["0"]})
    assert run(capsys, "verify", inst, "--realization", short)[0] == 1


def test_bench_rows(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert run(capsys, "bench", "--sizes", "1e2,4e2", "--family", "TwoColorOverlap",
               "--out", out)[0] == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["n"] for r in rows] == ["100", "400"]
    assert all(r["family"] == "TwoColorOverlap" and float(r["wall_time_s"]) >= 0 for r in rows)


@pytest.mark.parametrize("family", FAMILIES)
def test_round_trip(family, tmp_path, capsys):
    for seed in range(100):
        n = 3 + seed % 6 if family == "LowerBoundFamily" else 8
        k = 3 if family in ("Disjoint", "SemiDisjoint") else 2
        inst = tmp_path / "i.json"
        res = tmp_path / "r.json"
        assert run(capsys, "generate", "--family", family, "--n", n, "--k", k,
                   "--seed", seed, "--out", inst)[0] == 0
        assert run(capsys, "solve", inst, "--out", res)[0] == 0
        q_star = json.loads(res.read_text())["q_star"]
        code, out, _ = run(capsys, "verify", inst, "--realization", res, "--q", q_star)
        assert code == 0, out
        assert out.splitlines() == [f"mcsi_length: {q_star}", "verdict: VALID"]


def test_outputs_are_deterministic(tmp_path, capsys):
    blobs = []
    for name in ("a", "b"):
        inst, res = tmp_path / f"{name}.json", tmp_path / f"{name}.out.json"
        run(capsys, "generate", "--family", "TwoColorOverlap", "--n", 300, "--seed", 5,
            "--out", inst)
        run(capsys, "solve", inst, "--out", res)
        blobs.append((inst.read_bytes(), res.read_bytes()))
    assert blobs[0] == blobs[1]


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "p.json", PAIR)
    proc = subprocess.run([sys.executable, "-m", "lmcsi", "solve", str(path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["q_star"] == "2"
