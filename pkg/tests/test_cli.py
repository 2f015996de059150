import json

from bt_strata.cli import run


def call(capsys, *args):
    code = run(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_vertex_lattices_json(capsys):
    code, out, _ = call(capsys, "vertex-lattices", "--n", "2", "--h", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["config"]["n"] == 2 and len(data["lattices"]) == 22


def test_vertex_lattices_csv_and_env(capsys, monkeypatch):
    monkeypatch.setenv("BT_STRATA_N", "2")
    code, out, _ = call(capsys, "vertex-lattices", "--h", "0", "--format", "csv")
    assert code == 0 and len([l for l in out.splitlines() if l and not l.startswith("#")]) == 3


def test_strata_graph_dot_is_stable(capsys):
    a = call(capsys, "strata-graph", "--n", "2", "--h", "1", "--format", "dot")
    b = call(capsys, "strata-graph", "--n", "2", "--h", "1", "--format", "dot")
    assert a[0] == 0 and a == b and a[1].startswith("graph strata {")


def test_dl_count_and_dim(capsys):
    code, out, _ = call(capsys, "dl-count", "--q", "3", "--t", "2", "--n", "2", "--h", "1")
    data = json.loads(out)
    # the isotropic lines are the open-id part
    assert code == 0 and (data["closed"], data["open_id"], data["open_w"]) == (10, 4, 6)
    assert call(capsys, "dl-dim", "--t", "5", "--n", "5", "--h", "2")[:2] == (0, "3\n")


def test_budget_exit_code(capsys):
    code, _, err = call(capsys, "dl-count", "--q", "3", "--t", "7", "--n", "7", "--h", "0",
                        "--max-subspaces", "10")
    assert code == 3 and "hint" in err


def test_usage_errors(capsys):
    assert call(capsys, "no-such-command")[0] == 2
    assert call(capsys, "vertex-lattices", "--n", "2", "--h", "5")[0] == 2
    code, _, err = call(capsys, "intersect-chi", "--n", "3", "--h", "1", "--xvals", "1,2", "--yvals", "0")
    assert code == 2 and "not supported" in err


def test_intersect_chi(capsys):
    assert call(capsys, "intersect-chi", "--n", "2", "--h", "0", "--xvals", "1,2")[1] == "5\n"
    code, out, _ = call(capsys, "intersect-chi", "--n", "4", "--h", "2", "--q", "7",
                        "--xvals", "1,2", "--yvals=-1,-1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["chi"] == {"num": 9, "den": 1} and data["case"] == "z"
    assert len(data["trace"]) == 2


def test_intersect_chi_batch(capsys, tmp_path):
    path = tmp_path / "batch.csv"
    path.write_text("n,h,q,xvals,yvals\n2,0,3,0;1,\n3,3,3,,-1;-1;0\n")
    code, out, _ = call(capsys, "intersect-chi", "--batch", str(path))
    rows = json.loads(out)["results"]
    assert code == 0 and [r["chi"]["num"] for r in rows] == [1, 1]
    assert rows[1]["edge_case"]


def test_points_round_trip(capsys, tmp_path):
    v = tmp_path / "v.json"
    pts = tmp_path / "p.json"
    assert call(capsys, "vertex-lattices", "--n", "2", "--h", "1", "--out", str(v))[0] == 0
    code, _, _ = call(capsys, "stratum-points", "--n", "2", "--h", "1", "--lattice", str(v),
                      "--level", "2", "--out", str(pts))
    assert code == 0 and json.loads(pts.read_text())["count"] == 82
    code, out, _ = call(capsys, "classify-point", "--n", "2", "--h", "1", "--level", "2",
                        "--point", str(pts))
    assert code == 0 and json.loads(out)["verdicts"][0]["case"] == "L0"


def test_selftest_quick_is_deterministic(capsys):
    a = call(capsys, "selftest", "--quick")
    b = call(capsys, "selftest", "--quick")
    assert a[0] == 0 and a == b
    assert a[1].rstrip().endswith("suites passed")


def test_dl_dim_small_example(capsys):
    assert call(capsys, "dl-dim", "--t", "4", "--n", "4", "--h", "1", "--class", "0")[:2] == (0, "2\n")
