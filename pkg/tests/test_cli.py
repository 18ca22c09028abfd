import json

import pytest

from vorfunc.cli import main


def write_points(tmp_path, name, pts):
    path = tmp_path / name
    path.write_text(json.dumps({"points": pts}))
    return str(path)


def run_cli(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_functional_single_triangle(tmp_path, capsys):
    path = write_points(tmp_path, "tri.json", [[0, 0], [1, 0], [0, 1]])
    code, out, _ = run_cli(["functional", "--input", path], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["schema"] == 1
    assert obj["total"] == pytest.approx(1 / 12)
    assert len(obj["per_simplex"]) == 1


def test_functional_square_exits_3(tmp_path, capsys):
    path = write_points(tmp_path, "sq.json", [[0, 0], [1, 0], [0, 1], [1, 1]])
    code, _, err = run_cli(["functional", "--input", path], capsys)
    assert code == 3
    assert err.startswith("error:")
    assert "labels" in err


def test_functional_parse_error_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run_cli(["functional", "--input", str(bad)], capsys)
    assert code == 2
    assert err.startswith("error:")


def test_functional_octahedron_dim3(tmp_path, capsys):
    pts = [
        [7.99, 5.80, 1.65],
        [9.86, 0.00, 1.65],
        [7.80, -5.80, 1.65],
        [7.89, 0.00, 6.14],
        [-2.00, -0.01, 4.02],
        [6.89, 0.00, -4.14],
    ]
    path = write_points(tmp_path, "octa.json", pts)
    code, out, _ = run_cli(
        ["functional", "--input", path, "--dim", "3", "--diagonal", "BE"], capsys
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["total"] == pytest.approx(3413.75, abs=0.05)
    code, out, _ = run_cli(
        ["functional", "--input", path, "--dim", "3", "--diagonal", "AC"], capsys
    )
    assert json.loads(out)["total"] == pytest.approx(3432.96, abs=0.05)


def test_functional_rajan_and_rf(tmp_path, capsys):
    path = write_points(tmp_path, "tri.json", [[0, 0], [1, 0], [0, 1]])
    code, out, _ = run_cli(["functional", "--input", path, "--which", "rajan"], capsys)
    assert json.loads(out)["total"] == pytest.approx(1 / 6)
    code, out, _ = run_cli(
        ["functional", "--input", path, "--which", "rf", "--alpha", "2"], capsys
    )
    assert json.loads(out)["total"] == pytest.approx(0.25)


def test_scan_csv_rows(tmp_path, capsys):
    out_path = tmp_path / "scan.csv"
    code, _, _ = run_cli(
        ["scan", "--n", "5", "--trials", "4", "--seed", "7", "--out", str(out_path)], capsys
    )
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "# schema=1"
    assert lines[1] == "trial,triangulation,vf,is_delaunay,is_max"
    rows = [l.split(",") for l in lines[2:]]
    trials = {int(r[0]) for r in rows}
    assert trials == {0, 1, 2, 3}
    for r in rows:
        assert r[3] in ("0", "1") and r[4] in ("0", "1")
    # Every trial has exactly one Delaunay member, and it is maximal.
    for t in trials:
        flags = [(r[3], r[4]) for r in rows if int(r[0]) == t]
        assert sum(1 for d, _ in flags if d == "1") == 1
        assert all(m == "1" for d, m in flags if d == "1")


def test_scan_deterministic(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run_cli(["scan", "--n", "5", "--trials", "3", "--seed", "11", "--out", str(a)], capsys)
    run_cli(["scan", "--n", "5", "--trials", "3", "--seed", "11", "--out", str(b)], capsys)
    assert a.read_text() == b.read_text()


def test_counterexamples_octahedron(tmp_path, capsys):
    out_path = tmp_path / "octa.json"
    code, _, _ = run_cli(
        ["counterexamples", "--which", "octahedron", "--out", str(out_path)], capsys
    )
    assert code == 0
    obj = json.loads(out_path.read_text())
    assert obj["verdict"] == "pass"
    assert obj["schema"] == 1


def test_counterexamples_fold(capsys):
    code, out, _ = run_cli(["counterexamples", "--which", "fold"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert (obj["values"]["preserved"], obj["values"]["reversed"]) == (16, 8)


def test_render_obtuse_gamma_shades_two_cells(tmp_path, capsys):
    path = write_points(tmp_path, "obtuse.json", [[0, 0], [4, 0], [2, 0.5]])
    out_path = tmp_path / "img.svg"
    code, _, _ = run_cli(
        ["render", "--input", path, "--what", "gamma", "--out", str(out_path)], capsys
    )
    assert code == 0
    svg = out_path.read_text()
    assert svg.count('class="cell neg"') == 2
    assert svg.startswith("<svg")


def test_render_deterministic(tmp_path, capsys):
    path = write_points(tmp_path, "tri.json", [[0, 0], [1, 0], [0.2, 1.1], [1.3, 0.9]])
    a = tmp_path / "a.svg"
    b = tmp_path / "b.svg"
    run_cli(["render", "--input", path, "--what", "subdivision", "--out", str(a)], capsys)
    run_cli(["render", "--input", path, "--what", "subdivision", "--out", str(b)], capsys)
    assert a.read_text() == b.read_text()
    # Fixed two-decimal coordinates only.
    import re

    for coord in re.findall(r'points="([^"]+)"', a.read_text()):
        for token in coord.replace(",", " ").split():
            assert re.fullmatch(r"-?\d+\.\d\d", token)


def test_samples_floor_enforced(capsys):
    code, _, err = run_cli(
        ["counterexamples", "--which", "topological", "--samples", "10"], capsys
    )
    assert code == 2
    assert "--samples" in err
