import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from cyclic_monopole import cli
from cyclic_monopole import curve_pipeline as cp


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def verify_01():
    return cli.verify_report(cp.MonopoleIndex(0, 1))


def test_verify_monopole(capsys):
    code, out, _ = run(["verify", "0", "1"], capsys)
    assert code == 0
    report = json.loads(out)
    assert abs(abs(report["curve"]["b"]) - 5 * 2 ** 0.5) < 1e-9
    assert report["vanishing"]["verdict"] == "monopole"
    assert report["lattice"]["passed"]


def test_verify_not_monopole(capsys):
    code, out, _ = run(["verify", "1", "2"], capsys)
    assert code == 1
    report = json.loads(out)
    assert report["vanishing"]["zero_count"] == 2


def test_verify_invalid(capsys):
    code, _, err = run(["verify", "2", "1"], capsys)
    assert code == 2 and "error" in err


def test_verify_canonical_note(capsys):
    code, _, err = run(["verify", "0", "-1"], capsys)
    assert code == 0
    assert "(0, 1)" in err


def test_verify_rejects_small_grid(capsys):
    code, _, _ = run(["verify", "0", "1", "--grid", "100"], capsys)
    assert code == 2


def test_verify_csv_lf(tmp_path, capsys):
    path = tmp_path / "zeros.csv"
    code, _, _ = run(["verify", "1", "2", "--format", "csv", "--out", str(path)], capsys)
    assert code == 1
    raw = path.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode("utf-8"))))
    assert rows[0] == ["lambda", "k", "abs_residual", "winding"]
    assert len(rows) == 3


def test_verify_unwritable_output(capsys):
    code, _, err = run(["verify", "0", "1", "--out", "/nonexistent/dir/out.json"], capsys)
    assert code == 3 and "/nonexistent/dir/out.json" in err


def test_exit_code_is_function_of_report(verify_01):
    assert cli.exit_code_for(verify_01) == 0
    flipped = json.loads(json.dumps(cli.jsonio.encode(verify_01)))
    flipped["vanishing"]["verdict"] = "not monopole"
    assert cli.exit_code_for(flipped) == 1


def test_report_json_round_trip(verify_01):
    text = cli._json_text(verify_01)
    back = json.loads(text)
    assert back["curve"]["b"] == verify_01["curve"]["b"]
    assert back["b_difference"] == verify_01["b_difference"]
    assert cli._json_text(back) == text


def test_scan_rows_match_admissible(capsys):
    code, out, _ = run(["scan", "--max-abs", "3", "--grid", "512"], capsys)
    assert code == 0
    rows = json.loads(out)
    expected = [idx.pair for idx in cp.admissible_indices(3)]
    assert [(r["m"], r["n"]) for r in rows] == expected
    for r in rows:
        monopole = (r["m"], r["n"]) in {(0, 1), (1, 1)}
        assert (r["verdict"] == "monopole") == monopole
        assert r["match"] is True


def test_scan_deterministic(tmp_path):
    outs = []
    for workers in ("1", "2", "1"):
        path = tmp_path / f"scan{len(outs)}.csv"
        code = cli.main(["scan", "--max-abs", "2", "--grid", "512", "--format", "csv",
                         "--workers", workers, "--out", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    assert outs[0].splitlines()[0].decode() == ",".join(cli.SCAN_COLUMNS)


def test_scan_config_validation():
    with pytest.raises(ValueError):
        cli.ScanConfig(max_abs=0)
    with pytest.raises(ValueError):
        cli.ScanConfig(grid=256)


def test_selftest_passes(capsys):
    code, out, _ = run(["selftest"], capsys)
    assert code == 0
    assert "FAIL" not in out


@pytest.mark.parametrize("hook, named", [
    ("perturb-theta", "theta/quotient_identities"),
    ("corrupt-symplectic", "symplectic/is_symplectic[bolza_s]"),
])
def test_selftest_negative_controls(capsys, hook, named):
    code, out, _ = run(["selftest", "--hook", hook], capsys)
    assert code == 4
    failed = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert any(named in line for line in failed)
    # the hook is undone afterwards
    code, out, _ = run(["selftest"], capsys)
    assert code == 0


def read_profile(path):
    rows = list(csv.reader(path.open(encoding="utf-8")))
    assert rows[0] == ["lambda", "abs_h_minus1", "abs_h0", "abs_h1", "abs_H"]
    return np.array(rows[1:], dtype=float)


def interior_dips(data, frac=0.05):
    H = data[:, 4]
    med = np.median(H[np.isfinite(H)])
    i = np.arange(1, len(H) - 1)
    mins = i[(H[i] <= H[i - 1]) & (H[i] < H[i + 1])]
    return [data[j, 0] for j in mins if H[j] < frac * med]


def test_plot_profile_symmetric_index(tmp_path):
    path = tmp_path / "h.csv"
    svg = tmp_path / "h.svg"
    assert cli.main(["plot", "1", "2", "H", str(path), "--svg", str(svg)]) == 0
    data = read_profile(path)
    assert data.shape == (2048, 5)
    dips = interior_dips(data)
    assert len(dips) == 2
    assert dips == pytest.approx([2 / 3, 4 / 3], abs=2 * (data[1, 0] - data[0, 0]))
    assert svg.read_text(encoding="utf-8").lstrip().startswith("<?xml")


def test_plot_profile_tetrahedral(tmp_path):
    path = tmp_path / "h.csv"
    assert cli.main(["plot", "0", "1", "H", str(path)]) == 0
    data = read_profile(path)
    # |H| rises from its fourth-order zero at 0 and falls back towards 2
    # with no dip in between
    assert interior_dips(data, frac=1.0) == []
    middle = (data[:, 0] > 0.5) & (data[:, 0] < 1.5)
    assert data[middle, 4].min() > 0.5 * np.median(data[:, 4])


def test_plot_branches(tmp_path):
    path = tmp_path / "b.csv"
    svg = tmp_path / "b.svg"
    code = cli.main(["plot", "0", "1", "branches", str(path), "--rmin", "1.5", "--rmax", "2.5",
                     "--rsteps", "41", "--svg", str(svg)])
    assert code == 0
    rows = list(csv.reader(path.open(encoding="utf-8")))
    assert rows[0] == ["abs_R", "s", "k", "vertical"]
    body = rows[1:]
    assert body and all(r[2] in ("-1", "0", "1") for r in body)
    # branches fold back at |R| = 2, next to s = 2/3 and s = 4/3
    folds = [(float(r[0]), float(r[1])) for r in body if r[3] == "1"]
    assert folds and all(abs(r - 2) < 0.05 for r, _ in folds)
    for target in (2 / 3, 4 / 3):
        assert min(abs(s - target) for _, s in folds) < 0.1
    assert svg.exists()


def test_plot_unwritable(capsys):
    code, _, err = run(["plot", "1", "2", "H", "/nonexistent/dir/p.csv"], capsys)
    assert code == 3 and "/nonexistent/dir/p.csv" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cyclic_monopole", "verify", "2", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
