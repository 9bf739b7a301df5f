import csv
import io
import json

import pytest

from latticesimplex import cli
from latticesimplex.diophantine import PrecisionExhaustedError


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_csv_columns_and_sorting(capsys):
    code, out, _ = run(["count", "--preset", "golden", "--t-max", "100", "--points", "6"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == cli.COUNT_COLUMNS
    keys = [(float(r[0]), r[2]) for r in rows[1:]]
    assert keys == sorted(keys) and len(keys) == 12


def test_config_errors_exit_2(capsys, tmp_path):
    assert run(["count", "--weights", "1,-2"], capsys)[0] == 2
    assert run(["count", "--preset", "golden", "--t-min", "50", "--t-max", "10"], capsys)[0] == 2
    assert run(["count", "--preset", "golden", "--delta", "0.7"], capsys)[0] == 2
    assert run(["error-sweep", "--preset", "rational"], capsys)[0] == 2
    bad = tmp_path / "c.json"
    bad.write_text(json.dumps({"bogus": 1}))
    assert run(["count", "--config", str(bad)], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["count", "--grid", "spiral"])
    assert exc.value.code == 2


def test_rational_preset_warns_in_count(capsys):
    with pytest.warns(RuntimeWarning):
        assert run(["count", "--preset", "rational", "--t-max", "20", "--points", "3"], capsys)[0] == 0


def test_config_file_and_flag_override(capsys, tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"preset": "sqrt2", "t_min": 5, "t_max": 50, "points": 4, "kind": "open"}))
    code, out, _ = run(["count", "--config", str(cfg), "--points", "3", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["columns"] == list(cli.COUNT_COLUMNS)
    assert len(doc["rows"]) == 3 and {r[2] for r in doc["rows"]} == {"open"}


def test_jump_aligned_grid_hits_lattice_points(capsys):
    code, out, _ = run(["count", "--preset", "sqrt2", "--grid", "jump-aligned", "--points", "5",
                        "--kind", "open", "--t-max", "200"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and all(r["tau"] == "1" for r in rows)


def test_error_sweep_summary(capsys, tmp_path):
    out_file = tmp_path / "sweep.csv"
    code, out, _ = run(["error-sweep", "--preset", "golden", "--t-min", "10", "--t-max", "1e4",
                        "--points", "40", "--grid", "jump-aligned", "--out", str(out_file)], capsys)
    assert code == 0
    summary = json.loads(out)
    assert {"power", "polylog", "decade_max_rrr_over_log", "max_rrr_over_log_d"} <= set(summary)
    assert "alpha" in summary["power"]
    assert out_file.read_text().startswith(",".join(cli.SWEEP_COLUMNS))


def test_dioph_and_lattice_sum(capsys):
    code, out, err = run(["dioph", "--preset", "golden", "--M", "1000"], capsys)
    assert code == 0 and out.startswith(",".join(cli.DIOPH_COLUMNS))
    summary = json.loads(err)
    assert summary["rows"][0]["continued_fraction"].startswith("[1; 1, 1")
    code, out, err = run(["lattice-sum", "--preset", "golden", "--t-min", "100", "--t-max", "1000",
                          "--points", "4", "--kappa", "0.01"], capsys)
    assert code == 0
    assert json.loads(err)["bound_holds"]


def test_fourier_check_passes_and_reports_failures(capsys, monkeypatch):
    code, out, _ = run(["fourier-check", "--seed", "1"], capsys)
    assert code == 0 and len(out.splitlines()) == 251
    monkeypatch.setattr(cli, "fourier_suite", lambda seed, prec: [("x", "p", "1", "2", 1.0, 1.0, False)])
    assert run(["fourier-check"], capsys)[0] == 3


def test_precision_exhaustion_exit_4(capsys, monkeypatch):
    def boom(cfg):
        raise PrecisionExhaustedError("out of bits")
    monkeypatch.setitem(cli.COMMANDS, "dioph", boom)
    assert run(["dioph", "--preset", "golden"], capsys)[0] == 4


def test_serial_and_parallel_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["count", "--preset", "d3", "--grid", "jump-aligned", "--seed", "5", "--points", "8", "--t-max", "300"]
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
