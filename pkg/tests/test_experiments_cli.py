import csv
import io
import math

import pytest

from normlab.cli import main
from normlab.experiments import (
    divergence_pair,
    growth_boundaries,
    run_char_basis_check,
    run_garling_divergence,
    run_lp_block_check,
    run_y_counterexample,
)
from normlab.stepfn import equimeasurable
from normlab.weights import WeightFunction

W = WeightFunction.power(0.5)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_y_table_values():
    t = run_y_counterexample([4.0])
    row = dict(zip(t.columns, t.rows[0]))
    assert row["y_initial"] == pytest.approx(1.5616, abs=1e-4)
    assert row["y_initial"] <= 2.0
    assert row["y_shifted"] == pytest.approx(2.0, abs=1e-9)


def test_y_far_offset_separates():
    t = run_y_counterexample([1.0, 4.0, 16.0, 100.0], offset="square")
    assert t.ok, t.failures
    for b, ratio in zip(t.column("b"), t.column("ratio")):
        assert ratio >= math.sqrt(b)


def test_y_sqrt_offset_reports_failures_for_b_above_one():
    t = run_y_counterexample([1.0, 4.0])
    assert any(msg.startswith("b=4") for msg in t.failures)
    assert not any(msg.startswith("b=1") for msg in t.failures)


def test_divergence_small_r_matches_log2():
    t = run_garling_divergence([1.0], n_cells=1024)
    row = dict(zip(t.columns, t.rows[0]))
    assert t.ok
    assert row["norm_fstar_lower"] <= math.log(2) <= row["norm_fstar_lower"] + row["slack"]
    assert row["equimeasurable_check"] is True


def test_divergence_at_e4():
    r = math.exp(4) - 1
    t = run_garling_divergence([r], n_cells=1024)
    row = dict(zip(t.columns, t.rows[0]))
    assert row["norm_fstar_lower"] + row["slack"] >= 4.0 >= row["norm_f_upper"]


def test_divergence_pair_histograms_match():
    pair = divergence_pair(10.0, 128)
    assert equimeasurable(pair["f_upper"], pair["fstar_upper"])
    assert equimeasurable(pair["f_lower"], pair["fstar_lower"])
    assert not equimeasurable(pair["f_upper"], pair["fstar_lower"])


def test_divergence_rejects_coarse_grid():
    with pytest.raises(ValueError):
        run_garling_divergence([1.0], n_cells=32)


def test_char_basis_rows():
    t = run_char_basis_check([1, 4], W)
    assert t.ok
    assert t.rows[0][1] == pytest.approx(2 * (math.sqrt(2) - 1), rel=1e-12)
    assert t.rows[1][1] == pytest.approx(2 * (math.sqrt(5) - 1), rel=1e-12)
    for row in t.rows:
        assert row[2] == pytest.approx(row[4], rel=1e-12)


def test_lp_blocks_unit_vector_row_and_config_errors():
    t = run_lp_block_check(None, 3, W, growth_factors=(2, 4))
    first = dict(zip(t.columns, t.rows[0]))
    assert first["lhs"] == pytest.approx(1.0, rel=1e-12) and first["rhs"] == 1.0
    with pytest.raises(ValueError):
        run_lp_block_check([1, 3, 3], 1, W)
    with pytest.raises(ValueError):
        run_lp_block_check([2, 4], 1, W)
    assert growth_boundaries(2, 3) == [1, 2, 4, 8]


def test_cli_norm_spaces(tmp_path, capsys):
    step = tmp_path / "f.step"
    step.write_text("# shifted indicator\n2 6 1\n")
    assert main(["norm", "--space", "Y", "--input", str(step)]) == 0
    assert capsys.readouterr().out.strip() == "2"
    far = tmp_path / "far.step"
    far.write_text("16 20 1\n")
    main(["norm", "--space", "Y", "--input", str(far)])
    assert capsys.readouterr().out.strip() == "4"
    main(["norm", "--space", "Lp", "--p", "2", "--input", str(step)])
    assert float(capsys.readouterr().out) == pytest.approx(2.0)
    main(["norm", "--space", "G", "--input", str(step)])
    assert float(capsys.readouterr().out) == pytest.approx(2 * (math.sqrt(5) - 1), rel=1e-10)
    empty = tmp_path / "empty.seq"
    empty.write_text("")
    assert main(["norm", "--space", "g", "--input", str(empty)]) == 0
    assert capsys.readouterr().out.strip() == "0"
    seq = tmp_path / "a.seq"
    seq.write_text("0\n5\n0\n5\n")
    main(["norm", "--space", "g", "--weight", "power:1", "--input", str(seq)])
    assert float(capsys.readouterr().out) == pytest.approx(7.5)


def test_cli_verify_y(capsys):
    assert main(["verify", "--experiment", "y", "--b", "1,4,16,100", "--offset", "square"]) == 0
    assert len(rows(capsys.readouterr().out)) == 4
    assert main(["verify", "--experiment", "y", "--b", "1,4,16,100"]) == 1
    captured = capsys.readouterr()
    assert len(rows(captured.out)) == 4
    assert "FAIL" in captured.err


def test_cli_verify_divergence_accepts_expressions(tmp_path):
    out = tmp_path / "div.csv"
    assert main(["verify", "--experiment", "divergence", "--r", "1,e^4-1", "--n-cells", "256",
                 "--output", str(out)]) == 0
    table = rows(out.read_text())
    assert float(table[1]["r"]) == pytest.approx(math.exp(4) - 1)


def test_cli_exit_status_tracks_tolerance(capsys):
    assert main(["verify", "--experiment", "charbasis", "--N", "1,2,4"]) == 0
    assert main(["verify", "--experiment", "charbasis", "--N", "1,2,4", "--tol", "-1"]) == 1
    capsys.readouterr()


def test_cli_verify_is_deterministic(tmp_path, monkeypatch):
    args = ["verify", "--experiment", "lpblocks", "--trials", "5", "--seed", "3"]
    a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("NORMLAB_SEED", "11")
    assert main(args + ["--output", str(c)]) == 0
    assert c.read_bytes() != a.read_bytes()


def test_cli_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["norm", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--experiment", "nope"])
    assert exc.value.code == 2
    assert main(["verify", "--experiment", "lpblocks", "--k", "1,4,2", "--trials", "1"]) == 2
    assert main(["norm", "--space", "Y", "--input", str(tmp_path / "missing")]) == 2
    capsys.readouterr()


def test_cli_selftest(capsys):
    assert main(["selftest"]) == 0
    assert "ok" in capsys.readouterr().out
