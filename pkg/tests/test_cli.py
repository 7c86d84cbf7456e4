import csv
import io
import json
from fractions import Fraction as F

import pytest

from dimorphic.cli import main, parse_grid
from dimorphic.errors import GridParseError


def run_cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_stirling_first():
    code, text = run_cli("stirling", "--kind", "first", "--max-n", "4")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0
    assert rows[0] == ["n", "k", "value"]
    assert ["4", "2", "11/1"] in rows
    assert len(rows) == 1 + 15


def test_stirling_degenerate_rows():
    _, text = run_cli("stirling", "--kind", "second-degenerate", "--lambda", "1/2", "--max-n", "3")
    assert "3,2,3/2" in text.splitlines()
    _, text = run_cli("stirling", "--kind", "second-degenerate", "--lambda", "0/1", "--max-n", "3")
    rows = {(int(n), int(k)): F(v) for n, k, v in list(csv.reader(io.StringIO(text)))[1:]}
    assert [rows[3, k] for k in range(4)] == [0, 1, 3, 1]


def test_stirling_json_and_missing_lambda(capsys):
    _, text = run_cli("stirling", "--kind", "first", "--max-n", "2", "--format", "json")
    assert {"n": 2, "k": 1, "value": "-1/1"} in json.loads(text)
    with pytest.raises(SystemExit) as exc:
        run_cli("stirling", "--kind", "second-degenerate", "--max-n", "3")
    assert exc.value.code == 2


def test_pmf_csv_and_json():
    code, text = run_cli("pmf", "--family", "y", "--n", "2")
    assert code == 0
    assert text.splitlines() == ["k,probability", "0,0/1", "1,1/2", "2,1/2"]
    _, text = run_cli("pmf", "--family", "z", "--n", "1", "--alpha", "1", "--lambda", "1/2", "--format", "json")
    assert json.loads(text) == [{"k": 0, "p": "1/3"}, {"k": 1, "p": "2/3"}]


def test_moments():
    _, text = run_cli("moments", "--family", "z", "--n", "2", "--alpha", "1/1", "--lambda", "1/2")
    assert "mean,7/6" in text.splitlines()
    _, text = run_cli("moments", "--family", "y", "--n", "2", "--format", "json")
    d = json.loads(text)
    assert d["mean"] == "3/2" and d["variance"] == "1/4"


def test_out_of_range_warns_and_proceeds(capsys):
    code, text = run_cli("moments", "--family", "z", "--n", "2", "--alpha", "2", "--lambda", "3/2", "--format", "json")
    assert code == 0
    assert json.loads(text)["in_paper_range"] is False
    assert "warning" in capsys.readouterr().err


def test_simulate_deterministic_variable():
    code, text = run_cli("simulate", "--family", "y", "--n", "1", "--samples", "100", "--seed", "7")
    assert code == 0
    assert json.loads(text)["counts"] == [0, 100]


def test_simulate_is_reproducible():
    args = ("simulate", "--family", "z", "--n", "5", "--alpha", "1", "--lambda", "1/2", "--samples", "5000", "--seed", "3")
    assert run_cli(*args)[1] == run_cli(*args)[1]


def test_verify_t3_all_l():
    code, text = run_cli("verify", "--identity", "t3", "--n", "10", "--lambda", "1/3")
    lines = [json.loads(s) for s in text.splitlines()]
    assert code == 0
    assert len(lines) == 11
    assert all(d["passed"] for d in lines)
    assert [d["params"]["l"] for d in lines] == list(range(11))


def test_verify_quadrature_aliasing(capsys):
    code, text = run_cli("verify", "--identity", "t4-quad", "--n", "4", "--l", "2", "--alpha", "1/1", "--lambda", "1/2", "--M", "4")
    assert code != 0
    assert "AliasingError" in capsys.readouterr().err
    assert json.loads(text)["passed"] is False


def test_verify_t2_point():
    code, text = run_cli("verify", "--identity", "t2", "--n", "3", "--alpha", "2/1", "--lambda", "1/4")
    assert code == 0
    d = json.loads(text)
    assert d["passed"] and d["residual"] == "0/1"


def test_verify_all_and_csv():
    code, text = run_cli("verify", "--identity", "all", "--n", "3", "--alpha", "2", "--lambda", "1/4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0
    assert {r["identity"] for r in rows} == {"T2", "T3", "T4-exact", "T4-quadrature"}
    assert all(r["passed"] == "True" for r in rows)


def test_verify_missing_flag():
    with pytest.raises(SystemExit) as exc:
        run_cli("verify", "--identity", "t2", "--n", "3", "--lambda", "1/4")
    assert exc.value.code == 2


def test_verify_grid_file(tmp_path):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([
        {"n": 3, "alpha": "1/2", "lambda": "1/4"},
        {"n": 5, "l": 2, "alpha": 2, "lambda": "3/2"},
    ]))
    code, text = run_cli("verify", "--identity", "t4-exact", "--grid", str(grid))
    lines = [json.loads(s) for s in text.splitlines()]
    assert code == 0
    assert len(lines) == 4 + 1
    assert lines[-1]["in_paper_range"] is False


def test_verify_exit_status_tracks_failures(tmp_path):
    grid = tmp_path / "grid.json"
    grid.write_text('[{"n": 3, "l": 1, "lambda": "1/2"}, {"n": 2, "l": 3, "lambda": "1/2"}]')
    code, text = run_cli("verify", "--identity", "t3", "--grid", str(grid))
    passed = [json.loads(s)["passed"] for s in text.splitlines()]
    assert passed == [True, False]
    assert code == 1


def test_malformed_grid_reports_line(tmp_path, capsys):
    grid = tmp_path / "grid.json"
    grid.write_text('[\n  {"n": 3, "lambda": "1/2"},\n  {"n": 3, "lambda": "1/2",}\n]\n')
    code, _ = run_cli("verify", "--identity", "t3", "--grid", str(grid))
    assert code == 2
    assert "line 3" in capsys.readouterr().err


@pytest.mark.parametrize(
    "text, line",
    [
        ('[\n{"n": 1, "lambda": "1/2"},\n{"n": "x", "lambda": "1/2"}\n]', 3),
        ('[\n{"n": 1, "lambda": 0.5}\n]', 2),
        ('{"n": 1}', 1),
        ('[\n{"n": 1, "lambda": "1/2"}\n\n{"n": 2}]', 4),
        ('[\n{"lambda": "1/2"}]', 2),
        ('[\n{"n": 1, "bogus": 2}]', 2),
        ('[\n{"n": 1, "lambda": "1/0"}]', 2),
    ],
)
def test_parse_grid_errors(text, line):
    with pytest.raises(GridParseError) as exc:
        parse_grid(text)
    assert exc.value.lineno == line


def test_parse_grid_values():
    pts = parse_grid('[{"n": 4, "l": 1, "alpha": 3, "lambda": "2/6", "M": 9}]')
    assert pts == [{"n": 4, "l": 1, "alpha": F(3), "lambda": F(1, 3), "M": 9}]
    assert parse_grid(" [ ] ") == []


def test_emitted_fractions_round_trip():
    _, text = run_cli("stirling", "--kind", "second-degenerate", "--lambda=-7/9", "--max-n", "8")
    for _, _, v in list(csv.reader(io.StringIO(text)))[1:]:
        num, den = v.split("/")
        assert f"{F(v).numerator}/{F(v).denominator}" == v
        assert int(den) > 0
