import json
import subprocess
import sys

import pytest

from pncoha.cli import parse_dim, run
from pncoha.errors import ArmIndexError
from pncoha.ratpoly import RatPoly
from pncoha.pn import PnElement
from pncoha.series import QtSeries
from pncoha.sstquot import quot_from_json


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_dim():
    assert parse_dim(1, "1,1") == (1, 1, 1)
    assert parse_dim(2, "1,1,0,1") == (1, 1, 0, 1)
    assert parse_dim(2, "e1+f2") == (1, 2, 0, 1)
    assert parse_dim(3, "2delta0") == (2, 2, 2, 2, 2)
    with pytest.raises(ArmIndexError):
        parse_dim(1, "e2")


def test_verify_n1(capsys):
    code, out, _ = call(capsys, "verify", "--n", "1", "--max-index", "3")
    assert code == 0
    assert "all relations hold" in out


def test_coha_dims_kronecker(capsys):
    code, out, _ = call(capsys, "coha", "dims", "--n", "0", "--d", "1,1", "--max-cohdeg", "6")
    assert code == 0
    dims = [line.split("\t")[2] for line in out.splitlines()[1:8]]
    assert dims == ["1", "0", "2", "0", "2", "0", "2"]


def test_pn_dims_bidegree(capsys):
    code, out, _ = call(capsys, "--format", "json", "pn", "dims", "--n", "3", "--bidegree", "2,delta0")
    assert code == 0
    assert json.loads(out)["rows"] == [[[1, 1, 1, 1, 1], 2, 5]]


def test_normal_form_json_parses_back(capsys):
    code, out, _ = call(capsys, "pn", "normal-form", "--n", "2", "--word", "f1.1 e1.1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["normal_form"] == "h.2 - e1.1 f1.1"
    assert str(PnElement.parse(2, payload["normal_form"])) == payload["normal_form"]


def test_coha_mul(capsys):
    lhs = json.dumps(RatPoly.one((("0", 0), ("1", 1), ("inf", 0))).to_json())
    rhs = json.dumps(RatPoly.one((("0", 1), ("1", 0), ("inf", 1))).to_json())
    code, out, _ = call(capsys, "--format", "json", "coha", "mul", "--quiver", "n=1", "--lhs", lhs, "--rhs", rhs, "--reduce")
    assert code == 0
    payload = json.loads(out)
    assert payload["text"] == "-x[1,1] + x[inf,1]"
    assert RatPoly.from_json(payload["product"]).to_text() == payload["text"]
    cls = quot_from_json(payload["class"], 1)
    assert cls.to_json() == payload["class"]


def test_series_outputs(capsys):
    code, out, _ = call(capsys, "--format", "json", "series", "dt", "--n", "1", "--max-q", "5", "--max-d", "3")
    assert code == 0 and json.loads(out)["matches_dt_data"]
    code, out, _ = call(capsys, "series", "poincare", "--n", "1", "--max-q", "4", "--max-d", "3")
    assert code == 0 and "1,1,1\t2\t3" in out


def test_generators_and_euler(capsys):
    code, out, _ = call(capsys, "coha", "generators", "--n", "1", "--max-index", "1")
    assert code == 0 and "h4" in out and "e1,3" in out
    code, out, _ = call(capsys, "quiver", "euler", "--n", "1", "--d", "1,1,1", "--e", "1,1,1")
    assert code == 0 and "quiver\t0" in out


def test_check_relations(capsys):
    code, out, _ = call(capsys, "coha", "check-relations", "--n", "2", "--max-index", "1")
    assert code == 0 and "FAIL" not in out


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["pn", "normal-form", "--n", "1", "--word", "e5.1"],
    ["coha", "dims", "--n", "3", "--d", "1,1,1,1"],
    ["coha", "dims", "--n", "1", "--d", "1,1,1,1,1"],
    ["verify"],
])
def test_usage_errors(capsys, argv):
    assert run(argv) == 2


def test_deterministic(capsys):
    argv = ["verify", "--n", "0", "--max-index", "2", "--seed", "5", "--samples", "20"]
    _, a, _ = call(capsys, *argv)
    _, b, _ = call(capsys, *argv)
    assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pncoha", "pn", "normal-form", "--n", "0", "--word", "g.0 g.2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "g.2 g.0 + 2 g.0 h.2"
