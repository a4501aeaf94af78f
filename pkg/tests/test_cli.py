import json
import shutil
import subprocess
import sys
from importlib import resources

import pytest

from hkinvariants.cli import parse_tsv, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def results(capsys, *argv):
    code, out, _ = call(capsys, *argv)
    assert code == 0
    return parse_tsv(out)["results"]


def test_bound_from_coefficients(capsys):
    assert results(capsys, "bound", "--coeffs", "1/4,3/2,17/8", "--n", "2")["bound"] == "16"


def test_bound_from_mu(capsys):
    assert results(capsys, "bound", "--mu", "16/3", "--n", "2")["bound"] == "8"


def test_rr_eval(capsys):
    r = results(capsys, "rr", "--type", "k3n", "--n", "2", "--eval", "2")
    assert r["RR(2)"] == "6"
    assert r["polynomial"] == "1/8*q^2 + 5/4*q + 3"


@pytest.mark.parametrize("argv", [
    ["rr", "--type", "k3n", "--n", "2", "--format", "json"],
    ["orbifold", "derive", "--builtin", "k4_prime", "--format", "json"],
    ["catalog", "--name", "og6", "--verify", "--format", "json"],
    ["fujiki", "--from-rr", "--type", "kumn", "--n", "3", "--format", "json"],
])
def test_tsv_and_json_agree(capsys, argv):
    code_j, out_j, _ = call(capsys, *argv)
    tsv_argv = argv[:-2]
    code_t, out_t, _ = call(capsys, *tsv_argv)
    assert code_j == code_t == 0
    j, t = json.loads(out_j), parse_tsv(out_t)
    assert j["results"] == t["results"]
    assert j["checks"] == t["checks"]


def test_approx_column(capsys):
    code, out, _ = call(capsys, "bound", "--mu", "16/3", "--n", "2", "--approx")
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()]
    mu = next(r for r in rows if r[:2] == ["result", "mu"])
    assert mu[2] == "16/3" and mu[3].startswith("5.333")


def test_usage_errors(capsys):
    assert call(capsys, "rr", "--type", "k3n", "--n", "1")[0] == 2
    assert call(capsys, "bound", "--n", "2")[0] == 2
    assert call(capsys, "bound", "--coeffs", "1/0,1,1", "--n", "2")[0] == 2
    assert call(capsys, "catalog", "--name", "og8")[0] == 2
    assert call(capsys, "genus", "--class", "td", "--k", "7")[0] == 3
    assert call(capsys, "graphs", "--verify", "wheeling", "--n", "5")[0] == 3


def test_invalid_profile_exits_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"name": "x", "half_dim_n": 2}))
    assert call(capsys, "orbifold", "derive", "--profile", str(p))[0] == 2


def test_orbifold_k4_appendix(capsys):
    code, out, _ = call(capsys, "orbifold", "k4-appendix")
    t = parse_tsv(out)
    assert code == 0
    assert t["results"]["C(c2)"] == "10*sqrt(C1)"
    assert t["results"]["C(td4)"] == "15/16"
    assert t["checks"] == {"salamon": True}


def test_genus_plain(capsys):
    code, out, _ = call(capsys, "genus", "--class", "td", "--k", "2", "--plain")
    assert code == 0 and out.splitlines() == ["1/240 * c2^2", "-1/720 * c4"]


def test_graphs_basic(capsys):
    code, out, _ = call(capsys, "graphs", "--verify", "basic")
    assert code == 0
    assert all(parse_tsv(out)["checks"].values())


def test_reproduce_single_check(capsys):
    code, out, err = call(capsys, "reproduce", "--only", "appendix-k4")
    assert code == 0
    assert err.startswith("[PASS] appendix-k4")
    assert parse_tsv(out)["checks"] == {"appendix-k4": True}


def test_reproduce_unknown_check(capsys):
    assert call(capsys, "reproduce", "--only", "nope")[0] == 2


def test_corrupted_fixture_names_first_failure(capsys, tmp_path):
    dst = tmp_path / "data"
    shutil.copytree(str(resources.files("hkinvariants") / "data"), dst)
    p = dst / "manifolds" / "og10.json"
    data = json.loads(p.read_text())
    data["table"]["c8"]["value"] = str(int(data["table"]["c8"]["value"]) + 1)
    p.write_text(json.dumps(data))
    code, out, err = call(capsys, "reproduce", "--fixture-dir", str(dst))
    assert code == 1
    assert "first failing check: sqrt-todd" in err
    assert parse_tsv(out)["checks"]["sqrt-todd"] is False


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hkinvariants.cli", "bound", "--mu", "16/3", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "result\tbound\t8" in proc.stdout
