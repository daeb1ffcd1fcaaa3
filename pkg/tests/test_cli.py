import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from cobordalg import products
from cobordalg.cli import UsageError, _check_weight, build_parser, main, parse_element


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _poly(rows):
    return {tuple(t["mono"]): Fraction(t["coef"]) for t in rows}


# -- fgl, log, structure constants ---------------------------------------------------


def test_fgl_weight_two(capsys):
    code, out, _ = run(["fgl", "--max-weight", "2"], capsys)
    data = json.loads(out)
    assert code == 0 and data["truncation"] == 2
    entries = {(e["i"], e["j"]): e for e in data["entries"]}
    assert _poly(entries[(1, 1)]["poly"]) == {(1, 0): 2}
    assert _poly(entries[(1, 2)]["poly"]) == {(0, 1): 3, (2, 0): -2}
    assert entries[(1, 1)]["lambda"] == [{"alpha": [[1, 1]], "coef": "1"}]


def test_fgl_weight_one(capsys):
    code, out, _ = run(["fgl", "--max-weight", "1"], capsys)
    data = json.loads(out)
    assert code == 0 and [(e["i"], e["j"]) for e in data["entries"]] == [(1, 1)]


@pytest.mark.parametrize("argv", [["fgl", "--max-weight", "0"], ["log", "--max-weight", "0"],
                                  ["fgl", "--max-weight", "13"],
                                  ["structure-constants", "--max-weight", "-1"]])
def test_bad_weights_exit_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and out == "" and err.startswith("error:")


def test_unknown_flag_exit_2(capsys):
    assert run(["fgl", "--bogus"], capsys)[0] == 2
    assert run(["verify", "--suite", "nope"], capsys)[0] == 2


def test_unsafe_flag_lifts_guardrail():
    args = build_parser().parse_args(["fgl", "--max-weight", "13", "--unsafe"])
    assert _check_weight(args) == 13
    args = build_parser().parse_args(["fgl", "--max-weight", "13"])
    with pytest.raises(UsageError):
        _check_weight(args)


def test_log_values(capsys):
    code, out, _ = run(["log", "--max-weight", "3"], capsys)
    data = json.loads(out)
    assert code == 0 and data["round_trip"] is True
    log = {r["k"]: _poly(r["poly"]) for r in data["log"]}
    exp = {r["k"]: _poly(r["poly"]) for r in data["exp"]}
    assert exp[1] == {(1, 0, 0): 1}
    assert log[1] == {(1, 0, 0): -1}
    assert log[2] == {(2, 0, 0): 2, (0, 1, 0): -1}


def test_structure_constants(capsys):
    code, out, _ = run(["structure-constants", "--max-weight", "3"], capsys)
    rows = json.loads(out)["rows"]
    table = {(tuple(r["a"]), tuple(r["b"])): {tuple(p["w"]): int(p["coef"]) for p in r["product"]}
             for r in rows}
    assert table[((1,), (1,))] == {(2,): 2, (1, 1): 2}
    assert table[((), (2, 1))] == {(2, 1): 1}
    ab, ba = table[((1,), (2,))], table[((2,), (1,))]
    diff = {w: ab.get(w, 0) - ba.get(w, 0) for w in set(ab) | set(ba)}
    assert {w: c for w, c in diff.items() if c} == {(3,): 1}


@pytest.mark.parametrize("cmd", ["fgl", "log", "structure-constants"])
def test_csv_and_json_agree(cmd, capsys):
    _, js, _ = run([cmd, "--max-weight", "3"], capsys)
    _, cs, _ = run([cmd, "--max-weight", "3", "--format", "csv"], capsys)
    data = json.loads(js)
    rows = list(csv.DictReader(io.StringIO(cs)))
    if cmd == "fgl":
        want = {(e["i"], e["j"], " ".join(map(str, t["mono"]))): Fraction(t["coef"])
                for e in data["entries"] for t in e["poly"]}
        got = {(int(r["i"]), int(r["j"]), r["mono"]): Fraction(r["coef"]) for r in rows}
    elif cmd == "log":
        want = {(name, r["k"], " ".join(map(str, t["mono"]))): Fraction(t["coef"])
                for name in ("exp", "log") for r in data[name] for t in r["poly"]}
        got = {(r["series"], int(r["k"]), r["mono"]): Fraction(r["coef"]) for r in rows}
    else:
        want = {(" ".join(map(str, r["a"])), " ".join(map(str, r["b"])), " ".join(map(str, p["w"]))):
                Fraction(p["coef"]) for r in data["rows"] for p in r["product"]}
        got = {(r["a"], r["b"], r["w"]): Fraction(r["coef"]) for r in rows}
    assert got == want and got


def test_out_file(tmp_path, capsys):
    path = tmp_path / "t.json"
    code, out, _ = run(["fgl", "--max-weight", "2", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["truncation"] == 2


# -- verify ---------------------------------------------------------------------------


def test_verify_hopf(capsys):
    code, out, _ = run(["verify", "--suite", "hopf", "--max-weight", "6"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and rep["seed"] == 0


def test_verify_all_is_deterministic(capsys):
    a = run(["verify", "--suite", "all", "--max-weight", "4"], capsys)
    b = run(["verify", "--suite", "all", "--max-weight", "4"], capsys)
    assert a[0] == 0 and a == b


def test_verify_csv(capsys):
    code, out, _ = run(["verify", "--suite", "fgl", "--max-weight", "3", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows and all(r["pass"] == "1" for r in rows)


def test_verify_products_detects_mutation(capsys, monkeypatch):
    monkeypatch.setattr(products, "_EQ20_SIGN", 1)
    code, out, _ = run(["verify", "--suite", "products", "--max-weight", "3"], capsys)
    rep = json.loads(out)
    assert code == 1 and not rep["pass"]
    failing = [c["name"] for s in rep["sections"] for c in s["checks"] if not c["pass"]]
    assert any("expanded" in n for n in failing)


# -- product-check -----------------------------------------------------------------------


def _spec(tmp_path, spec):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec) if not isinstance(spec, str) else spec)
    return str(path)


def test_product_check_mu2_newton(tmp_path, capsys):
    spec = {"construction": "mu2", "params": {"operator": {"type": "newton"}, "beta": "x"},
            "check_weight": 5}
    code, out, _ = run(["product-check", _spec(tmp_path, spec)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["associative"] is True and rep["witness"] is None


def test_product_check_mu1_newton(tmp_path, capsys):
    spec = {"construction": "mu1", "params": {"pi1": {"type": "newton"}, "pi2": {"type": "newton"}},
            "check_weight": 4}
    code, out, _ = run(["product-check", _spec(tmp_path, spec)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["associative"] is False and len(rep["witness"]) == 3


def test_product_check_mu2_violation(tmp_path, capsys):
    spec = {"construction": "mu2", "params": {"operator": {"type": "evaluation"}, "beta": "1"},
            "check_weight": 4}
    code, out, _ = run(["product-check", _spec(tmp_path, spec)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["associative"] is False  # the certificate predicts the failure
    assert rep["witness"] == ["a", "a", "a^2"]
    # below weight 4 no failing triple exists, so the prediction is not confirmed
    spec["check_weight"] = 3
    code, out, _ = run(["product-check", _spec(tmp_path, spec)], capsys)
    assert code == 1 and json.loads(out)["associative"] is True


def test_product_check_mu3_and_phi(tmp_path, capsys):
    spec = {"construction": "mu3", "params": {"model": "degenerate",
                                              "operator": {"type": "evaluation"}}, "check_weight": 4}
    code, out, _ = run(["product-check", _spec(tmp_path, spec)], capsys)
    assert code == 0 and json.loads(out)["associative"] is True
    phi = {"truncation": 2, "terms": [{"wi": [], "wj": [], "poly": [{"mono": [], "coef": "1"}]},
                                      {"wi": [1], "wj": [], "poly": [{"mono": [1], "coef": "2"}]}]}
    code, out, _ = run(["product-check", _spec(tmp_path, {"construction": "phi",
                                                          "params": {"phi": phi}})], capsys)
    assert code == 0 and json.loads(out)["certificate"]["round_trip"] is True


@pytest.mark.parametrize("spec", ["{not json", {"construction": "mu9"}, {"construction": "mu1"},
                                  {"construction": "mu2", "params": {"operator": {"type": "warp"}}},
                                  {"construction": "mu2", "check_weight": 99,
                                   "params": {"operator": {"type": "newton"}}},
                                  {"construction": "mu2", "params": {"operator": {"type": "newton"},
                                                                     "beta": "x +* y"}},
                                  [1, 2]])
def test_product_check_malformed(tmp_path, capsys, spec):
    code, out, err = run(["product-check", _spec(tmp_path, spec)], capsys)
    assert code == 2 and out == "" and err.startswith("error:")


def test_product_check_missing_file(capsys):
    assert run(["product-check", "/nonexistent/spec.json"], capsys)[0] == 2


def test_parse_element():
    V = (("x", 1), ("s*1", 1))
    p = parse_element("x**2 - 3/2*s_1", V)
    assert p.terms == {(2, 0): 1, (0, 1): Fraction(-3, 2)}
    with pytest.raises(UsageError):
        parse_element("z", V)
    with pytest.raises(UsageError):
        parse_element(["x"], V)


def test_console_script_and_module():
    r = subprocess.run([sys.executable, "-m", "cobordalg", "fgl", "--max-weight", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["truncation"] == 1
    r = subprocess.run([sys.executable, "-m", "cobordalg", "fgl", "--max-weight", "0"],
                       capture_output=True, text=True)
    assert r.returncode == 2
