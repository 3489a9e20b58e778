import json

import pytest

from periodlab.cli import run
from periodlab.isocrystal import FilteredIsocrystal
from periodlab.periodcoh import PeriodDatum

DRINFELD2 = {
    "n": 2,
    "slopes": ["0", "0"],
    "flag": [{"jump": "1", "basis": [["1", "t"]]}, {"jump": "-1", "basis": [["1", "0"], ["0", "1"]]}],
}


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_no_arguments_prints_usage(capsys):
    code, out, err = call(capsys)
    assert code == 2 and out == ""
    assert err.startswith("usage:") and "error[USAGE]" in err


def test_unknown_subcommand(capsys):
    code, _, err = call(capsys, "frobnicate")
    assert code == 2 and err.count("\n") == 1 and err.startswith("error[USAGE]")


def test_admissible_file(capsys, tmp_path):
    f = tmp_path / "drinfeld2.json"
    f.write_text(json.dumps(DRINFELD2))
    code, out, _ = call(capsys, "admissible", "--file", str(f), "--height", "3")
    assert code == 0
    assert json.loads(out)["verdict"] == "admissible"


def test_kostant_rows(capsys):
    code, out, _ = call(capsys, "kostant", "--n", "3", "--mu", "2,-1,-1", "--tsv")
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    assert code == 0 and [r[1] for r in rows] == ["0", "1", "2"]


def test_emitted_data_round_trip(capsys):
    code, out, _ = call(capsys, "hn", "--data", json.dumps(DRINFELD2))
    datum = json.loads(out)["datum"]
    assert FilteredIsocrystal.from_json(datum) == FilteredIsocrystal.from_json(DRINFELD2)
    code, out, _ = call(capsys, "cohomology", "--n", "3", "--mu", "2,-1,-1", "--galois", "0,1,2")
    datum = json.loads(out)["datum"]
    assert PeriodDatum.from_json(datum) == PeriodDatum.from_json(
        {"n": 3, "mu": ["2", "-1", "-1"], "nu_b": ["0", "0", "0"], "galois": [0, 1, 2]})


def test_cohomology_tsv_columns(capsys):
    code, out, _ = call(capsys, "--tsv", "cohomology", "--n", "2", "--mu", "1,-1")
    lines = out.splitlines()
    assert lines[0].split("\t") == ["degree", "I_set", "orbit_size", "l", "rho_twist", "overall_twist", "description"]
    assert [line.split("\t")[:2] for line in lines[1:]] == [["0", "a1"], ["1", "-"]]


def test_height_environment_variable(capsys, monkeypatch):
    monkeypatch.setenv("PERIODLAB_HEIGHT", "1")
    _, out, _ = call(capsys, "admissible", "--data", json.dumps(DRINFELD2))
    assert json.loads(out)["height_bound"] == 1
    _, out, _ = call(capsys, "admissible", "--data", json.dumps(DRINFELD2), "--height", "2")
    assert json.loads(out)["height_bound"] == 2
    monkeypatch.setenv("PERIODLAB_HEIGHT", "many")
    code, _, err = call(capsys, "admissible", "--data", json.dumps(DRINFELD2))
    assert code == 2 and "PERIODLAB_HEIGHT" in err


@pytest.mark.parametrize("argv,code,tag", [
    (["complex-check", "--n", "5", "--q", "2"], 1, "CAPACITY"),
    (["kostant", "--n", "3", "--mu", "1,2,3"], 1, "INVALID_DATUM"),
    (["calibrate", "--n-max", "2"], 1, "DEGREE_RULE"),
    (["admissible", "--data", "{not json"], 2, "USAGE"),
    (["admissible"], 2, "USAGE"),
    (["steinberg-dim", "--n", "3", "--q", "2", "--I", "a7"], 2, "USAGE"),
    (["admissible", "--data", json.dumps({"n": 2, "slopes": ["1/2", "1/2"],
                                          "flag": [{"jump": "0", "basis": [["1", "0"], ["0", "1"]]}]})],
     1, "UNSUPPORTED"),
])
def test_error_codes(capsys, argv, code, tag):
    got, out, err = call(capsys, *argv)
    assert got == code and out == ""
    assert err.strip().splitlines()[-1].startswith(f"error[{tag}]")


def test_repeated_invocations_identical(capsys):
    outs = {call(capsys, "duality", "--d", "2", "--q", "2")[1] for _ in range(3)}
    assert len(outs) == 1


def test_polygon_modes(capsys):
    _, out, _ = call(capsys, "polygon", "--slopes", "1,-1,-1")
    assert json.loads(out)["vertices"][-1] == [3, 1, -1, 1]
    _, out, _ = call(capsys, "polygon", "--type", "1:1,-1:1")
    assert json.loads(out)["vertices"] == [[0, 1, 0, 1], [1, 1, -1, 1], [2, 1, 0, 1]]
    _, out, _ = call(capsys, "polygon", "--data", json.dumps(DRINFELD2))
    res = json.loads(out)
    assert res["newton_on_or_above_hodge"] and res["endpoints_equal"]


def test_drinfeld_and_steinberg(capsys):
    _, out, _ = call(capsys, "drinfeld", "--coords", "1,t,1+t")
    res = json.loads(out)
    assert res["member"] is False and res["agree"] is True
    _, out, _ = call(capsys, "steinberg-dim", "--n", "3", "--q", "2")
    assert json.loads(out)["dimension"] == 8
    _, out, _ = call(capsys, "complex-check", "--n", "2", "--q", "3")
    res = json.loads(out)
    assert res["homology"] == [0, 3] and res["exact_except"] == [1]
