import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from tropsection import cli, grass2, matrixvar, tropcore
from tropsection.tropcore import format_trop
from tropsection.valfield import Polynomial

DATA = Path(__file__).parent / "data"
CORPORA = sorted(p.stem for p in DATA.glob("*_corpus.json"))


def run(tmp_path, command, request=None, *flags):
    argv = [command, *flags]
    if request is not None:
        path = tmp_path / "req.json"
        path.write_text(json.dumps(request))
        argv += ["--input", str(path)]
    out = tmp_path / "out.json"
    code = cli.main(argv + ["--output", str(out)])
    return code, json.loads(out.read_text())


def test_membership_examples(tmp_path):
    code, out = run(tmp_path, "membership", {"family": "grass2", "point": {"values": ["3", "1", "1", "3", "2", "0"]}})
    assert code == 0 and out["member"]
    code, out = run(tmp_path, "membership", {"family": "rank2", "point": {"matrix": [[0, 1], [1, 0]]}})
    assert code == 0 and out["member"]
    code, out = run(tmp_path, "membership", {"family": "grass2", "point": {"values": [0, 0, 0, 0, 1, 2]}})
    assert code == 1 and out["witness"] == [0, 1, 2, 3]


def test_hypersurface_membership(tmp_path):
    from tropsection import hyperdet

    delta = hyperdet.hyperdeterminant()
    values = ["0"] * 7 + ["1"]
    code, out = run(tmp_path, "membership", {"family": "hypersurface", "polynomial": delta.to_json(), "point": {"values": values}})
    value, count = delta.trop_eval_min([tropcore.to_trop(v) for v in values])
    assert out["witness"] == {"value": format_trop(value), "attaining_terms": count}
    assert out["member"] == (count >= 2) and code == (0 if count >= 2 else 1)


@pytest.mark.parametrize("name", CORPORA)
def test_golden_corpus(tmp_path, name):
    request = json.loads((DATA / f"{name}.json").read_text())
    expected = json.loads((DATA / f"{name}.expected.json").read_text())
    code, out = run(tmp_path, "section-eval", request, "--verbose")
    assert code == 0 and out == expected


# worked out by hand from the weight components of each polynomial
HAND_CHECKED = {
    "grass2_corpus": ["3", "0", "inf", "3/2", "2", "-1"],
    "hyperdet_corpus": ["0", "3", "inf", "3"],
    "linear_corpus": ["0", "inf", "0"],
    "rank2_corpus": ["0", "1", "inf", "1", "5/3"],
}


@pytest.mark.parametrize("name", CORPORA)
def test_golden_corpus_agrees_with_library(name):
    request = json.loads((DATA / f"{name}.json").read_text())
    evaluate, _ = cli.build_section(request["family"], request)
    values = [format_trop(evaluate(Polynomial.from_json(p))) for p in request["polynomials"]]
    assert values == HAND_CHECKED[name]


def test_section_eval_round_trip_and_non_member(tmp_path):
    vals = ["3", "1", "1", "3", "2", "0"]
    polys = [grass2.coordinate(4, i, j).to_json() for i, j in grass2.pairs(4)]
    code, out = run(tmp_path, "section-eval", {"family": "grass2", "point": {"values": vals}, "polynomials": polys})
    assert code == 0 and out["values"] == vals
    code, out = run(tmp_path, "section-eval", {"family": "grass2", "point": {"values": [0, 0, 0, 0, 1, 2]}, "polynomials": polys})
    assert code == 1 and not out["member"]


def test_decompose_matches_library(tmp_path):
    xi = [[3, 1], [4, 2], [0, 5]]
    code, out = run(tmp_path, "decompose", {"family": "rank2", "point": {"matrix": xi}})
    d = matrixvar.decompose_rank2(xi)
    assert code == 0
    assert out["decomposition"]["tau"] == [format_trop(v) for v in d.tau]
    assert out["decomposition"]["rho"] == [format_trop(v) for v in d.rho]
    assert out["decomposition"]["eta"] == d.eta.to_json()


def test_rank(tmp_path):
    code, out = run(tmp_path, "rank", {"matrix": [[0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 2, 2], [0, 0, 3, 3]]})
    assert code == 0 and out["tropical_rank"] == 2
    # rows 3, 4 take columns 1, 2 in either order, and so do rows 1, 2 with columns 3, 4
    assert out["determinant"] == {"value": "1", "attaining_count": 4, "singular": True}


def test_discontinuity_demo(tmp_path):
    code, out = run(tmp_path, "remark43-demo", {"a": [0, 1, 2, 3], "b": [3, 1, 0, 2]})
    assert code == 0 and out["distinct"] and out["p"] != out["q"]
    code, out = run(tmp_path, "remark43-demo", {"a": [0, 1, 2, 3], "b": [0, 1, 2, 3]})
    assert code == 2 and "error" in out


def test_oracle_compare(tmp_path):
    code, out = run(tmp_path, "oracle-compare", None, "--samples", "40", "--seed", "5")
    assert code == 0 and out["agree"] + out["degenerate"] == 40 and not out["disagreements"]
    code, out = run(tmp_path, "oracle-compare", None, "--family", "line", "--samples", "20")
    assert code == 0 and out["agree"] + out["degenerate"] == 20


def test_verify_hyperdet_orbits_only(tmp_path):
    code, out = run(tmp_path, "verify-hyperdet", None, "--orbits-only")
    assert code == 0 and out["passed"]
    assert out["fan"]["orbit_count"] == 6
    assert "cover" not in out and "absorption" not in out


@pytest.mark.parametrize(
    "request_body",
    [
        {"family": "nonsense"},
        {"family": "grass2", "point": {"values": ["x"]}},
        {"family": "grass2", "point": {}},
        {"family": "grass2", "point": {"values": [0, 0, 0, 0]}},
        {"point": {"values": [0]}},
    ],
)
def test_errors_exit_two(tmp_path, request_body):
    code, out = run(tmp_path, "membership", request_body)
    assert code == 2 and "error" in out


def test_unreadable_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["membership", "--input", str(bad), "--output", str(tmp_path / "o.json")]) == 2


def test_deterministic_bytes(tmp_path):
    args = [sys.executable, "-m", "tropsection.cli", "remark43-demo", "--seed", "11"]
    first = subprocess.run(args, capture_output=True, check=True).stdout
    second = subprocess.run(args, capture_output=True, check=True).stdout
    assert first == second
    req = DATA / "grass2_corpus.json"
    args = [sys.executable, "-m", "tropsection.cli", "section-eval", "--verbose", "--input", str(req)]
    assert subprocess.run(args, capture_output=True).stdout == subprocess.run(args, capture_output=True).stdout


def test_stdin_input():
    body = json.dumps({"family": "linear", "equations": [[1, -1]], "point": {"values": ["3", "3"]}})
    res = subprocess.run(
        [sys.executable, "-m", "tropsection.cli", "membership", "--input", "-"],
        input=body.encode(),
        capture_output=True,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["member"]


def test_schema_is_documented_and_valid():
    import jsonschema

    jsonschema.Draft202012Validator.check_schema(cli.REQUEST_SCHEMA)
    assert Fraction(format_trop(Fraction(3, 2))) == Fraction(3, 2)
