import json

import pytest

from spincoh.cli import InputError, load_inputs, main, run
from spincoh.cohomology import HodgeDiamond
from spincoh.holonomy import CurvatureData


def _json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, json.loads(out.out) if out.out else None, out.err


def _write(tmp_path, obj, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_tables(capsys):
    code, rep, _ = _json(capsys, ["tables", "--n", "6"])
    assert code == 0 and rep["status"] == "pass"
    assert rep["schema_version"] == 1 and "timing_seconds" not in rep


def test_timing_only_on_request(capsys):
    code, rep, _ = _json(capsys, ["tables", "--n", "4", "--timing"])
    assert code == 0 and "timing_seconds" in rep


def test_output_is_deterministic(capsys):
    argv = ["cohomology", "torus", "--n", "4", "--operator", "d2"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_torus_n6(capsys):
    code, rep, _ = _json(capsys, ["cohomology", "torus", "--n", "6", "--operator", "d2", "--kind", "B"])
    assert code == 0
    assert rep["results"]["dims"] == [1, 4, 6, 4, 1]


def test_cy3_from_flags(capsys):
    code, rep, _ = _json(capsys, ["spectral", "cy3", "--hodge", "h11=2,h21=3"])
    assert code == 0
    assert rep["results"]["dims"] == [1, 0, 1, 6, 1, 0, 1]


def test_cy3_from_file(capsys, tmp_path):
    path = _write(tmp_path, {"type": "hodge", "h11": 1, "h21": 101})
    code, rep, _ = _json(capsys, ["spectral", "cy3", "--input", path])
    assert code == 0 and rep["results"]["dims"] == [1, 0, 0, 202, 0, 0, 1]


def test_markdown_report(capsys, tmp_path):
    out = tmp_path / "r.md"
    assert main(["tables", "--n", "4", "--md", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("# spincoh tables") and "status: **pass**" in text


def test_invariants_spin7(capsys):
    code, rep, _ = _json(capsys, ["invariants", "--group", "spin7", "--n", "8"])
    assert code == 0
    assert rep["results"]["stabilizer_dim"] == 21
    assert rep["results"]["spinors"][0]["pure"] is False


def test_operator_dump_default_carrier(capsys):
    code, rep, _ = _json(capsys, ["operator", "dump", "--n", "4", "--op", "Dp", "--kind", "B", "--p", "1"])
    # minus carrier is not available for B at n=4, so another carrier is picked
    assert code == 0 and rep["status"] == "pass"
    assert rep["results"]["operator"] == "Dp"


def test_verify_single_battery(capsys):
    code, rep, _ = _json(capsys, ["verify", "cy3"])
    assert code == 0 and rep["status"] == "pass"


@pytest.mark.parametrize("argv", [[], ["tables"], ["verify", "nope"], ["cohomology", "torus", "--n", "4"]])
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv)[0] == 2


def test_bad_hodge_flag(capsys):
    code = main(["spectral", "cy3", "--hodge", "h11=x"])
    assert code == 2
    assert "spincoh:" in capsys.readouterr().err


def test_library_error_exit_2(capsys):
    code = main(["invariants", "--group", "spin7", "--n", "6"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_load_hodge(tmp_path):
    assert isinstance(load_inputs(_write(tmp_path, {"type": "hodge", "h11": 2, "h21": 3})), HodgeDiamond)


def test_load_hodge_violation_names_invariant(tmp_path):
    path = _write(tmp_path, {"type": "hodge", "h": {"0,0": 1, "3,3": 1, "3,0": 1, "0,3": 1, "1,1": 2, "2,2": 3}})
    with pytest.raises(InputError) as info:
        load_inputs(path)
    assert "h^{1,1}" in info.value.invariant


@pytest.mark.parametrize("obj,text", [
    ([], "JSON object"),
    ({"type": "nope"}, "unknown input type"),
    ({"type": "hodge", "h11": 1}, "h21"),
    ({"type": "hodge", "h11": 1, "h21": 1, "schema_version": 9}, "schema_version"),
    ({"type": "spinor", "n": 5, "components": {"": "1"}}, "even n"),
    ({"type": "spinor", "n": 4, "components": {}}, "zero"),
    ({"type": "spinor", "n": 4, "components": {"3": "1"}}, "above m"),
])
def test_load_errors(tmp_path, obj, text):
    with pytest.raises(InputError, match=text):
        load_inputs(_write(tmp_path, obj))


def test_load_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    with pytest.raises(InputError, match="invalid JSON"):
        load_inputs(str(p))


def test_load_missing_file(tmp_path):
    with pytest.raises(InputError, match="cannot read"):
        load_inputs(str(tmp_path / "missing.json"))


def test_load_spinor(tmp_path):
    vec = load_inputs(_write(tmp_path, {"type": "spinor", "n": 4, "components": {"": "1", "1,2": "1*i"}}))
    assert set(vec) == {0, 3}


def test_load_riemann_antisymmetry(tmp_path):
    obj = {"type": "riemann", "n": 4, "components": {"1,2,1,2": "1"}}
    with pytest.raises(InputError) as info:
        load_inputs(_write(tmp_path, obj))
    assert "antisymmetry" in info.value.invariant


def test_load_riemann(tmp_path):
    comps = {"1,2,1,2": "1", "2,1,1,2": "-1", "1,2,2,1": "-1", "2,1,2,1": "1"}
    data = load_inputs(_write(tmp_path, {"type": "riemann", "n": 4, "components": comps}))
    assert isinstance(data, CurvatureData) and not data.is_zero()


def test_load_curvature_outside_spin(tmp_path):
    ident = [["1" if r == c else "0" for c in range(4)] for r in range(4)]
    with pytest.raises(InputError) as info:
        load_inputs(_write(tmp_path, {"type": "curvature", "n": 4, "components": {"1,2": ident}}))
    assert info.value.invariant == "spin(n) membership"


def test_curvature_from_input(capsys, tmp_path):
    comps = {"1,2,1,2": "1", "2,1,1,2": "-1", "1,2,2,1": "-1", "2,1,2,1": "1"}
    path = _write(tmp_path, {"type": "riemann", "n": 4, "components": comps})
    code, rep, _ = _json(capsys, ["curvature", "--input", path])
    assert code == 0
    rows = rep["results"]["rows"]
    assert len(rows) == 4
    assert not any(r["dsquared_zero"] or r["conditions_pass"] for r in rows)
