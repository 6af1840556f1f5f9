import json
from fractions import Fraction

import pytest

from windmills.cli import main
from windmills.errors import InputError
from windmills.io import dumps, load_distance_system, load_tree, rational, read_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def test_rational_parsing():
    assert rational("3/6") == Fraction(1, 2)
    assert rational(2) == 2
    for bad in ("0.5", "1e3", True, 0.5, "x"):
        with pytest.raises(InputError):
            rational(bad)


def test_floats_never_enter_or_leave(tmp_path):
    p = tmp_path / "f.json"
    p.write_text('{"theta": 0.5}')
    with pytest.raises(InputError):
        read_json(p)
    with pytest.raises(TypeError):
        dumps({"x": 0.5})
    assert dumps({"b": Fraction(1, 3), "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": "1/3"\n}\n'


def test_load_systems(data_dir):
    ds = load_distance_system(data_dir / "small_system.json")
    assert ds.d(0, 1, 2) == Fraction(1, 3) and ds.theta == Fraction(1, 2)
    tree = load_tree(data_dir / "tree.json")
    assert tree.n == 7
    with pytest.raises(InputError):
        load_distance_system({"vertices": 3})
    with pytest.raises(InputError):
        load_tree({"edges": [[0, 1, 2]]})


def test_axioms_and_complex_commands(capsys, data_dir):
    code, rep, _ = run(capsys, "axioms", "--in", str(data_dir / "tree.json"))
    assert code == 0 and rep["status"] == "pass" and rep["result"]["triples_ok"]
    code, rep, _ = run(capsys, "complex", "--in", str(data_dir / "tree.json"), "--K", "1/2")
    assert code == 0 and len(rep["result"]["edges"]) == 6 and rep["result"]["connected"]
    assert rep["config"]["K"] == "1/2"


def test_axioms_counterexample_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"vertices": 4, "entries": [[0, 1, 3, 5], [0, 1, 2, 1], [0, 2, 3, 1]]}))
    code, rep, _ = run(capsys, "axioms", "--in", str(p))
    assert code == 2 and rep["status"] == "counterexample"


def test_constants_command(capsys, data_dir):
    code, rep, _ = run(capsys, "constants", "--in", str(data_dir / "tree.json"))
    assert code == 0 and rep["result"]["L_threshold"] == "1/1"


def test_input_errors(capsys, data_dir, tmp_path):
    code, rep, err = run(capsys, "axioms", "--in", str(tmp_path / "missing.json"))
    assert code == 1 and rep is None and "cannot read" in err
    code, _, err = run(capsys, "windmill", "--in", str(data_dir / "z3z3.json"), "--depth", "-1")
    assert code == 1 and "non-negative" in err
    code, _, _ = run(capsys, "certify")
    assert code == 1
    code, _, err = run(capsys, "thurston", "congruence", "--in", str(data_dir / "homology.json"),
                       "--m-range", "2-9")
    assert code == 1 and "--m-range" in err


def test_spin_check_and_refusal(capsys, data_dir):
    z3 = str(data_dir / "z3z3.json")
    code, rep, _ = run(capsys, "spin-check", "--in", z3, "--radius", "3")
    assert code == 0 and rep["result"]["spinning"]["L_measured"] == "1/1"
    code, rep, _ = run(capsys, "spin-check", "--in", z3, "--radius", "3", "--L", "2")
    assert code == 2 and rep["status"] == "counterexample"
    code, rep, _ = run(capsys, "certify", "--in", z3, "--radius", "3", "--L", "2")
    assert code == 2 and rep["result"]["certificate"] is None


def test_windmill_truncation_exit_codes(capsys, data_dir):
    f2 = str(data_dir / "f2_axes.json")
    code, rep, _ = run(capsys, "windmill", "--in", f2, "--radius", "3")
    assert code == 3 and rep["status"] == "inconclusive"
    assert rep["result"]["windmill"]["truncated_at"] == 1
    code, rep, _ = run(capsys, "windmill", "--in", f2, "--radius", "3", "--allow-truncated")
    assert code == 0


def test_certify_explicit_run(capsys, data_dir):
    code, rep, _ = run(capsys, "certify", "--in", str(data_dir / "star_run.json"))
    assert code == 0
    assert rep["result"]["certificate"]["isomorphism_target"] == "Z/3"


def test_thurston_commands(capsys, data_dir):
    code, rep, _ = run(capsys, "thurston", "classify", "--in", str(data_dir / "thurston.json"))
    assert code == 0
    assert [w["class"] for w in rep["result"]["words"]] == ["pseudo_anosov", "pseudo_anosov", "periodic", "reducible"]
    code, rep, _ = run(capsys, "thurston", "stretch", "--in", str(data_dir / "stretch.json"))
    sf = rep["result"]["words"][0]["stretch_factor"]
    assert code == 0 and sf == {"a": "11/2", "b": "3/2", "d": 13, "text": "11/2 + 3/2*sqrt(13)"}
    code, rep, _ = run(capsys, "thurston", "independence", "--in", str(data_dir / "independence.json"))
    assert code == 0 and rep["result"]["result"] == "independent"
    code, rep, _ = run(capsys, "thurston", "congruence", "--in", str(data_dir / "homology.json"),
                       "--m-range", "2:50")
    assert code == 0 and rep["result"]["m_range"] == [2, 50]
    code, rep, _ = run(capsys, "thurston", "dihedral")
    assert code == 0 and len(rep["result"]["rows"]) == 400
    code, rep, _ = run(capsys, "thurston", "partition", "--in", str(data_dir / "partition.json"))
    assert code == 2 and rep["result"]["compatible"] is False


def test_reports_are_byte_identical(tmp_path, data_dir):
    out = tmp_path / "r.json"
    texts = []
    for _ in range(2):
        main(["spin-check", "--in", str(data_dir / "z3z3.json"), "--radius", "3", "--out", str(out)])
        texts.append(out.read_bytes())
    assert texts[0] == texts[1]
