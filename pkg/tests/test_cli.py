import json
import pathlib

import pytest

import weakcat
from weakcat import cli
from weakcat.globpro import globularize, materialize_hom
from weakcat.pasting import tree_to_str
from weakcat.pros import (NormalizedPro, expr_to_str, monoid_presentation,
                          nf_to_expr)

THEORIES = pathlib.Path(weakcat.__file__).parent / "theories"
MONOID = str(THEORIES / "monoid.json")
ALGEBRA = str(THEORIES / "monoid_in_categories.json")
GOLDEN = pathlib.Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_bundled_monoid(capsys):
    code, out, err = run(capsys, "validate", MONOID)
    assert code == 0
    assert out.startswith("ok:")


def test_validate_bundled_pointed_set(capsys):
    code, out, _ = run(capsys, "validate", str(THEORIES / "pointed_set.json"))
    assert code == 0


def test_malformed_json_is_an_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"generators": [')
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert "line" in err and "column" in err


def test_missing_file_is_an_input_error(capsys):
    code, _, err = run(capsys, "validate", str(GOLDEN / "nonexistent.json"))
    assert code == 2


def test_broken_relation_types_fail_with_witness(tmp_path, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text(json.dumps({
        "generators": [{"name": "m", "arity": 2, "coarity": 1}],
        "rules": [["m", "(id 1)"]],
    }))
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 1
    assert "failed:" in err


def test_hom_listing_matches_the_engine(capsys):
    code, out, _ = run(capsys, "hom", MONOID, "2", "1", "1")
    assert code == 0
    listed = json.loads(out)
    GP = globularize(NormalizedPro(monoid_presentation()), 1)
    H = materialize_hom(GP, 2, 1, 1, 2)
    sig = monoid_presentation().sig()
    expected = [{"p": expr_to_str(nf_to_expr(phi, sig)),
                 "tree": tree_to_str(t.tree)}
                for (phi, t) in H.glob.cells_at(1)]
    assert listed["hom"] == [2, 1] and listed["dim"] == 1
    assert listed["cells"] == expected


def test_hom_dimension_above_bound_is_an_input_error(capsys):
    code, _, err = run(capsys, "hom", MONOID, "2", "1", "5")
    assert code == 2
    assert "max-dim" in err


def test_negative_bound_is_an_input_error(capsys):
    code, _, err = run(capsys, "validate", MONOID, "--max-dim", "-1")
    assert code == 2


def test_globularize_descriptor(capsys):
    code, out, _ = run(capsys, "globularize", MONOID)
    assert code == 0
    data = json.loads(out)
    assert data["homCellCounts"]["2,1"] == {"0": 1, "1": 3}
    assert {g["name"] for g in data["generators"]} == {"m", "e"}


@pytest.mark.parametrize("argv", [
    ("validate", MONOID),
    ("globularize", MONOID),
    ("hom", MONOID, "2", "1", "1"),
    ("hom", MONOID, "2", "2", "0", "--format", "text"),
    ("weaken", MONOID, "--format", "text"),
    ("export-dot", MONOID),
])
def test_commands_are_byte_stable(capsys, argv):
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_weaken_matches_committed_golden_output(capsys):
    code, out, _ = run(capsys, "weaken", MONOID)
    assert code == 0
    golden = (GOLDEN / "monoid_weaken_default.json").read_text()
    assert out == golden


def test_weaken_writes_to_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "weaken", MONOID, "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == (GOLDEN / "monoid_weaken_default.json"
                                  ).read_text()


def test_export_dot_emits_a_graph(capsys):
    code, out, _ = run(capsys, "export-dot", MONOID)
    assert code == 0
    assert out.startswith("digraph") and "->" in out
    code2, dot_out, _ = run(capsys, "weaken", MONOID, "--format", "dot")
    assert code2 == 0 and dot_out == out


def test_check_algebra_bundled_example_passes(capsys):
    code, out, _ = run(capsys, "check-algebra", MONOID, ALGEBRA)
    assert code == 0
    assert out.startswith("ok:")


def test_check_algebra_corrupted_fails_with_witness(tmp_path, capsys):
    data = json.loads(pathlib.Path(ALGEBRA).read_text())
    data["interp"]["m"]["1"]["u00,u00"] = ["u01"]
    bad = tmp_path / "corrupt.json"
    bad.write_text(json.dumps(data))
    code, _, err = run(capsys, "check-algebra", MONOID, str(bad))
    assert code == 1
    assert "failed:" in err and "m" in err


def test_check_algebra_missing_table_entry(tmp_path, capsys):
    data = json.loads(pathlib.Path(ALGEBRA).read_text())
    del data["compose"]["0"]["u00,u00"]
    bad = tmp_path / "gap.json"
    bad.write_text(json.dumps(data))
    code, _, err = run(capsys, "check-algebra", MONOID, str(bad))
    assert code == 1
    assert "no entry" in err or "failed:" in err
