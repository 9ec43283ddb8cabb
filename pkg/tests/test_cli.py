import json
import subprocess
import sys

import pytest

from polarhull import cli, rings
from polarhull.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, ParseError


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, doc, name="u.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc, indent=2))
    return str(p)


def test_fixtures_listed(capsys):
    code, out, _ = run(["fixtures"], capsys)
    assert code == EXIT_OK
    assert set(out.split()) == {
        "boolean_2_4_8.json", "posets_le3.json", "posets_le3_no_closure.json",
        "posets_rigidity_override.json", "raw_rigidity.json", "rings_small.json"}


def test_posets_fixture_has_every_small_poset():
    from polarhull import posets

    u = cli.parse_universe("posets_le3")
    assert u.kind == "poset" and len(u.entries) == 8
    keys = sorted(posets.canonical_form(P)[0] for P in u.entries)
    expected = sorted(posets.canonical_form(P)[0] for n in (1, 2, 3) for P in posets.all_posets(n))
    assert keys == expected


def test_parse_error_names_line_and_triple(tmp_path):
    R = rings.zmod(3)
    mul = [list(row) for row in R.mul]
    mul[1][2] = 1
    text = json.dumps({"kind": "ring", "entries": [
        {"zmod": 2},
        {"name": "bad", "elements": list(R.elements), "add": [list(r) for r in R.add],
         "mul": mul}]}, indent=2)
    path = write(tmp_path, text)
    with pytest.raises(ParseError) as exc:
        cli.parse_universe(path)
    (problem,) = exc.value.problems
    line = text.splitlines().index("    {", 5) + 1
    assert problem.startswith(f"line {line}: entry 1 'bad'")
    assert "at (" in problem


def test_parse_error_collects_every_entry(tmp_path):
    doc = {"kind": "poset", "entries": [
        {"elements": ["a", "b"], "leq": [["a", "b"], ["b", "a"]]},
        {"elements": ["a"], "leq": [["a", "z"]]}]}
    with pytest.raises(ParseError) as exc:
        cli.parse_universe(write(tmp_path, doc))
    assert len(exc.value.problems) == 2
    assert "antisymmetric" in exc.value.problems[0] and "unknown" in exc.value.problems[1]


def test_degenerate_ring_rejected(tmp_path, capsys):
    Z = rings.zero_mult(2)
    doc = {"kind": "ring", "entries": [rings.ring_to_json(Z)]}
    code, _, err = run(["verify", "--universe", write(tmp_path, doc)], capsys)
    assert code == EXIT_USAGE and "degenerate" in err


def test_bad_json_reports_position(tmp_path, capsys):
    code, _, err = run(["verify", "--universe", write(tmp_path, '{"kind": "poset",\n oops}')],
                       capsys)
    assert code == EXIT_USAGE and "line 2" in err


def test_kind_mismatch(capsys):
    code, _, err = run(["verify", "--universe", "posets_le3", "--kind", "ring"], capsys)
    assert code == EXIT_USAGE and "declares kind" in err


def test_missing_file(capsys):
    code, _, err = run(["verify", "--universe", "/nonexistent/u.json"], capsys)
    assert code == EXIT_USAGE and "cannot read" in err


def test_verify_boolean_passes(capsys):
    code, out, _ = run(["verify", "--universe", "boolean_2_4_8"], capsys)
    assert code == EXIT_OK
    assert "theorem_main: 12/12" in out and out.rstrip().endswith("verdict: pass")


def test_verify_posets_reports_fullness_failure(capsys):
    code, out, _ = run(["verify", "--universe", "posets_le3"], capsys)
    assert code == EXIT_FAIL
    assert "theorem_main: 11/12" in out and "[FAIL] (8)" in out


def test_only_completion_passes(capsys):
    code, out, _ = run(["verify", "--universe", "posets_le3", "--only", "completion"], capsys)
    assert code == EXIT_OK and "2-antichain -> diamond" in out


def test_json_report_schema(capsys):
    code, out, _ = run(["verify", "--universe", "rings_small", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == EXIT_FAIL
    assert set(doc) == {"universe", "kind", "objects", "arrows", "capacitor", "theorem_main",
                        "corollary_main", "completions", "notes", "verdict"}
    assert doc["capacitor"]["ok"] and len(doc["theorem_main"]) == 12
    assert doc["verdict"] == "fail"


def test_json_deterministic_across_jobs(capsys):
    args = ["verify", "--universe", "boolean_2_4_8", "--format", "json"]
    _, one, _ = run(args, capsys)
    _, four, _ = run(args + ["--jobs", "4"], capsys)
    assert one == four


def test_timing_is_opt_in(capsys):
    _, out, _ = run(["verify", "--universe", "boolean_2_4_8", "--format", "json", "--timing"],
                    capsys)
    assert "seconds" in json.loads(out)


def test_budget_exit_code(capsys):
    code, _, err = run(["verify", "--universe", "posets_le3", "--budget", "100"], capsys)
    assert code == EXIT_BUDGET and "budget" in err


def test_negative_controls(capsys):
    code, out, _ = run(["verify", "--universe", "posets_le3_no_closure", "--only", "capacitor"],
                       capsys)
    assert code == EXIT_FAIL and "existence:" in out
    code, out, _ = run(["verify", "--universe", "posets_rigidity_override", "--only",
                        "capacitor"], capsys)
    assert code == EXIT_FAIL and "rigid(2):" in out
    code, out, _ = run(["verify", "--universe", "raw_rigidity"], capsys)
    assert code == EXIT_FAIL and "rigid(2):" in out and "theorem_main: 0/12" in out


def test_complete_subcommand(capsys):
    code, out, _ = run(["complete", "--universe", "posets_le3", "--object", "2-antichain",
                        "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == EXIT_OK and doc["hull"] == "diamond"
    assert set(doc) == {"object", "hull", "unit", "comma_objects"}


def test_complete_without_hull(capsys):
    code, out, _ = run(["complete", "--universe", "posets_le3_no_closure", "--object",
                        "2-antichain"], capsys)
    assert code == EXIT_FAIL and "no hull" in out


def test_unknown_object(capsys):
    code, _, err = run(["complete", "--universe", "posets_le3", "--object", "nope"], capsys)
    assert code == EXIT_USAGE


def test_export_hasse(capsys):
    code, out, _ = run(["export", "--universe", "posets_le3", "--object", "2-antichain",
                        "--macneille"], capsys)
    assert code == EXIT_OK and "rankdir=BT" in out
    assert out.count("[label=") == 4 and out.count("->") == 4
    code, out, _ = run(["export", "--universe", "posets_le3", "--object", "1-chain"], capsys)
    assert out.count("[label=") == 1 and "->" not in out


def test_export_category(capsys):
    code, out, _ = run(["export", "--universe", "raw_rigidity", "--category"], capsys)
    assert code == EXIT_OK and out.count("->") == 4
    _, out, _ = run(["export", "--universe", "raw_rigidity", "--category", "--no-identities"],
                    capsys)
    assert out.count("->") == 2


def test_export_ring_ideal_lattice(capsys):
    code, out, _ = run(["export", "--universe", "rings_small", "--object", "F2xF2"], capsys)
    assert code == EXIT_OK and out.count("[label=") == 4


def test_export_raw_needs_category(capsys):
    code, _, err = run(["export", "--universe", "raw_rigidity", "--object", "x"], capsys)
    assert code == EXIT_USAGE and "--category" in err


def test_oracle_matches_main_path(capsys):
    code, out, _ = run(["oracle", "--kind", "ring"], capsys)
    doc = json.loads(out)["rings"]
    col = rings.column_ring()
    MR = rings.multiplier_ring(col)
    assert doc["col"]["multiplier_size"] == MR.ring.size == 8
    assert [[tuple(l), tuple(r)] for l, r in doc["col"]["pairs"]] == [list(p) for p in MR.pairs]
    assert all(doc[R.name]["multiplier_iso_base"] for R in rings.unital_test_rings())


def test_oracle_posets(capsys):
    _, out, _ = run(["oracle", "--kind", "poset"], capsys)
    doc = json.loads(out)["posets"]
    assert doc["2-antichain"]["macneille_size"] == 4 and doc["empty"]["macneille_size"] == 1


def test_oracle_writes_file(tmp_path, capsys):
    target = tmp_path / "golden.json"
    code, out, _ = run(["oracle", "--kind", "boolean", "--out", str(target)], capsys)
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["hom_counts"]["B4->B2"] == 2


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "polarhull.cli", "fixtures"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "posets_le3.json" in res.stdout
