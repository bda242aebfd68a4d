"""End-to-end coverage for the command-line verbs.

Each test drives weakarith.cli.main in process and checks the printed
text byte for byte where the output is stable, or against the library
where the verb is a thin wrapper.
"""

import pytest

from weakarith.cli import main
from weakarith.sexpr import parse_formula, print_formula
from weakarith.structures import FiniteStructure, format_structure
from weakarith.theories import get_theory, size_exists
from weakarith.translate import parse_translation, translate_formula

IDENTITY_R = """\
source: R
target: R
domain: (= v0 v0)
rel <=: (<= v0 v1)
fun 0: (= v0 0)
fun S: (= v1 (S v0))
fun +: (= v2 (+ v0 v1))
fun *: (= v2 (* v0 v1))
"""

PLUS_MOD3 = (0, 1, 2, 1, 2, 0, 2, 0, 1)
TIMES_MOD3 = (0, 0, 0, 0, 1, 2, 0, 2, 1)
ALL_PAIRS = frozenset((a, b) for a in range(3) for b in range(3))


def mod3_structure(succ=(1, 2, 0)):
    return FiniteStructure(
        3,
        {"0": (0,), "S": succ, "+": PLUS_MOD3, "*": TIMES_MOD3},
        {"<=": ALL_PAIRS},
    )


def test_parse_roundtrip_and_summary(capsys):
    assert main(["parse", "--text", "(= 0 0)", "--lang", "Q", "--summary"]) == 0
    out = capsys.readouterr().out
    assert out == "(= 0 0)\nsummary: ok=1 nodes=3\n"


def test_parse_rejects_double_input(capsys):
    code = main(["parse", "--text", "(= 0 0)", "--file", "also.sexp"])
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")


def test_parse_bad_formula_is_usage_failure(capsys):
    assert main(["parse", "--text", "(= 0", "--lang", "Q"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_axioms_prints_one_per_line(capsys):
    assert main(["axioms", "R", "--count", "5"]) == 0
    assert capsys.readouterr().out == (
        "(= (+ 0 0) 0)\n"
        "(= (* 0 0) 0)\n"
        "(not (= 0 (S 0)))\n"
        "(forall x (-> (<= x 0) (= x 0)))\n"
        "(forall x (or (<= x 0) (<= 0 x)))\n"
    )


def test_axioms_unknown_theory(capsys):
    assert main(["axioms", "nonsense"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_translate_matches_library(tmp_path, capsys):
    tr_path = tmp_path / "id.tr"
    tr_path.write_text(IDENTITY_R)
    assert main(["translate", "--translation", str(tr_path),
                 "--text", "(= 0 0)"]) == 0
    out = capsys.readouterr().out
    tr = parse_translation(IDENTITY_R)
    phi = parse_formula("(= 0 0)", tr.source)
    assert out == print_formula(translate_formula(tr, phi)) + "\n"


def test_obligations_count(tmp_path, capsys):
    tr_path = tmp_path / "id.tr"
    tr_path.write_text(IDENTITY_R)
    assert main(["obligations", "--translation", str(tr_path),
                 "--theory", "R", "--first-k", "2", "--summary"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1].startswith("summary: count=")
    count = int(lines[-1].split("=")[1])
    assert count == len(lines) - 1
    assert count > 2  # totality and equality obligations ride along


def test_verify_all_ok(tmp_path, capsys):
    tr_path = tmp_path / "id.tr"
    tr_path.write_text(IDENTITY_R)
    st_path = tmp_path / "m3.fs"
    st_path.write_text(format_structure(mod3_structure()))
    assert main(["verify", "--translation", str(tr_path), "--theory", "R",
                 "--structure", str(st_path), "--first-k", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.endswith(" ok") for line in lines)


def test_verify_reports_failure(tmp_path, capsys):
    tr_path = tmp_path / "id.tr"
    tr_path.write_text(IDENTITY_R)
    st_path = tmp_path / "bad.fs"
    # constant successor breaks the third axiom, 0 != S 0
    st_path.write_text(format_structure(mod3_structure(succ=(0, 0, 0))))
    assert main(["verify", "--translation", str(tr_path), "--theory", "R",
                 "--structure", str(st_path), "--first-k", "3"]) == 1
    lines = capsys.readouterr().out.splitlines()
    assert any(line.endswith(" FAIL") for line in lines)


def test_find_model_success(tmp_path, capsys):
    ax = tmp_path / "refl.ax"
    ax.write_text("(forall x (= x x))\n")
    assert main(["find-model", "--axioms", str(ax),
                 "--max-size", "2", "--lang", "eq"]) == 0
    assert capsys.readouterr().out == "size 1\n"


def test_find_model_absence_is_domain_failure(capsys):
    code = main(["find-model", "--theory", "Q", "--first-k", "4",
                 "--max-size", "3"])
    assert code == 1
    assert capsys.readouterr().out == "no model <= 3\n"


def test_find_model_needs_exactly_one_source(capsys):
    assert main(["find-model", "--max-size", "2"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_decide_provable_with_witness(tmp_path, capsys):
    phi2 = tmp_path / "phi2.sexp"
    phi2.write_text(print_formula(size_exists(2)) + "\n")
    assert main(["decide", "--sentence", str(phi2),
                 "--pair", "finite B={2} C={}", "--witness", "--summary"]) == 0
    assert capsys.readouterr().out == (
        "Provable\n"
        "true-profile: small=0,1,0 large=0\n"
        "summary: status=provable stage=0 rank=3\n"
    )


def test_decide_refutable_and_unknown(tmp_path, capsys):
    phi3 = tmp_path / "phi3.sexp"
    phi3.write_text(print_formula(size_exists(3)) + "\n")
    assert main(["decide", "--sentence", str(phi3),
                 "--pair", "finite B={} C={3}"]) == 0
    assert capsys.readouterr().out == "Refutable\n"
    phi5 = tmp_path / "phi5.sexp"
    phi5.write_text(print_formula(size_exists(5)) + "\n")
    assert main(["decide", "--sentence", str(phi5),
                 "--pair", "canonical", "--stage", "3"]) == 0
    assert capsys.readouterr().out == "Unknown(stage=3)\n"


def test_normal_form_render(tmp_path, capsys):
    src = tmp_path / "true.sexp"
    src.write_text("true\n")
    assert main(["normal-form", "--sentence", str(src),
                 "--rank", "1", "--summary"]) == 0
    out = capsys.readouterr().out
    assert out.endswith("summary: rank=1 disjuncts=3\n")
    assert "at least 1 class of size 1" in out


def test_enumerate_pair(capsys):
    assert main(["enumerate-pair", "--pair", "finite B={2,5} C={3}"]) == 0
    assert capsys.readouterr().out == "left: 2 5\nright: 3\n"


def test_run_machine_by_code(capsys):
    assert main(["run-machine", "--code", "5", "--steps", "100"]) == 0
    assert capsys.readouterr().out == "halted output=1\n"
    assert main(["run-machine", "--code", "6216", "--steps", "50"]) == 1
    assert capsys.readouterr().out == "did not halt within 50 steps\n"


def test_check_proof_valid_and_invalid(tmp_path, capsys):
    good = tmp_path / "p1.prf"
    good.write_text("# one axiom citation\nax R 7\n")
    assert main(["check-proof", "--proof", str(good), "--theory", "R"]) == 0
    expected = print_formula(get_theory("R").axiom_of(7))
    assert capsys.readouterr().out == expected + "\n"

    bad = tmp_path / "pbad.prf"
    bad.write_text("ax R 0\nmp 0 0\n")
    assert main(["check-proof", "--proof", str(bad), "--theory", "R"]) == 1
    assert capsys.readouterr().err.startswith("invalid:")


def test_search_proof_budget_edge(tmp_path, capsys):
    goal = tmp_path / "goal.sexp"
    goal.write_text(print_formula(get_theory("R").axiom_of(7)) + "\n")
    assert main(["search-proof", "--theory", "R", "--goal", str(goal),
                 "--budget", "14"]) == 0
    assert capsys.readouterr().out == "ax R 7\n"
    assert main(["search-proof", "--theory", "R", "--goal", str(goal),
                 "--budget", "13"]) == 1
    assert capsys.readouterr().out == "no proof within budget 13\n"


def test_godel_encode_decode(tmp_path, capsys):
    src = tmp_path / "eq00.sexp"
    src.write_text("(= 0 0)\n")
    code = "12972264338907129374431599850420434393022679173"
    assert main(["godel", "--encode", str(src), "--lang", "Q"]) == 0
    assert capsys.readouterr().out == code + "\n"
    assert main(["godel", "--decode", code]) == 0
    assert capsys.readouterr().out == "(= 0 0)\n"
    assert main(["godel", "--decode", "7"]) == 1
    assert capsys.readouterr().err.startswith("not a code:")


def test_independence_table_golden(capsys):
    assert main(["independence", "--pair", "finite A={1} B={2}",
                 "--decider", "table", "--n-max", "10"]) == 0
    assert capsys.readouterr().out == (
        "x: 1\ny: 2\nwitness: 0\npositive: (P 0)\nnegative: (not (P 0))\n"
    )


def test_independence_proof_search_needs_theory(capsys):
    code = main(["independence", "--pair", "canonical",
                 "--decider", "proof-search", "--n-max", "2"])
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")


def test_stress_rows(capsys):
    assert main(["stress", "--theory", "E:finite B={2} C={3}",
                 "--decider", "equivalence", "--pair", "finite B={2} C={3}",
                 "--sentence-budget", "5", "--axiom-scan", "60"]) == 0
    assert capsys.readouterr().out == (
        "1 dontknow unanswered\n"
        "2 provable\n"
        "3 refutable\n"
        "4 dontknow unanswered\n"
        "5 dontknow unanswered\n"
    )


def test_unknown_verb_and_flag_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["axioms", "R", "--no-such-flag"])
    assert exc.value.code == 2
