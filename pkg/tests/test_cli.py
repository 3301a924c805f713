import json
import subprocess
import sys

import pytest

from cakemeasure.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_classify(capsys):
    r = run_json(capsys, "classify", "exF(1/10)")
    assert r["convention"] == "content" and r["jumps"][0]["leftGap"] == "9/20"


def test_eval(capsys):
    r = run_json(capsys, "eval", "exG(1/20)", "--x", "1")
    assert (r["left"], r["at"], r["right"]) == ("19/20", "1", "1")


def test_check_d_gap(capsys):
    r = run_json(capsys, "check-d", "exF(1/10)", "--alpha", "1/5")
    assert r["achievable"] is False and r["mode"] == "none"
    assert r["gapExplanation"] == {"below": "1/10", "above": "9/20"}
    assert "gap" in r["anchor"]


def test_check_d_witness_on_piece(capsys):
    r = run_json(capsys, "check-d", "--fixture", "uniform", "--piece", "(0,1/4] u [1/2,1]", "--alpha", "1/2")
    assert r["achievable"] and r["witnessMass"] == r["target"] == "3/8"


def test_check_dd_sup(capsys):
    r = run_json(capsys, "check-dd", "exF(1/10)", "--target", "1/10")
    assert r["achievable"] and r["mode"] == "increasingSequenceSup"


def test_divide_and_min_parts(capsys):
    assert run_json(capsys, "divide", "cantor", "--alpha", "1/4")["witness"] == "[0,1/9]"
    assert run_json(capsys, "min-parts", "exG(1/20)", "--target", "99/100")["minParts"] == 2


def test_slice_and_greedy(capsys):
    r = run_json(capsys, "slice", "cantor", "--epsilon", "1/4")
    assert r["pieces"] == ["[0,1/9]", "(1/9,1/3]", "(1/3,7/9]", "(7/9,1]"]
    g = run_json(capsys, "greedy", "exF(1/10)", "--epsilon", "1/20", "--max-iter", "30")
    assert g["finalRemainderMass"] == "9/10" and g["selectionRuleHolds"]


def test_table_text(capsys):
    code, out, _ = run(capsys, "table", "uniform", "exF(1/10)", "--samples", "4", "--text")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("fixture") and len(lines) == 3


def test_oracle_and_plot(capsys):
    r = run_json(capsys, "oracle", "exF(1/10)", "--query", "achievable", "--value", "1/5", "--mesh", "1/64")
    assert r["verdict"] is False
    code, out, _ = run(capsys, "plot", "exG(1/20)", "--mesh", "1/2")
    assert code == 0 and out.splitlines() == ["x,left,at,right", "0,0,0,1/20", "1/2,1/2,1/2,1/2", "1,19/20,1,1"]


def test_demo(capsys):
    r = run_json(capsys, "demo-proportional", "--agent", "uniform", "--agent", "sq(64)")
    assert r["values"] == ["1/2", "3/4"]


def test_fixture_file(tmp_path, capsys):
    f = tmp_path / "fx.txt"
    f.write_text("valuation half stieltjes\nbp 0 0 0 0\nseg linear 1/2\nbp 1 1/2 1/2 1/2\nend\n")
    r = run_json(capsys, "--fixtures", str(f), "eval", "half", "--x", "1")
    assert r["mass"] == "1/2"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["divide", "dirac(1/2)", "--alpha", "1/2"], 5),
        (["divide", "uniform", "--alpha", "2"], 3),
        (["eval", "nosuch", "--x", "0"], 2),
        (["check-d", "uniform", "--piece", "[0,2]", "--alpha", "1/2"], 3),
        (["slice", "exF(1/10)", "--epsilon", "1/4"], 5),
        (["check-d", "uniform", "--alpha", "0.5"], 0),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["check-d", "uniform", "--alpha"])
    assert exc.value.code == 2
    assert main(["check-d"]) == 2


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "cakemeasure", "eval", "uniform", "--x", "1/3"], capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["at"] == "1/3"
