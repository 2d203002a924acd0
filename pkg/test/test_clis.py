import json
import logging

import pytest

from helper_functions import DATA
from spraycheck import __main__, cli
from spraycheck.report import check, evaluate, validate
from spraycheck.report.evaluate import parse_point


def run_json(capsys, *argv):
    report = check.main(["--format", "json", *argv])
    return report, json.loads(capsys.readouterr().out)


def test_exit(caplog):
    with pytest.raises(SystemExit) as exit:
        with caplog.at_level(logging.ERROR):
            cli.Exit.INVALID_SCENARIO()
        assert "INVALID_SCENARIO" in caplog.text
    assert exit.value.code == 2


def test_check_failed_exit(caplog):
    with pytest.raises(SystemExit) as exit:
        with caplog.at_level(logging.ERROR):
            cli.Exit.CHECK_FAILED("3 checks did not pass")
        assert "3 checks did not pass" in caplog.text
    assert exit.value.code == 1


@pytest.mark.parametrize(
    "name", ["flat_rotation", "negative_control", "radial_rotation"]
)
def test_check_builtin(capsys, name):
    report, record = run_json(capsys, "--builtin", name, "--points", "20")
    assert report.passed
    assert record["passed"]
    assert record["engine"]["name"] == "spraycheck"
    assert record["scenario"]["name"] == name
    assert record["sampling"] == {"points": 20, "seed": 42}
    assert "wall_time" not in record
    assert record["summary"]["fail"] == 0
    stages = {r["stage"] for r in record["checks"]}
    assert {"structure", "lifts", "spray", "brackets", "consistency"} <= stages


def test_json_is_reproducible(capsys):
    argv = ["--builtin", "negative_control", "--points", "15", "--seed", "5"]
    _, first = run_json(capsys, *argv)
    check.main(["--format", "json", *argv])
    second = capsys.readouterr().out
    assert json.dumps(first, sort_keys=True, indent=2) == second.rstrip("\n")
    assert first["sampling"] == {"points": 15, "seed": 5}


def test_timing_in_json(capsys):
    _, record = run_json(capsys, "--builtin", "so3", "--points", "10", "--timing")
    assert record["wall_time"] >= 0.0


def test_text_report(capsys):
    check.main(["--builtin", "flat_rotation", "--points", "10"])
    out = capsys.readouterr().out
    assert out.startswith("Scenario flat_rotation")
    assert "PASSED" in out
    assert "lie_symmetry(rotation)" in out


def test_structure_failure_skips_the_rest(capsys):
    with pytest.raises(SystemExit) as exit:
        check.main(["--format", "json", str(DATA / "broken_jacobi.scn")])
    assert exit.value.code == 1
    record = json.loads(capsys.readouterr().out)
    assert not record["passed"]
    verdicts = {r["name"]: r["verdict"] for r in record["checks"]}
    assert verdicts["anchor_equation"] == "pass"
    assert verdicts["jacobi_identity"] == "fail"
    skipped = [r for r in record["checks"] if r["verdict"] == "skipped"]
    assert [r["name"] for r in skipped] == [
        "lifts",
        "spray",
        "brackets",
        "lie_symmetry(e1)",
        "consistency",
    ]
    assert all(r["note"] == "structure equations failed" for r in skipped)


def test_semispray_is_noted(capsys):
    report, record = run_json(capsys, str(DATA / "semispray.scn"))
    assert report.passed
    assert record["summary"]["noted"] == 6
    verdicts = {r["name"]: r["verdict"] for r in record["checks"]}
    assert verdicts["semispray_condition"] == "pass"
    assert verdicts["euler_spray"] == "noted"
    assert verdicts["lie_symmetry(translation)"] == "pass"


def test_invalid_scenario(caplog):
    with pytest.raises(SystemExit) as exit:
        check.main([str(DATA / "bad_index.scn")])
    assert exit.value.code == 2
    assert "line 7, column 1" in caplog.text


def test_missing_scenario(tmp_path):
    with pytest.raises(SystemExit) as exit:
        check.main([str(tmp_path / "nowhere.scn")])
    assert exit.value.code == 2
    with pytest.raises(SystemExit) as exit:
        check.main(["--builtin", "nowhere"])
    assert exit.value.code == 2


def test_bad_arguments():
    with pytest.raises(SystemExit) as exit:
        check.main(["--builtin", "so3", "--points", "0"])
    assert exit.value.code == 2
    with pytest.raises(SystemExit) as exit:
        check.main(["--builtin", "so3", "--tol", "-1"])
    assert exit.value.code == 2
    with pytest.raises(SystemExit) as exit:
        check.main([])
    assert exit.value.code == 2


def test_validate(capsys):
    report = validate.main(["--builtin", "anchor", "--points", "10"])
    assert report.passed
    assert "Jacobi identity" in capsys.readouterr().out
    with pytest.raises(SystemExit) as exit:
        validate.main([str(DATA / "broken_jacobi.scn")])
    assert exit.value.code == 1


def test_parse_point():
    assert parse_point("x=0.5, 1; y=2,-1", 2, 2) == ((0.5, 1.0), (2.0, -1.0))
    assert parse_point(" y = 1,2,3 ", 0, 3) == ((), (1.0, 2.0, 3.0))
    with pytest.raises(ValueError, match="2 x-coordinates"):
        parse_point("x=1;y=1,1", 2, 2)
    with pytest.raises(ValueError):
        parse_point("z=1", 0, 1)


def test_eval_tensor(capsys):
    rows = evaluate.main(
        ["--builtin", "flat_rotation", "--tensor", "K", "--at", "x=0.1,0.2;y=1,-0.5"]
    )
    assert rows
    assert all(label.startswith("K[") for label, _, _ in rows)
    assert all(value == 0.0 for _, _, value in rows)
    assert "Component" in capsys.readouterr().out


def test_eval_berwald_coefficients():
    rows = evaluate.main(
        ["--builtin", "curved_rotation", "--tensor", "Berwald-coeffs", "--at", "x=0.5,0;y=1,2"]
    )
    values = {label: value for label, _, value in rows}
    # ℬ^γ_α = −y^α x^γ
    assert values["B[1][1]"] == pytest.approx(-0.5)
    assert values["B[1][2]"] == pytest.approx(-1.0)
    assert values["B[2][1]"] == pytest.approx(0.0)


def test_eval_spray_jets():
    rows = evaluate.main(
        ["--builtin", "curved_rotation", "--order", "1", "--at", "x=0.5,0;y=1,2"]
    )
    values = {(label, derivative): value for label, derivative, value in rows}
    assert values["S[1]", "-"] == pytest.approx(-2.5)
    assert values["S[1]", "x1"] == pytest.approx(-5.0)
    assert values["S[1]", "y1"] == pytest.approx(-1.0)
    assert values["S[1]", "y2"] == pytest.approx(-2.0)


def test_eval_errors():
    with pytest.raises(SystemExit) as exit:
        evaluate.main(["--builtin", "so3", "--tensor", "K", "--at", "y=1,2"])
    assert exit.value.code == 2
    with pytest.raises(SystemExit) as exit:
        evaluate.main(
            [
                "--builtin",
                "anchor",
                "--tensor",
                "W",
                "--projective-dimension",
                "base",
                "--at",
                "x=0.3;y=1,1",
            ]
        )
    assert exit.value.code == 2
    with pytest.raises(SystemExit) as exit:
        evaluate.main(["--builtin", "so3", "--order", "5", "--at", "y=1,2,3"])
    assert exit.value.code == 2


def test_dispatch(capsys):
    report = __main__.main(["validate", "--builtin", "so3", "--points", "5"])
    assert report is None
    assert "anchor equation" in capsys.readouterr().out
    with pytest.raises(SystemExit) as exit:
        __main__.main(["transform"])
    assert exit.value.code == 2
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize(
    "what", [["--tensor", "Berwald-coeffs"], ["--order", "1"]]
)
def test_eval_outside_the_domain(tmp_path, caplog, what):
    scenario = tmp_path / "log.scn"
    scenario.write_text(
        '[algebroid]\nn = 1\nm = 1\nrho[1][1] = "1"\n[spray]\nS[1] = "log(x1)*y1^2"\n'
    )
    with pytest.raises(SystemExit) as exit:
        evaluate.main([str(scenario), *what, "--at", "x=-1;y=1"])
    assert exit.value.code == 2
    assert "not defined" in caplog.text
