"""End-to-end CLI contract: JSON shapes, exit codes, byte determinism."""

import json

import pytest

from divlab.cli import main
from divlab.scenarios import (
    CubeScenario,
    FurstenbergScenario,
    cube_family,
    furstenberg_family,
)


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def run_json(capsys, *argv):
    rc, out, _ = run(capsys, *argv)
    return rc, json.loads(out)


def test_thresholds(capsys):
    rc, data = run_json(capsys, "thresholds")
    assert rc == 0
    assert abs(data["furstenberg"]["real"] - 1.2789429456511299) < 1e-15
    assert data["furstenberg"]["log_form_real"] == data["furstenberg"]["real"]
    assert data["cubes"] == {"m": 3, "exact": "5/4", "real": 1.25}
    assert data["degenerate"] == {"r": 3, "exact": "3/2", "real": 1.5}
    rc, data = run_json(capsys, "thresholds", "--m", "5", "--r", "4")
    assert data["cubes"]["exact"] == "17/6"
    assert data["degenerate"]["exact"] == "4/3"


def test_construct_round_trips(capsys):
    rc, data = run_json(capsys, "construct-thm1", "--k", "2")
    assert rc == 0
    assert FurstenbergScenario.from_json(data) == furstenberg_family(2)
    assert set(data["intervals"]) == {"factor_1", "factor_2", "factor_3", "witness"}

    rc, data = run_json(capsys, "construct-cubes", "--m", "3", "--k", "1")
    assert rc == 0
    assert CubeScenario.from_json(data) == cube_family(3, 1)


def test_verify_claim(capsys):
    rc, data = run_json(capsys, "verify-claim", "--k", "1")
    assert rc == 0
    assert data["verified"] is True
    assert data["superlevel_measure"]["exact"] == "37/64"
    assert data["target"] == "11/96"
    assert data["witness_contained"] and data["measure_reached"]
    assert data["breakpoints"] == 37


def test_find_nk(capsys):
    rc, data = run_json(capsys, "find-nk", "--k", "1",
                        "--level", "1/192", "--target", "1/9")
    assert rc == 0
    assert data["n_steps"] == 96
    assert data["measure"]["exact"] == "67/96"
    assert data["verified"] is True

    rc, data = run_json(capsys, "find-nk", "--k", "1",
                        "--level", "1/192", "--target", "99/100",
                        "--max-n", "200")
    assert rc == 2
    assert data["verified"] is False
    assert "error" in data


def test_verify_cubes_and_tamper(capsys):
    rc, data = run_json(capsys, "verify-cubes", "--m", "3", "--k", "1")
    assert rc == 0
    assert data["verified"] is True
    assert data["checks_total"] == 112 and data["checks_failed"] == 0
    assert data["witness_measure"] == "1/4"
    assert data["cardinalities_ok"] is True
    assert data["integral_lower_bound"]["exact"] == "1/262144"

    rc, data = run_json(capsys, "verify-cubes", "--m", "3", "--k", "1", "--tamper")
    assert rc == 2
    assert data["verified"] is False
    assert data["tampered"] is True
    assert data["checks_failed"] > 0
    assert len(data["first_failures"]) == 5


def test_blowup_csv_and_determinism(capsys):
    rc, out1, _ = run(capsys, "blowup", "--kind", "thm1",
                      "--p", "1.25", "--kmax", "5", "--csv")
    assert rc == 0
    lines = out1.splitlines()
    assert lines[0] == "index,value,step_ratio,verdict"
    assert len(lines) == 6
    first = lines[1].split(",")
    assert first[0] == "1" and first[2] == ""  # no step before the first term
    assert lines[2].split(",")[3] == "diverges"

    rc, out2, _ = run(capsys, "blowup", "--kind", "thm1",
                      "--p", "1.25", "--kmax", "5", "--csv")
    assert out2 == out1  # byte-identical reruns

    rc, data = run_json(capsys, "blowup", "--kind", "cubes", "--m", "3",
                        "--p", "1.2", "--kmax", "4", "--mode", "bound")
    assert rc == 0
    assert data["verdict"] == "diverges"

    rc, out, _ = run(capsys, "blowup", "--kind", "h3",
                     "--p", "1.25", "--kmax", "4", "--csv")
    assert rc == 0
    head = out.splitlines()[0]
    assert head == "index,lower_norm_bound,product_of_norms,value,step_ratio,verdict"


def test_blowup_out_file(tmp_path, capsys):
    path = tmp_path / "series.csv"
    for _ in range(2):
        rc, out, _ = run(capsys, "blowup", "--kind", "thm1", "--p", "1.3",
                         "--kmax", "4", "--csv", str(path))
        assert rc == 0 and out == ""
    text = path.read_text()
    assert text.startswith("index,value,step_ratio,verdict\n")
    assert len(text.splitlines()) == 5


def test_h3_eval(capsys):
    rc, data = run_json(capsys, "h3-eval", "--k", "1")
    assert rc == 0
    assert data["verified"] is True
    assert data["count"] == 11
    assert data["min_lower_bound"]["exact"] == "1/72"
    assert all(not ev["diverges"] for ev in data["evaluations"])

    rc, data = run_json(capsys, "h3-eval", "--k", "1", "--x", "-2/3")
    assert rc == 0
    assert len(data["evaluations"]) == 1
    assert data["evaluations"][0]["x"] == "-2/3"

    # positive x violates the kernel positivity precondition
    rc, out, err = run(capsys, "h3-eval", "--k", "1", "--x", "1/2")
    assert rc == 1
    assert err.startswith("divlab: error:")


def test_degenerate_families(capsys):
    rc, data = run_json(capsys, "degenerate", "--p4prime", "0.4")
    assert rc == 0
    assert data["family"] == "squares" and data["grows"] is True

    rc, data = run_json(capsys, "degenerate", "--r", "3", "--b", "2,-1",
                        "--p", "1.2")
    assert rc == 0
    assert data["family"] == "dependent-forms"
    assert data["threshold"] == "3/2" and data["grows"] is True

    rc, out, err = run(capsys, "degenerate", "--p4prime", "0.4",
                       "--r", "3", "--b", "2,-1", "--p", "1.2")
    assert rc == 1 and "exclusive" in err

    rc, out, err = run(capsys, "degenerate", "--r", "3")
    assert rc == 1 and err.startswith("divlab: error:")


def test_classify(capsys):
    rc, data = run_json(capsys, "classify", "--rows", "2,0;0,2;1,1")
    assert rc == 0
    assert data["scenario"] == "degenerate"
    assert data["exponent_bound"] == "3/2"
    assert data["dependence"] == [1, 1, -2]

    rc, data = run_json(capsys, "classify", "--rows", "1 0; 0 1; 1 1")
    assert data["scenario"] == "independent"


def test_mc_average_deterministic(capsys):
    rc, out1, _ = run(capsys, "mc-average", "--k", "1", "--x", "-2/3",
                      "--seed", "7")
    assert rc == 0
    data = json.loads(out1)
    assert data["within_4_sigma"] is True
    assert data["exact"]["exact"] == "1/72"
    rc, out2, _ = run(capsys, "mc-average", "--k", "1", "--x", "-2/3",
                      "--seed", "7")
    assert out2 == out1


def test_usage_errors_exit_1(capsys):
    for argv in (
        [],
        ["no-such-command"],
        ["construct-thm1"],                      # missing --k
        ["find-nk", "--k", "1", "--level", "1/192"],  # missing --target
        ["blowup", "--kind", "thm1", "--p", "1.25"],  # missing --kmax
    ):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1
        capsys.readouterr()

    # engine precondition (cube series needs --m): diagnostic, not traceback
    rc, out, err = run(capsys, "blowup", "--kind", "cubes",
                       "--p", "1.2", "--kmax", "3")
    assert rc == 1 and err.startswith("divlab: error:")
