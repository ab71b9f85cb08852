import io
import json

import pytest

from hypermetrics.cli import main

PUNCTURED = '{"type":"punctured","points":[[0,0]],"dim":2}'
TWO = '{"type":"two_punctured","points":[[-1,0],[1,0]],"dim":2}'


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), buf)
    return code, buf.getvalue()


def test_compute_example():
    code, out = run("compute", "--domain", PUNCTURED, "--metric", "tau_tilde", "--x", "1,0", "--y", "-1,0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[-1] == "1.0986123"


def test_compute_several_metrics_and_json():
    code, out = run("compute", "--domain", "ball", "--metric", "u,rho_ball", "--x", "0.5,0", "--y", "-0.5,0")
    assert code == 0
    assert out.splitlines()[1:] == ["u 2.1972246", "rho_ball 2.1972246"]
    code, out = run("compute", "--domain", "ball", "--metric", "u", "--x", "0.5,0", "--y", "-0.5,0",
                    "--format", "json")
    doc = json.loads(out)
    assert set(doc) == {"config", "result"}
    assert doc["result"]["u"] == pytest.approx(2.1972245773362196)
    assert doc["config"]["domain"]["type"] == "ball"


def test_config_echo_includes_defaults():
    code, out = run("verify", "--domain", PUNCTURED, "--n", "200", "--suite", "tau_u")
    cfg = json.loads(out.splitlines()[0][len("# config: "):])
    assert cfg["seed"] == 42 and cfg["suite"] == "tau_u" and cfg["n"] == 200


@pytest.mark.parametrize("argv,field", [
    (("compute", "--domain", "ball", "--metric", "u", "--x", "2,0", "--y", "0,0"), "x"),
    (("compute", "--domain", '{"type":"ball",', "--metric", "u", "--x", "0,0", "--y", "0.1,0"), "domain"),
    (("compute", "--domain", "ball", "--metric", "nope", "--x", "0,0", "--y", "0.1,0"), "metric"),
    (("compute", "--domain", PUNCTURED, "--metric", "rho_ball", "--x", "1,0", "--y", "2,0"), "metric"),
    (("compute", "--domain", "ball", "--metric", "u", "--x", "0,0,0", "--y", "0.1,0"), "x"),
    (("verify", "--domain", "ball", "--n", "-5"), "n"),
    (("verify", "--domain", "ball", "--suite", "bogus"), "suite"),
    (("balls", "--domain", PUNCTURED, "--metric", "u", "--x", "1,0"), "radius"),
])
def test_configuration_errors_exit_2(argv, field, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert field in capsys.readouterr().err


def test_bad_json_reports_position(capsys):
    run("compute", "--domain", '{"type": ball}', "--metric", "u", "--x", "0,0", "--y", "0.1,0")
    err = capsys.readouterr().err
    assert "line 1" in err and "column" in err


def test_unknown_subcommand_exits_2():
    code, _ = run("frobnicate")
    assert code == 2


def test_output_is_reproducible():
    argv = ("verify", "--domain", TWO, "--n", "500", "--seed", "3", "--format", "json")
    assert run(*argv) == run(*argv)


def test_verify_exit_codes():
    code, out = run("verify", "--domain", "ball", "--n", "500")
    assert code == 0 and "FAIL" not in out
    code, out = run("verify", "--domain", "ball", "--n", "500", "--suite", "exploratory")
    assert code == 0 and "REPORT" in out


def test_verify_csv():
    code, out = run("verify", "--domain", PUNCTURED, "--n", "300", "--suite", "tau_u,jt_u", "--format", "csv")
    lines = out.splitlines()
    assert lines[0].startswith("id,status")
    assert [l.split(",")[0] for l in lines[1:]] == ["tau_u", "jt_u"]


def test_sharpness_output():
    code, out = run("sharpness", "--family", "HalfSpaceRay,PuncturedRay")
    assert code == 0
    assert out.count("parameter,observed,target,abs_error") == 2
    assert "# criterion HalfSpaceRay" in out and "-> pass" in out


def test_sharpness_custom_grid():
    code, out = run("sharpness", "--family", "HalfSpaceRay", "--grid", "2,4")
    assert code == 0
    assert "\n2.0," in out and "# criterion" not in out


def test_hyperbolicity_output():
    code, out = run("hyperbolicity", "--domain", PUNCTURED, "--metric", "tau_tilde", "--n", "300")
    assert code == 0 and "beta_hat=" in out and "below_log3=True" in out


def test_intersect_default_domain():
    code, out = run("intersect", "--n", "60")
    assert code == 0 and "identical=True" in out and "grid_points=3600" in out


def test_balls_writes_files(tmp_path):
    code, out = run("balls", "--domain", PUNCTURED, "--metric", "u,tau_tilde", "--x", "1,0",
                    "--radius", "0.5", "--rays", "32", "--out", str(tmp_path))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["overlay.svg", "tau_tilde_0.5.svg", "u_0.5.svg"]
    assert (tmp_path / "overlay.svg").read_text().count("<path") == 2


def test_balls_csv(tmp_path):
    code, _ = run("balls", "--domain", PUNCTURED, "--metric", "u", "--x", "1,0", "--radius", "0.5",
                  "--rays", "16", "--out", str(tmp_path), "--format", "csv")
    assert code == 0
    lines = (tmp_path / "u_0.5.csv").read_text().splitlines()
    assert lines[0] == "angle_rad,x,y" and len(lines) == 17
