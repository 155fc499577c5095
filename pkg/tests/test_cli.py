import json

import pytest

from schottky.cli import main


@pytest.fixture()
def annulus_file(tmp_path):
    path = tmp_path / "annulus.json"
    path.write_text('{"inner_circles":[{"q":[0.0,0.0],"r":0.25}]}')
    return str(path)


@pytest.fixture()
def bad_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"inner_circles":[{"q":[0.5,0.0],"r":0.6}]}')
    return str(path)


def test_validate_ok(annulus_file, capsys):
    assert main(["validate", "--domain", annulus_file]) == 0
    out = capsys.readouterr().out
    assert "valid: True" in out
    assert "real_axis_centers" in out


def test_validate_bad_domain(bad_file):
    assert main(["validate", "--domain", bad_file]) == 1


def test_missing_file_is_domain_error(tmp_path):
    assert main(["validate", "--domain", str(tmp_path / "nope.json")]) == 1


def test_omega(annulus_file, capsys):
    assert main(["omega", "--domain", annulus_file, "--z", "0.7,0",
                 "--y", "0.4,0", "--length", "8"]) == 0
    out = capsys.readouterr().out
    assert "omega = 0.292747" in out


def test_eta(annulus_file, capsys):
    assert main(["eta", "--domain", annulus_file, "--z", "0.5,0", "--p", "0.2,0",
                 "--length", "8", "--circle", "1"]) == 0
    assert "eta_1" in capsys.readouterr().out


def test_proper_build(annulus_file, tmp_path, capsys):
    out_path = str(tmp_path / "map.json")
    code = main(["proper-build", "--domain", annulus_file,
                 "--zeros", "0.5,0 -0.5,0", "--nu", "1,1",
                 "--length", "8", "--output", out_path])
    assert code == 0
    payload = json.loads(open(out_path).read())
    assert payload["boundary_deviation"] < 1e-7
    assert payload["boundary_degrees"] == [1, 1]
    out = capsys.readouterr().out
    assert "windings = [1, 1]" in out


def test_proper_build_inadmissible_is_numerical_error(annulus_file):
    assert main(["proper-build", "--domain", annulus_file,
                 "--zeros", "0.5,0 -0.4,0", "--nu", "1,1", "--length", "8"]) == 2


def test_proper_eval(annulus_file, capsys):
    code = main(["proper-eval", "--domain", annulus_file,
                 "--zeros", "0.5,0 -0.5,0", "--nu", "1,1",
                 "--length", "8", "--at", "0.5,0 1,0"])
    assert code == 0
    out = capsys.readouterr().out
    assert "f(" in out


def test_from_boundary(annulus_file, capsys):
    code = main(["from-boundary", "--domain", annulus_file,
                 "--interior", "0,0.5", "--points", "0:1,0 1:0.25,0",
                 "--length", "8"])
    assert code == 0
    assert "prescribed-point residual" in capsys.readouterr().out


def test_cball_dist(annulus_file, tmp_path):
    out_path = str(tmp_path / "dist.json")
    code = main(["cball-dist", "--domain", annulus_file, "--base", "0.5,0",
                 "--target=-0.5,0", "--length", "6", "--output", out_path])
    assert code == 0
    payload = json.loads(open(out_path).read())
    assert 0.99 < payload["c_star"] < 1.0


def test_cball_raster_deterministic(annulus_file, tmp_path):
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    args = ["cball-raster", "--domain", annulus_file, "--center", "0.5,0",
            "--r", "0.4", "--res", "36", "--length", "5", "--refine-cap", "60",
            "--seed", "1"]
    assert main(args + ["--output", a]) == 0
    assert main(args + ["--output", b]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()
    header = open(a).read().splitlines()[:4]
    assert header[0].startswith("# bbox ")
    assert header[1] == "# resolution 36 36"
    assert header[2].startswith("# center ")
    assert header[3].startswith("# threshold ")


def test_proper_build_from_config_file(annulus_file, tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text('{"zeros": [[0.5, 0.0], [-0.5, 0.0]], "nu": [1, 1]}')
    assert main(["proper-build", "--domain", annulus_file,
                 "--config", str(cfg), "--length", "8"]) == 0
    assert main(["proper-build", "--domain", annulus_file, "--length", "8"]) == 1


def test_domain_round_trip_through_validate(annulus_file, tmp_path):
    out_path = str(tmp_path / "report.json")
    assert main(["validate", "--domain", annulus_file, "--output", out_path]) == 0
    payload = json.loads(open(out_path).read())
    from schottky.domain import CircularDomain

    original = CircularDomain.from_json(open(annulus_file).read())
    assert CircularDomain.from_dict(payload["domain"]) == original


def test_verify_disk(capsys):
    assert main(["verify", "disk"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_unknown_flag_rejected(annulus_file):
    with pytest.raises(SystemExit):
        main(["validate", "--domain", annulus_file, "--bogus"])
