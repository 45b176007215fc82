import csv
import io
import json
import subprocess
import sys

import pytest

from embedbounds import checks
from embedbounds.bounds import ManifoldDescriptor
from embedbounds.cli import main, parse, read_descriptor, write_descriptor


def run_cli(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out.read_text()


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bounds_sphere(tmp_path):
    code, text = run_cli(["bounds", "--family", "sphere", "--dim", "2"], tmp_path)
    assert code == 0
    (row,) = rows_of(text)
    assert row["regime"] == "HighReach"
    assert float(row["lower_bound"]) <= float(row["upper_bound"])
    assert row["assumption_ok"] in ("true", "false")


def test_bounds_ball_has_no_upper_bound(tmp_path):
    code, text = run_cli(["bounds", "--family", "ball", "--dim", "3"], tmp_path)
    assert code == 0
    (row,) = rows_of(text)
    assert row["upper_bound"] == ""


def test_bounds_missing_descriptor_is_usage_error(tmp_path, capsys):
    assert main(["bounds", "--intrinsic-dim", "2"]) == 2
    assert "volume" in capsys.readouterr().err


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "--nope"])
    assert exc.value.code == 2


def test_cover_precondition(tmp_path):
    # delta beyond tau/2 for the unit circle
    assert main(["cover", "--family", "sphere", "--dim", "1", "--delta", "0.9"]) == 2


def test_cover_circle(tmp_path):
    code, text = run_cli(["cover", "--family", "sphere", "--dim", "1", "--delta", "0.5", "--count", "3000"], tmp_path)
    assert code == 0
    (row,) = rows_of(text)
    assert float(row["tight_bound"]) <= int(row["net_size"])


def test_rip_odd_s_rejected():
    assert main(["rip", "--n", "64", "--s", "7"]) == 2


def test_validate_passes(tmp_path):
    code, text = run_cli(["validate"], tmp_path)
    rows = rows_of(text)
    assert code == 0
    assert all(r["passed"] == "true" for r in rows)
    expected = sum(len(c(seed=0)) for c in checks.ALL_CHECKS)
    assert len(rows) == expected


def test_validate_negative_control(tmp_path):
    code, text = run_cli(["validate", "--corrupt-sudakov-c", "1000"], tmp_path)
    assert code == 1
    failing = [r["check"] for r in rows_of(text) if r["passed"] == "false"]
    assert failing == ["sudakov_consistency"]


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nfamily = torus\ndim=3\nepsilon=0.2\nseed=4\n")
    parsed = parse(["bounds", "--config", str(cfg), "--epsilon", "0.1"])
    assert parsed.params["family"] == "torus" and parsed.params["dim"] == 3
    assert parsed.params["epsilon"] == 0.1
    assert parsed.seed == 4


def test_config_bad_value_exits_2(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("family=cube\n")
    with pytest.raises(SystemExit) as exc:
        parse(["bounds", "--config", str(cfg)])
    assert exc.value.code == 2


def test_descriptor_file_round_trip_as_config(tmp_path):
    M = ManifoldDescriptor(2, 12.5, 0.75, 3.0)
    path = tmp_path / "m.txt"
    write_descriptor(M, path)
    back = read_descriptor(path)
    assert back.intrinsic_dim == 2 and back.reach == 0.75 and back.diameter == 3.0
    assert back.volume == pytest.approx(12.5, rel=1e-15)
    code, text = run_cli(["bounds", "--config", str(path)], tmp_path)
    assert code == 0 and rows_of(text)[0]["intrinsic_dim"] == "2"


def test_json_output(tmp_path):
    code, text = run_cli(["bounds", "--family", "torus", "--dim", "3", "--format", "json"], tmp_path, "o.json")
    assert code == 0
    (row,) = json.loads(text)
    assert row["regime"] == "HighReach" and isinstance(row["assumption_ok"], bool)


def test_width_reports_truth_bound(tmp_path):
    code, text = run_cli(["width", "--family", "sphere", "--dim", "2", "--count", "300", "--trials", "200"], tmp_path)
    assert code == 0
    assert "width_lower_bound" in rows_of(text)[0]


def test_saved_cloud_feeds_width(tmp_path):
    cloud = tmp_path / "c.csv"
    assert main(["cover", "--family", "sphere", "--dim", "1", "--delta", "0.3", "--count", "200",
                 "--save-cloud", str(cloud), "--out", str(tmp_path / "x.csv")]) == 0
    code, text = run_cli(["width", "--csv", str(cloud), "--trials", "100"], tmp_path)
    assert code == 0 and rows_of(text)[0]["count"] == "200"


@pytest.mark.parametrize("args", [
    ["bounds", "--family", "sphere", "--dim", "2"],
    ["cover", "--family", "torus", "--dim", "2", "--delta", "0.3", "--count", "500"],
    ["width", "--family", "ball", "--dim", "5", "--count", "300", "--trials", "300"],
    ["embed-search", "--family", "sphere", "--dim", "1", "--count", "200", "--ambient", "10", "--trials", "3"],
    ["rip", "--n", "32", "--s", "4", "--m-grid", "4,8", "--trials", "5"],
    ["validate"],
])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_byte_identical_reruns(args, fmt, tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    main([*args, "--seed", "3", "--format", fmt, "--out", str(a)])
    main([*args, "--seed", "3", "--format", fmt, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point(tmp_path):
    out = tmp_path / "v.csv"
    proc = subprocess.run([sys.executable, "-m", "embedbounds", "bounds", "--family", "sphere", "--dim", "1",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().startswith("manifold")
