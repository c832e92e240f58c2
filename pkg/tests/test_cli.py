import csv
import io
import json

import pytest

from qtransduce.cli import build_parser, main
from qtransduce.montecarlo import SAMPLE_CONFIG
from qtransduce.transducer import C_DMD, C_TH


def run_csv(tmp_path, *argv):
    out = tmp_path / "out.csv"
    assert main([*argv, "--out", str(out)]) == 0
    return list(csv.DictReader(io.StringIO(out.read_text(encoding="utf-8")))), out


def test_sweep_vanilla_ideal(tmp_path):
    rows, _ = run_csv(tmp_path, "sweep", "--strategy", "vanilla", "--cvalues", "1", "--lvalues", "0")
    assert rows[0]["strategy"] == "VanillaTMD"
    assert float(rows[0]["probability"]) == 1.0


def test_sweep_ies_threshold(tmp_path):
    rows, _ = run_csv(tmp_path, "sweep", "--strategy", "ies", "--cvalues", repr(C_TH), "--lvalues", "0,22")
    assert float(rows[0]["probability"]) == pytest.approx(0.5, abs=1e-12)
    assert rows[0]["contour_half"] == "true"
    assert rows[1]["contour_half"] == "false"


def test_sweep_dmd_capacity_zero_below_threshold(tmp_path):
    rows, _ = run_csv(tmp_path, "sweep", "--strategy", "dmd", "--cmin", "1e-5", "--cmax", "10",
                      "--cpoints", "121", "--lvalues", "0")
    assert len(rows) == 121
    for r in rows:
        C, cap = float(r["C"]), float(r["capacity_bound"])
        if C < 0.2977:
            assert cap == 0.0
        elif C > C_DMD + 1e-9 and C <= 1.0:
            assert cap > 0.0


def test_sweep_grid_and_columns(tmp_path):
    rows, out = run_csv(tmp_path, "sweep", "--cpoints", "5", "--lpoints", "3")
    assert len(rows) == 4 * 5 * 3
    header = out.read_text().splitlines()[0]
    assert header == "strategy,C,l_km,zeta_o,zeta_m,eta,probability,capacity_bound,contour_half,extra"


def test_sweep_byte_stable(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    main(["sweep", "--cpoints", "7", "--lpoints", "4", "--out", str(a)])
    main(["sweep", "--cpoints", "7", "--lpoints", "4", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_numeric_precision(tmp_path):
    rows, _ = run_csv(tmp_path, "sweep", "--strategy", "vanilla", "--cvalues", "0.3", "--lvalues", "7")
    digits = rows[0]["probability"].lstrip("0.").replace(".", "")
    assert len(digits) >= 12


@pytest.mark.parametrize("argv", [
    ["sweep", "--cmin", "1", "--cmax", "0.5"],
    ["sweep", "--cpoints", "1"],
    ["sweep", "--strategy", "warp"],
])
def test_invalid_grid_exit_code(argv, capsys):
    assert main(argv) == 2


def test_thresholds(tmp_path):
    out = tmp_path / "t.txt"
    assert main(["thresholds", "--clients", "1,3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    values = [float(l.rsplit(":", 1)[1]) for l in lines]
    assert values[0] == pytest.approx(0.171572875254, abs=1e-12)
    assert values[1] == pytest.approx(C_DMD, abs=1e-12)
    assert values[2] == pytest.approx(values[1], abs=1e-12)
    assert values[3] > values[2]
    assert lines[0].split(":")[1].strip() == "0.171572875254"


def test_clicks(tmp_path):
    rows, _ = run_csv(tmp_path, "clicks", "--cvalues", f"{C_TH!r},1,10")
    assert float(rows[0]["counter_prob"]) == pytest.approx(0.5, abs=1e-12)
    assert float(rows[0]["genuine_fraction"]) == pytest.approx(2 / 3, abs=1e-12)
    assert float(rows[1]["spd_ideal_prob"]) == 1.0
    assert float(rows[1]["counter_prob"]) == 0.0
    assert float(rows[0]["det_eff"]) == 0.25


def test_clicks_unit_detector_matches_ideal(tmp_path):
    rows, _ = run_csv(tmp_path, "clicks", "--cpoints", "9", "--det-eff", "1")
    for r in rows:
        assert r["spd_real_prob"] == r["spd_ideal_prob"]


def test_help_describes_outputs():
    parser = build_parser()
    sub = parser._subparsers._group_actions[0].choices
    for name in ("sweep", "clicks", "thresholds", "simulate"):
        assert sub[name].description


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "net.ini"
    path.write_text(SAMPLE_CONFIG, encoding="utf-8")
    return path


def test_simulate_deterministic(tmp_path, config_file):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", str(config_file), "--trials", "20000", "--seed", "42", "--out", str(a)]) == 0
    assert main(["simulate", str(config_file), "--trials", "20000", "--seed", "42", "--out", str(b)]) == 0
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    data = json.loads((tmp_path / "a.json").read_text())
    assert data["report"]["trials"] == 20000
    assert data["comparison"]


def test_simulate_dmd(tmp_path):
    cfg = tmp_path / "dmd.ini"
    cfg.write_text(f"[network]\nstrategy = dmd\nn_clients = 3\nseed = 7\n[links]\ncooperativity = {C_DMD!r}\n")
    out = tmp_path / "r"
    main(["simulate", str(cfg), "--trials", "200000", "--out", str(out)])
    data = json.loads((tmp_path / "r.json").read_text())
    assert data["report"]["state_success_rate"] == pytest.approx(0.125, abs=3 * (0.125 * 0.875 / 2e5) ** 0.5)


def test_simulate_herald_fraction(tmp_path):
    cfg = tmp_path / "ies.ini"
    cfg.write_text(f"[network]\nstrategy = ies\nn_clients = 1\ndetector = spd\nseed = 3\n[links]\ncooperativity = {C_TH!r}\n")
    out = tmp_path / "r"
    main(["simulate", str(cfg), "--trials", "100000", "--out", str(out)])
    rows = {r["quantity"]: r for r in json.loads((tmp_path / "r.json").read_text())["comparison"]}
    assert rows["herald.genuine_fraction"]["analytic"] == pytest.approx(2 / 3, abs=1e-12)
    assert rows["herald.genuine_fraction"]["empirical"] == pytest.approx(2 / 3, abs=0.01)


def test_simulate_flag_exit_code(tmp_path, monkeypatch):
    from qtransduce.montecarlo import engine

    monkeypatch.setattr(engine, "SIGMA_LEVEL", 0.0)
    cfg = tmp_path / "c.ini"
    cfg.write_text("[network]\nstrategy = vanilla\nn_clients = 1\n[links]\ncooperativity = 0.3\n")
    assert main(["simulate", str(cfg), "--trials", "1000"]) == 1


def test_simulate_config_error(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[network]\nstrategy = dmd\nn_clients = two\n")
    assert main(["simulate", str(cfg)]) == 2
    assert "bad.ini:3" in capsys.readouterr().err


def test_sample_config(capsys):
    assert main(["sample-config"]) == 0
    assert "[network]" in capsys.readouterr().out
