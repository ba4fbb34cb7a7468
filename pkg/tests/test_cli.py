import numpy as np
import pytest

from biphoton.cli import (EXIT_CONFIG, EXIT_DEGENERATE, EXIT_OK, build_state,
                          main)


def test_pc_bell_psi_minus(capsys):
    assert main(["pc", "--state", "bell:psi-minus", "--l", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "P_c = 1.000000" in out
    assert "verdict = entangled" in out


def test_pc_product(capsys):
    assert main(["pc", "--state", "product", "--l1", "1", "--l2", "-1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "P_c = 0.000000" in out
    assert "verdict = inconclusive" in out


def test_classify_labels(capsys):
    assert main(["classify", "--state", "bell:phi-plus"]) == EXIT_OK
    assert "label = symmetric" in capsys.readouterr().out
    assert main(["classify", "--state", "bell:psi-minus"]) == EXIT_OK
    assert "label = antisymmetric" in capsys.readouterr().out


def test_classify_spdc_hermite_pump(capsys):
    assert main(["classify", "--state", "spdc", "--pump", "hg:0,1"]) == EXIT_OK
    assert "label = antisymmetric" in capsys.readouterr().out


def test_missing_state_is_config_error(capsys):
    assert main(["pc"]) == EXIT_CONFIG
    assert "state" in capsys.readouterr().err


def test_bad_pump_is_config_error(capsys):
    assert main(["pc", "--state", "spdc", "--pump", "lg:0"]) == EXIT_CONFIG
    assert "pump" in capsys.readouterr().err


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("state = product\nl1 = 1\nl2 = 1\n")
    assert main(["pc", "--config", str(cfg)]) == EXIT_OK
    assert "P_c = 0.500000" in capsys.readouterr().out
    # a flag overrides the file value
    assert main(["pc", "--config", str(cfg), "--l2", "-1"]) == EXIT_OK
    assert "P_c = 0.000000" in capsys.readouterr().out


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("state = product\nwibble = 3\n")
    assert main(["pc", "--config", str(cfg)]) == EXIT_CONFIG
    assert "wibble" in capsys.readouterr().err


def test_config_file_missing(capsys):
    assert main(["pc", "--config", "/nonexistent/path.cfg"]) == EXIT_CONFIG
    capsys.readouterr()


def test_scan_writes_deterministic_csv(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    argv = ["scan", "--parameter", "zeta", "--range", "0.5,2", "--steps", "4",
            "--grid-n", "128", "--aperture-factor", "8"]
    assert main(argv + ["--out", str(out1)]) == EXIT_OK
    assert main(argv + ["--out", str(out2)]) == EXIT_OK
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    meta = [l for l in lines if l.startswith("# ")]
    assert meta == sorted(meta)
    assert "# parameter = zeta" in meta
    header_idx = len(meta)
    assert lines[header_idx] == "parameter,conditional_pc,oracle_pc,throughput,flag"
    rows = [l.split(",") for l in lines[header_idx + 1:]]
    assert len(rows) == 4
    assert [float(r[0]) for r in rows] == pytest.approx([0.5, 1.0, 1.5, 2.0])
    assert all(r[4] == "ok" for r in rows)


def test_scan_bad_range_is_config_error(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert main(["scan", "--range", "2,1", "--out", str(out)]) == EXIT_CONFIG
    assert main(["scan", "--range", "huh", "--out", str(out)]) == EXIT_CONFIG
    capsys.readouterr()


def test_scan_all_degenerate_exit_code(tmp_path, capsys):
    out = tmp_path / "deg.csv"
    # zeta = 0, alpha_plus sweep over multiples of pi: envelope always vanishes
    code = main(["scan", "--parameter", "alpha_plus", "--zeta", "0",
                 "--range", f"0,{np.pi}", "--steps", "2",
                 "--grid-n", "128", "--aperture-factor", "8", "--out", str(out)])
    assert code == EXIT_DEGENERATE
    capsys.readouterr()
    rows = [l for l in out.read_text().splitlines()
            if not l.startswith("#")][1:]
    assert all(r.endswith(",degenerate") and ",nan," in r for r in rows)


def test_build_state_thin_crystal_grid_tracks_aperture():
    amp = build_state({"state": "thin-crystal", "w0": 1.0, "z": 1.0,
                       "pump_wavenumber": 2.0, "grid_n": 32, "half_width": None,
                       "aperture_factor": 4.0})
    assert amp.grid.half_width == pytest.approx(4.0 * np.sqrt(2.0))
