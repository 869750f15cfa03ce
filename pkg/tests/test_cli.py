"""Command-line interface: subcommands, outputs, exit codes, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from gpsl_heating.cli import main


def run(argv):
    try:
        return main(list(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


class TestFunctionalCommand:
    def test_dirichlet_gaussian(self, capsys):
        assert run(["functional", "--kind", "dirichlet", "--g", "gaussian:1.0"]) == 0
        assert "0.375" in capsys.readouterr().out

    def test_macro_feedback_ball(self, capsys):
        assert run(["functional", "--kind", "irg", "--g", "ball:1.0"]) == 0
        assert "3.371911070899548" in capsys.readouterr().out

    def test_overlap_two_profiles(self, capsys):
        assert run(["functional", "--kind", "i0", "--gc", "gaussian:1.0",
                    "--gg", "gaussian:1.0"]) == 0
        assert "0.01710963180726" in capsys.readouterr().out

    def test_two_particle(self, capsys):
        assert run(["functional", "--kind", "two-particle",
                    "--g", "subgauss:1.9:1.0", "--m1", "1", "--m2", "10",
                    "--d", "1.0"]) == 0
        assert "0.412514785841" in capsys.readouterr().out

    def test_repeatable_profiles_and_separations(self, capsys):
        assert run(["functional", "--kind", "dirichlet",
                    "--g", "gaussian:1.0", "--g", "quartic:1.0"]) == 0
        out = capsys.readouterr().out
        assert "gaussian:1.0" in out and "quartic:1.0" in out

    def test_table_outputs(self, tmp_path):
        base = tmp_path / "dir"
        assert run(["functional", "--kind", "dirichlet", "--g", "gaussian:1.0",
                    "--out", str(base)]) == 0
        csv_text = (tmp_path / "dir.csv").read_text()
        data = json.loads((tmp_path / "dir.json").read_text())
        manifest = json.loads((tmp_path / "dir.manifest.json").read_text())
        assert "0.375" in csv_text
        assert data["rows"]
        assert manifest["subcommand"] == "functional"
        assert "output_digest" in manifest
        assert "timestamp" not in manifest

    def test_rerun_is_byte_identical(self, tmp_path):
        args = ["functional", "--kind", "irc", "--g", "quartic:1.0"]
        a, b = tmp_path / "a" / "table", tmp_path / "b" / "table"
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert a.with_suffix(".csv").read_bytes() == b.with_suffix(".csv").read_bytes()
        ma = json.loads(a.with_suffix(".manifest.json").read_text())
        mb = json.loads(b.with_suffix(".manifest.json").read_text())
        assert ma["output_digest"] == mb["output_digest"]


class TestFiguresCommand:
    def test_radius_curve_outputs(self, tmp_path):
        base = tmp_path / "rad"
        assert run(["figures", "radius-curve", "--rho=-2:2:9",
                    "--out", str(base)]) == 0
        for suffix in (".csv", ".json", ".manifest.json", ".png"):
            assert (tmp_path / ("rad" + suffix)).exists()
        assert (tmp_path / "rad.png").read_bytes()[:4] == b"\x89PNG"
        data = json.loads((tmp_path / "rad.json").read_text())
        cols = data["columns"]
        rows = data["rows"]
        over_rg = [row[cols.index("r_over_r_g")] for row in rows]
        assert over_rg[0] == pytest.approx(np.sqrt(5.0), rel=0.01)
        assert over_rg[-1] == pytest.approx(np.sqrt(3.0), rel=0.01)

    def test_exclusion_stars_lists_both_pulsars(self, tmp_path):
        base = tmp_path / "exc"
        assert run(["figures", "exclusion-stars", "--grid=-9:-7:3",
                    "--out", str(base)]) == 0
        text = (tmp_path / "exc.csv").read_text()
        assert "PSR J2144-3933" in text
        assert "PSR J1840-1419" in text

    def test_merged_overlay_takes_minimum(self, tmp_path):
        overlay = tmp_path / "ov.csv"
        overlay.write_text("r_C,lambda_upper,label\n"
                           "1e-9,1e5,lab\n1e-7,1e15,lab\n")
        base = tmp_path / "mrg"
        assert run(["figures", "exclusion-merged", "--grid=-9:-7:3",
                    "--fixed", "1e-7", "--overlay", str(overlay),
                    "--out", str(base)]) == 0
        data = json.loads((tmp_path / "mrg.json").read_text())
        cols = data["columns"]
        for row in data["rows"]:
            model = row[cols.index("model_upper")]
            merged = row[cols.index("merged_upper")]
            assert row[cols.index("limiting")] == "lab"
            assert merged <= model

    def test_malformed_overlay_is_usage_error(self, tmp_path):
        overlay = tmp_path / "bad.csv"
        overlay.write_text("1e-8,not-a-number,lab\n")
        assert run(["figures", "exclusion-merged", "--grid=-9:-7:3",
                    "--overlay", str(overlay), "--out", str(tmp_path / "x")]) == 2

    def test_rerun_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        args = ["figures", "ratio-curve", "--rho=-1:1:5"]
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_missing_out_is_usage_error(self):
        assert run(["figures", "radius-curve"]) == 2

    def test_bad_grid_string_is_usage_error(self):
        assert run(["figures", "radius-curve", "--rho", "nope",
                    "--out", "/tmp/never"]) == 2


class TestVerifyCommand:
    def test_scaling_suite_passes(self, capsys, tmp_path):
        report = tmp_path / "scaling.json"
        assert run(["verify", "scaling", "--out", str(report)]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out and "[FAIL]" not in out
        body = json.loads(report.read_text())
        assert body["report"]["all_pass"] is True
        assert all(chk["passed"] for chk in body["report"]["checks"])

    def test_closed_forms_suite_passes(self, tmp_path):
        assert run(["verify", "closedforms",
                    "--out", str(tmp_path / "cf.json")]) == 0

    def test_report_reruns_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(["verify", "scaling", "--seed", "7", "--out", str(a)]) == 0
        assert run(["verify", "scaling", "--seed", "7", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_sandwich_quick_run(self, tmp_path):
        assert run(["verify", "sandwich", "--configs", "4",
                    "--samples", "20000", "--seed", "0",
                    "--out", str(tmp_path / "s.json")]) == 0


class TestConstantsCommand:
    def test_dump_defaults(self, capsys):
        assert run(["constants", "--dump"]) == 0
        snap = json.loads(capsys.readouterr().out)
        assert snap["sigma_sb"] == 5.6e-8
        assert snap["G"] == 6.6743e-11

    def test_config_file_override(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"sigma_sb": 5.670374419e-8}))
        assert run(["--config", str(cfg), "constants", "--dump"]) == 0
        snap = json.loads(capsys.readouterr().out)
        assert snap["sigma_sb"] == 5.670374419e-8

    def test_env_fallback_and_flag_precedence(self, capsys, tmp_path, monkeypatch):
        env_cfg = tmp_path / "env.json"
        env_cfg.write_text(json.dumps({"G": 6.7e-11}))
        monkeypatch.setenv("GPSL_CONFIG", str(env_cfg))
        assert run(["constants", "--dump"]) == 0
        assert json.loads(capsys.readouterr().out)["G"] == 6.7e-11

        flag_cfg = tmp_path / "flag.json"
        flag_cfg.write_text(json.dumps({"G": 6.8e-11}))
        assert run(["--config", str(flag_cfg), "constants", "--dump"]) == 0
        assert json.loads(capsys.readouterr().out)["G"] == 6.8e-11

    def test_overrides_flow_into_bounds(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"sigma_sb": 5.670374419e-8}))
        base, precise = tmp_path / "base", tmp_path / "precise"
        args = ["figures", "exclusion-stars", "--grid=-8:-7:2"]
        assert run(args + ["--out", str(base)]) == 0
        assert run(["--config", str(cfg)] + args + ["--out", str(precise)]) == 0
        assert (tmp_path / "base.csv").read_bytes() != (
            tmp_path / "precise.csv").read_bytes()

    def test_missing_config_is_usage_error(self):
        assert run(["--config", "/no/such/file.json", "constants", "--dump"]) == 2

    def test_malformed_config_is_usage_error(self, tmp_path):
        cfg = tmp_path / "broken.json"
        cfg.write_text("{not json")
        assert run(["--config", str(cfg), "constants", "--dump"]) == 2


class TestExitCodes:
    def test_unknown_profile_family(self):
        assert run(["functional", "--kind", "dirichlet", "--g", "cauchy:1.0"]) == 2

    def test_bad_profile_parameter(self):
        assert run(["functional", "--kind", "dirichlet", "--g", "gaussian:-1.0"]) == 2

    def test_singular_functional_is_numerical_failure(self):
        assert run(["functional", "--kind", "dirichlet", "--g", "ball:1.0"]) == 3


def test_console_script_installed():
    proc = subprocess.run(["gpsl", "constants", "--dump"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["hbar"] == 1.054571817e-34
