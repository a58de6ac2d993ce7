import json
import os

import numpy as np
import pytest

from skagree.cli import KIND_PARAMS, ConfigError, ExperimentConfig, describe, main, run


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestDescribe:
    def test_threshold_lists_parameters(self):
        text = describe("threshold")
        for key in ("w_c", "rate", "w_r", "tol_db", "seed"):
            assert key in text

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            describe("nonsense")

    def test_every_kind_describable(self):
        for kind in KIND_PARAMS:
            assert describe(kind)


class TestConfigValidation:
    def test_missing_seed(self):
        with pytest.raises(ConfigError, match="seed required"):
            ExperimentConfig.from_dict("threshold", {"w_c": 3, "rate": 0.25})

    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="w_z"):
            ExperimentConfig.from_dict(
                "threshold", {"seed": 1, "w_c": 3, "rate": 0.25, "w_z": 9}
            )

    def test_missing_required_key_named(self):
        with pytest.raises(ConfigError, match="trials"):
            ExperimentConfig.from_dict(
                "diag-check", {"seed": 1, "m": 16, "mu": 4, "l_r": 2}
            )

    def test_rate_and_wr_mutually_exclusive(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(
                "threshold", {"seed": 1, "w_c": 3, "rate": 0.25, "w_r": 4.0}
            )


class TestMain:
    def test_threshold_end_to_end(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {"seed": 3, "w_c": 3, "rate": 0.25, "tol_db": 0.1, "out": "th"},
        )
        code = main(["threshold", "--config", cfg, "--out", str(tmp_path)])
        assert code == 0
        body = (tmp_path / "th.csv").read_text().splitlines()
        assert body[0] == "w_c,w_r,lambda_th_db"
        lam_db = float(body[1].split(",")[2])
        assert abs(lam_db - (-2.0)) < 0.3
        meta = json.loads((tmp_path / "th.meta.json").read_text())
        assert meta["params"]["seed"] == 3
        assert "philox" in meta["rng_algorithm"]

    def test_missing_seed_exit_code_and_diagnostic(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"w_c": 3, "rate": 0.25})
        assert main(["threshold", "--config", cfg, "--out", str(tmp_path)]) == 1
        assert "seed required" in capsys.readouterr().err

    def test_no_partial_files_on_failure(self, tmp_path):
        # bracket failure after validation: exit 2, nothing written
        cfg = write_config(
            tmp_path,
            {"seed": 1, "w_c": 3, "w_r": 4.0, "lo_db": -20.0, "hi_db": -15.0,
             "out": "bad"},
        )
        out_dir = tmp_path / "results"
        out_dir.mkdir()
        assert main(["threshold", "--config", cfg, "--out", str(out_dir)]) == 2
        assert list(out_dir.iterdir()) == []

    def test_describe_command(self, capsys):
        assert main(["describe", "sk-cdf"]) == 0
        assert "gamma_r_db" in capsys.readouterr().out

    def test_unknown_config_file(self, tmp_path, capsys):
        assert main(["threshold", "--config", str(tmp_path / "nope.json")]) == 1


class TestRunKinds:
    def test_diag_check(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            "diag-check", {"seed": 5, "m": 32, "mu": 4, "l_r": 3, "trials": 20}
        )
        run(cfg, out_dir=str(tmp_path))
        meta = json.loads((tmp_path / "diag-check.meta.json").read_text())
        assert meta["worst_offdiag"] < 1e-10
        assert meta["worst_diag_error"] < 1e-10

    def test_fer_sim_small(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            "fer-sim",
            {
                "seed": 2,
                "n": 256,
                "rate": 0.25,
                "w_c": 3,
                "snr_db_list": [1.0],
                "max_frames": 50,
                "target_frame_errors": 50,
                "max_iter": 30,
                "out": "fer",
            },
        )
        run(cfg, out_dir=str(tmp_path))
        lines = (tmp_path / "fer.csv").read_text().splitlines()
        assert lines[0] == "snr_db,frames,frame_errors,bit_errors,fer,ber,ci95"
        assert len(lines) == 2
        meta = json.loads((tmp_path / "fer.meta.json").read_text())
        assert meta["true_rate"] == pytest.approx(0.25)
        assert meta["girth"] >= 6

    def test_sk_cdf_writes_both_curves(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            "sk-cdf",
            {
                "seed": 9,
                "m": 64,
                "mu": 8,
                "l_r": 8,
                "l_e": 8,
                "gamma_r_db": -10.0,
                "gamma_e_db": -10.0,
                "target_lambda_r_db": -1.0,
                "samples": 2000,
                "out": "cdf",
            },
        )
        run(cfg, out_dir=str(tmp_path))
        sk = np.loadtxt(tmp_path / "cdf.csv", delimiter=",", skiprows=1)
        sec = np.loadtxt(tmp_path / "cdf.secrecy.csv", delimiter=",", skiprows=1)
        assert sk.shape == (2000, 2)
        assert sec.shape == (2000, 2)
        assert np.all(np.diff(sk[:, 0]) >= 0)
        meta = json.loads((tmp_path / "cdf.meta.json").read_text())
        assert "0.001" in meta["rate_at_outage"]

    def test_outage_analytic_monotone_cdf(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            "outage-analytic",
            {
                "seed": 4,
                "m": 64,
                "mu": 8,
                "l_e": 8,
                "gamma_e_db": -10.0,
                "power": 2.0,
                "points": 50,
                "out": "oa",
            },
        )
        run(cfg, out_dir=str(tmp_path))
        data = np.loadtxt(tmp_path / "oa.csv", delimiter=",", skiprows=1)
        assert data.shape[1] == 2
        assert np.all(np.diff(data[:, 1]) >= -1e-12)
        assert 0.0 <= data[0, 1] and data[-1, 1] <= 1.0

    def test_security_gap_relaxed(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            "security-gap",
            {
                "seed": 6,
                "n": 1024,
                "rate": 0.25,
                "w_c": 3,
                "fer_reliable": 0.05,
                "fer_secure": 0.8,
                "step_db": 0.25,
                "max_frames": 300,
                "target_frame_errors": 60,
                "max_iter": 40,
                "out": "gap",
            },
        )
        run(cfg, out_dir=str(tmp_path))
        body = (tmp_path / "gap.csv").read_text().splitlines()
        gap_db = float(body[1].split(",")[2])
        assert 0.0 < gap_db < 3.0
        assert (tmp_path / "gap.grid.csv").exists()


def test_rerun_byte_identical(tmp_path):
    payload = {
        "seed": 11,
        "m": 32,
        "mu": 4,
        "l_r": 4,
        "l_e": 4,
        "gamma_r_db": -10.0,
        "gamma_e_db": -10.0,
        "target_lambda_r_db": -1.0,
        "samples": 500,
        "out": "rep",
    }
    cfg = ExperimentConfig.from_dict("sk-cdf", payload)
    run(cfg, out_dir=str(tmp_path / "a"))
    run(cfg, out_dir=str(tmp_path / "b"))
    assert (tmp_path / "a" / "rep.csv").read_bytes() == (
        tmp_path / "b" / "rep.csv"
    ).read_bytes()
    assert (tmp_path / "a" / "rep.secrecy.csv").read_bytes() == (
        tmp_path / "b" / "rep.secrecy.csv"
    ).read_bytes()
