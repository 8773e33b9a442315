import csv
import math

import pytest

from riskshrink.audio import generate_white_noise, write_wav
from riskshrink.cli import main
from riskshrink.risklab import CheckResult
from riskshrink.shrinkage import ShrinkageKind


@pytest.fixture()
def fixture_wavs(tmp_path, voiced_buffer):
    clean_path = tmp_path / "clean.wav"
    noise_path = tmp_path / "noise.wav"
    write_wav(clean_path, voiced_buffer)
    write_wav(
        noise_path, generate_white_noise(len(voiced_buffer) + 8000, 0.05, seed=40)
    )
    return clean_path, noise_path


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------


def test_curves_row_count_and_values(tmp_path):
    out = tmp_path / "curves.csv"
    # note the = form: a leading '-' after a space would parse as a flag
    assert main(["curves", "--xi-db-range=-10:40:0.5", "--out-csv", str(out)]) == 0
    rows = _read_csv(out)
    header, data = rows[0], rows[1:]
    assert header[0] == "xi_db"
    assert len(data) == 101

    by_db = {float(r[0]): r for r in data}
    row10 = by_db[10.0]
    expected = {
        "mse": 0.9,
        "we": 1.0 / 1.174,
        "log_mse": 1.0,
        "is": 1.0 / 1.144,
        "is_ii": 1.85**-0.5,
        "cosh": math.sqrt(1.1 / 1.144),
        "wcosh": 2.19**-0.5,
    }
    for col, kind in enumerate(ShrinkageKind, start=1):
        assert float(row10[col]) == pytest.approx(expected[kind.value], abs=1e-6)
    # gains approach unity at the top of the range
    last = data[-1]
    assert all(float(v) > 0.99 for v in last[1:])


def test_curves_bad_range_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["curves", "--xi-db-range", "oops"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------


def test_evaluate_single_condition_row(fixture_wavs, tmp_path):
    clean, noise = fixture_wavs
    out = tmp_path / "eval.csv"
    rc = main(
        [
            "evaluate",
            "--clean", str(clean),
            "--noise", str(noise),
            "--snr-list", "10",
            "--kinds", "mse",
            "--seeds", "1",
            "--out-csv", str(out),
        ]
    )
    assert rc == 0
    rows = _read_csv(out)
    assert len(rows) == 2  # header + one condition
    assert rows[1][1] == "mse"


def test_evaluate_all_kinds_cardinality_and_positive_gains(fixture_wavs, tmp_path):
    clean, noise = fixture_wavs
    out = tmp_path / "eval_all.csv"
    rc = main(
        [
            "evaluate",
            "--clean", str(clean),
            "--noise", str(noise),
            "--snr-list", "10",
            "--kinds", "all",
            "--seeds", "0,1",
            "--out-csv", str(out),
        ]
    )
    assert rc == 0
    rows = _read_csv(out)
    header, data = rows[0], rows[1:]
    assert len(data) == 7
    gain_col = header.index("snr_gain_db")
    ssnr_col = header.index("ssnr_gain_db")
    for row in data:
        assert float(row[gain_col]) > 0.0
        assert float(row[ssnr_col]) > 0.0


def test_evaluate_deterministic_bytes(fixture_wavs, tmp_path):
    clean, noise = fixture_wavs
    args = [
        "evaluate",
        "--clean", str(clean),
        "--noise", str(noise),
        "--snr-list", "10",
        "--kinds", "mse,wcosh",
        "--seeds", "0,1",
    ]
    out1 = tmp_path / "run1.csv"
    out2 = tmp_path / "run2.csv"
    assert main(args + ["--out-csv", str(out1)]) == 0
    assert main(args + ["--out-csv", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_evaluate_unknown_kind_is_usage_error(fixture_wavs, tmp_path):
    clean, noise = fixture_wavs
    with pytest.raises(SystemExit) as exc:
        main(
            [
                "evaluate",
                "--clean", str(clean),
                "--noise", str(noise),
                "--kinds", "nope",
                "--out-csv", str(tmp_path / "x.csv"),
            ]
        )
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# denoise
# ---------------------------------------------------------------------------


def test_denoise_missing_in_flag_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["denoise", "--out", str(tmp_path / "o.wav")])
    assert exc.value.code == 2


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["denoise", "--in", "a.wav", "--out", "b.wav", "--frobnicate"])
    assert exc.value.code == 2


def test_denoise_missing_file_fails_without_output(tmp_path, capsys):
    dst = tmp_path / "out.wav"
    rc = main(["denoise", "--in", str(tmp_path / "ghost.wav"), "--out", str(dst)])
    assert rc == 1
    assert not dst.exists()
    assert "error:" in capsys.readouterr().err


def test_denoise_valid_run(fixture_wavs, tmp_path, capsys):
    clean, _ = fixture_wavs
    dst = tmp_path / "denoised.wav"
    rc = main(["denoise", "--in", str(clean), "--out", str(dst), "--kind", "wcosh"])
    assert rc == 0
    assert dst.exists()
    assert '"kind": "wcosh"' in capsys.readouterr().out


def test_denoise_config_file_with_flag_override(fixture_wavs, tmp_path, capsys):
    clean, _ = fixture_wavs
    cfg = tmp_path / "denoiser.cfg"
    cfg.write_text("# comment line\nkind=cosh\nalpha=2.5\nvad_threshold=0.2\n")
    dst = tmp_path / "out.wav"
    rc = main(
        [
            "denoise",
            "--in", str(clean),
            "--out", str(dst),
            "--config", str(cfg),
            "--alpha", "1.25",
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert '"kind": "cosh"' in out  # from file
    assert '"alpha": 1.25' in out  # flag wins over file


def test_denoise_bad_config_key_is_usage_error(fixture_wavs, tmp_path):
    clean, _ = fixture_wavs
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frame_size=17\n")
    with pytest.raises(SystemExit) as exc:
        main(["denoise", "--in", str(clean), "--out", str(tmp_path / "o.wav"),
              "--config", str(cfg)])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_small_run_passes(capsys):
    rc = main(["verify", "--samples", "20000", "--seed", "2", "--grid-step", "0.001"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "0 failed" in out
    assert "PASS" in out


def test_verify_coarse_grid_still_passes(capsys):
    # tolerance scales with the grid step
    rc = main(["verify", "--samples", "20000", "--seed", "2", "--grid-step", "0.1"])
    assert rc == 0


def test_verify_zero_samples_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--samples", "0"])
    assert exc.value.code == 2


def test_verify_reports_failure_with_exit_one(monkeypatch, capsys):
    import riskshrink.cli as cli_mod

    monkeypatch.setattr(
        cli_mod.risklab,
        "verification_suite",
        lambda **kw: [CheckResult("forced", 1.0, 0.0, 0.1)],
    )
    rc = main(["verify", "--samples", "10"])
    assert rc == 1
    assert "FAIL" in capsys.readouterr().out
