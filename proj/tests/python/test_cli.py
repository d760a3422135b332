import json
import os
import subprocess

import pytest

CLI = os.environ.get("ZIGZAG_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="ZIGZAG_CLI not set")


def run(args, cwd, check=True):
    proc = subprocess.run([CLI] + args, cwd=cwd, capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"{args} failed ({proc.returncode}): {proc.stderr}")
    return proc


def test_generate_postprocess_test_roundtrip(tmp_path):
    run(
        ["generate", "--map", "nonideal", "--sigma-device", "0.02", "--stages", "4",
         "--n-bits", "300000", "--seed", "7", "--out", "raw.bin"],
        tmp_path,
    )
    assert (tmp_path / "raw.bin").exists()
    side = json.loads((tmp_path / "raw.bin.json").read_text())
    assert side["length"] == 300000
    assert side["meta"]["scenario"]["sigma_device"] == 0.02

    run(["postprocess", "--in", "raw.bin", "--l", "auto", "--stages", "4",
         "--out", "post.bin"], tmp_path)
    manifest = json.loads((tmp_path / "post.bin.manifest.json").read_text())
    assert "chosen_l" in manifest["parameters"]

    proc = run(["test", "--in", "post.bin", "--alpha", "0.01", "--out", "report.json"], tmp_path)
    assert "Frequency" in proc.stdout
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["alpha"] == 0.01


def test_manifest_replay_is_byte_identical(tmp_path):
    run(["generate", "--map", "zigzag", "--n-bits", "50000", "--seed", "9",
         "--out", "a.bin"], tmp_path)
    first = (tmp_path / "a.bin").read_bytes()
    (tmp_path / "a.bin").unlink()
    run(["replay", "--manifest", "a.bin.manifest.json"], tmp_path)
    assert (tmp_path / "a.bin").read_bytes() == first


def test_bifurcate_rejects_out_of_range(tmp_path):
    proc = run(["bifurcate", "--m-lo", "2.9", "--m-hi", "3.1", "--out", "b.csv"],
               tmp_path, check=False)
    assert proc.returncode == 2


def test_bifurcate_small_range(tmp_path):
    run(["bifurcate", "--m-lo", "0.2", "--m-hi", "0.8", "--n-m", "5",
         "--n-transient", "600", "--n-keep", "5", "--out", "b.csv"], tmp_path)
    lines = (tmp_path / "b.csv").read_text().strip().splitlines()
    assert lines[0] == "m,x"
    for line in lines[1:]:
        m, x = line.split(",")
        assert abs(float(x)) < 1e-6


def test_zero_noise_warning(tmp_path):
    proc = run(["generate", "--map", "tent", "--noise-std", "0", "--n-bits", "1000",
                "--discard", "0", "--out", "t.bin"], tmp_path)
    assert "deterministic" in proc.stderr


def test_strict_failure_exit_code(tmp_path):
    # heavily biased stream: every battery run must fail at least one test
    run(["generate", "--map", "nonideal", "--dg1", "0.06", "--dg2", "0.06",
         "--n-bits", "200000", "--seed", "3", "--out", "biased.bin"], tmp_path)
    proc = run(["test", "--in", "biased.bin", "--strict"], tmp_path, check=False)
    assert proc.returncode == 4
