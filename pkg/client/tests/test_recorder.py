"""Capture recording, including acceptance by the recognizer's own tools."""

import json
import subprocess
import sys

import pytest

from capture_client import CaptureRecorder, Detection


def det(i: int) -> Detection:
    v = 0.3 + 0.01 * i
    return Detection("R", 0.95, [(v, v + 0.1, v - 0.2)] * 21)


def filled() -> CaptureRecorder:
    recorder = CaptureRecorder("toggle")
    for i in range(30):
        recorder.add(det(i), t_ms=33 * i)
    return recorder


def test_render_layout():
    text = filled().render()
    lines = text.splitlines()
    assert len(lines) == 31
    assert json.loads(lines[0]) == {"label": "toggle"}
    assert all(json.loads(l)["hand"] == "R" for l in lines[1:])
    assert text.endswith("\n")


def test_incomplete_capture_refuses_to_render():
    recorder = CaptureRecorder("toggle")
    recorder.add(det(0), t_ms=0)
    assert not recorder.full
    with pytest.raises(ValueError, match="has 1"):
        recorder.render()


def test_overfull_and_regressing_timestamps_rejected():
    recorder = filled()
    with pytest.raises(ValueError, match="already holds"):
        recorder.add(det(0), t_ms=10_000)
    fresh = CaptureRecorder("toggle")
    fresh.add(det(0), t_ms=100)
    with pytest.raises(ValueError, match="non-decreasing"):
        fresh.add(det(1), t_ms=99)


def test_recognizer_accepts_recorded_capture(tmp_path):
    # The real consumer is the judge of the format: its encode subcommand
    # must read the file and render the PGM without complaint.
    path = tmp_path / "toggle.capture"
    filled().save(path)
    result = subprocess.run(
        [sys.executable, "-m", "signstream.cli", "encode", "--capture", str(path)],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0, result.stderr
    assert (tmp_path / "toggle.capture.pgm").exists()
