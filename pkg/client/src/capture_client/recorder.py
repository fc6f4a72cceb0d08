"""Recording labeled gesture captures to the recognizer's dataset format.

A capture file is one {"label": name} line followed by exactly 30 frame
lines; a dataset is a directory of such files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .emitter import Detection
from .wire import frame_line

FRAMES_PER_CAPTURE = 30


class CaptureRecorder:
    """Collects exactly 30 detections, then renders a capture file."""

    def __init__(self, label: str):
        if not label:
            raise ValueError("a capture needs a gesture label")
        self.label = label
        self._lines: list[str] = []
        self._last_t: int | None = None

    @property
    def count(self) -> int:
        return len(self._lines)

    @property
    def full(self) -> bool:
        return len(self._lines) == FRAMES_PER_CAPTURE

    def add(self, detection: Detection, t_ms: int) -> None:
        if self.full:
            raise ValueError(f"capture already holds {FRAMES_PER_CAPTURE} frames")
        if self._last_t is not None and t_ms < self._last_t:
            raise ValueError(f"timestamps must be non-decreasing ({t_ms} after {self._last_t})")
        self._lines.append(frame_line(t_ms, detection.hand, detection.conf, detection.pts))
        self._last_t = t_ms

    def render(self) -> str:
        if not self.full:
            raise ValueError(
                f"capture needs {FRAMES_PER_CAPTURE} frames, has {len(self._lines)}"
            )
        header = json.dumps({"label": self.label}, separators=(",", ":"))
        return header + "\n" + "\n".join(self._lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.render(), encoding="utf-8", newline="\n")
