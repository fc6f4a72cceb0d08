"""Turning per-video-frame tracker output into a wire stream."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .wire import HAND_LOST_LINE, frame_line


@dataclass(frozen=True)
class Detection:
    """One tracked hand: handedness, tracker confidence, 21 (x, y, z) points."""

    hand: str
    conf: float
    pts: Sequence[tuple[float, float, float]]


class WireEmitter:
    """Edge-triggered stream writer.

    Feed it one result per video frame: a Detection when the tracker found
    a hand, None when it did not. Detections become frame lines. A run of
    misses emits a single hand_lost marker at its start and nothing after,
    so the stream never repeats the marker. Misses before the first
    detection are silent; there is no hand to lose yet.
    """

    def __init__(self, sink: Callable[[str], None]):
        self._sink = sink
        self._tracking = False
        self.frames_sent = 0
        self.losses_sent = 0

    def push(self, result: Optional[Detection], t_ms: int) -> None:
        if result is None:
            if self._tracking:
                self._sink(HAND_LOST_LINE)
                self.losses_sent += 1
                self._tracking = False
            return
        self._sink(frame_line(t_ms, result.hand, result.conf, result.pts))
        self.frames_sent += 1
        self._tracking = True
