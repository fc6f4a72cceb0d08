"""Capture client: hand landmarks from a webcam (or a recorded file) to a
signstream recognizer server, speaking its NDJSON wire format over TCP.

This package is deliberately independent of the recognizer's code; the wire
format, capture file format and TCP protocol are the entire contract.
"""

from .emitter import Detection, WireEmitter
from .recorder import CaptureRecorder
from .replay import replay_file, replay_lines
from .wire import (
    FRAME_SCHEMA,
    HAND_LOST_LINE,
    frame_line,
    validate_frame_line,
)

__all__ = [
    "Detection",
    "WireEmitter",
    "CaptureRecorder",
    "replay_file",
    "replay_lines",
    "FRAME_SCHEMA",
    "HAND_LOST_LINE",
    "frame_line",
    "validate_frame_line",
]
