"""Domain types for hand-landmark streams and the capture file format.

A frame is one observation of the 21 hand keypoints (wrist, finger joints,
fingertips) with handedness and a detection confidence. Frames travel as
NDJSON lines; a capture is a labeled group of exactly 30 frames stored in a
``.capture`` file (one label line followed by 30 frame lines).

All types here are immutable after construction and safe to share across
threads; parsing is stateless.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

POINTS_PER_HAND = 21
FRAMES_PER_CAPTURE = 30

# Text formats carry coordinates at 6 significant digits.
COORD_FORMAT = ".6g"

HAND_LOST_LINE = '{"event":"hand_lost"}'


class WireFormatError(ValueError):
    """Base error for malformed stream or capture data."""


class FrameParseError(WireFormatError):
    """The line is not valid JSON."""


class FrameSchemaError(WireFormatError):
    """The JSON is well formed but does not match the frame schema."""


class FrameRangeError(WireFormatError):
    """A field value is outside its admitted range (non-finite coordinate, bad confidence)."""


class CaptureError(WireFormatError):
    """A capture file or dataset directory violates the capture format."""


class Handedness(Enum):
    LEFT = "L"
    RIGHT = "R"


class GestureClass(IntEnum):
    """The 11 gesture classes. Integer values are frozen: they are the
    model's output indices and the order recorded in weight files."""

    AIR_CONDITIONING = 0
    CURTAINS = 1
    WINDOWS = 2
    LIGHTS = 3
    TOGGLE = 4
    INCREASE_INTENSITY = 5
    DECREASE_INTENSITY = 6
    COLOR_BLUE = 7
    COLOR_RED = 8
    COLOR_WHITE = 9
    NEUTRAL = 10

    @property
    def wire_name(self) -> str:
        return self.name.lower()

    @classmethod
    def from_wire(cls, name: str) -> "GestureClass":
        try:
            return _WIRE_TO_CLASS[name]
        except (KeyError, TypeError):
            raise CaptureError(f"unknown gesture class {name!r}") from None


_WIRE_TO_CLASS = {c.name.lower(): c for c in GestureClass}

CLASS_ORDER: tuple[str, ...] = tuple(c.wire_name for c in GestureClass)
NUM_CLASSES = len(GestureClass)


def _require_finite_number(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FrameSchemaError(f"{what} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise FrameRangeError(f"{what} must be finite, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class Landmark:
    """One keypoint in normalized image coordinates; z is relative depth."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            _require_finite_number(getattr(self, name), f"landmark {name}")


@dataclass(frozen=True)
class HandFrame:
    """One timestamped observation of the 21 hand keypoints."""

    timestamp_ms: int
    handedness: Handedness
    detection_confidence: float
    points: tuple[Landmark, ...]

    def __post_init__(self):
        if isinstance(self.timestamp_ms, bool) or not isinstance(self.timestamp_ms, int):
            raise FrameSchemaError(f"timestamp must be an integer, got {self.timestamp_ms!r}")
        if self.timestamp_ms < 0:
            raise FrameRangeError(f"timestamp must be >= 0, got {self.timestamp_ms}")
        if not isinstance(self.handedness, Handedness):
            raise FrameSchemaError(f"handedness must be Handedness, got {self.handedness!r}")
        conf = _require_finite_number(self.detection_confidence, "detection confidence")
        if not 0.0 <= conf <= 1.0:
            raise FrameRangeError(f"detection confidence must be in [0, 1], got {conf}")
        points = tuple(self.points)
        if len(points) != POINTS_PER_HAND:
            raise FrameSchemaError(
                f"expected {POINTS_PER_HAND} points, got {len(points)}"
            )
        object.__setattr__(self, "detection_confidence", conf)
        object.__setattr__(self, "points", points)


@dataclass(frozen=True)
class HandLost:
    """Stream marker: the hand left the scene."""


HAND_LOST = HandLost()

StreamItem = Union[HandFrame, HandLost]


@dataclass(frozen=True)
class Capture:
    """A labeled gesture recording of exactly 30 frames."""

    label: GestureClass
    frames: tuple[HandFrame, ...]

    def __post_init__(self):
        if not isinstance(self.label, GestureClass):
            raise CaptureError(f"label must be a GestureClass, got {self.label!r}")
        frames = tuple(self.frames)
        if len(frames) != FRAMES_PER_CAPTURE:
            raise CaptureError(
                f"a capture holds exactly {FRAMES_PER_CAPTURE} frames, got {len(frames)}"
            )
        for prev, cur in zip(frames, frames[1:]):
            if cur.timestamp_ms < prev.timestamp_ms:
                raise CaptureError("frame timestamps must be non-decreasing")
        object.__setattr__(self, "frames", frames)


# ---------------------------------------------------------------------------
# NDJSON frame format
# ---------------------------------------------------------------------------

def _fmt(value: float) -> str:
    value = float(value)
    if value == 0.0:  # canonicalize -0.0 so equal values give equal bytes
        value = 0.0
    return format(value, COORD_FORMAT)


def serialize_frame(frame: HandFrame) -> str:
    """Render a frame as one NDJSON line (no trailing newline)."""
    pts = ",".join(
        f"[{_fmt(p.x)},{_fmt(p.y)},{_fmt(p.z)}]" for p in frame.points
    )
    return (
        f'{{"t":{frame.timestamp_ms},"hand":"{frame.handedness.value}",'
        f'"conf":{_fmt(frame.detection_confidence)},"pts":[{pts}]}}'
    )


def _frame_from_object(obj) -> HandFrame:
    if not isinstance(obj, dict):
        raise FrameSchemaError("frame record must be a JSON object")
    missing = {"t", "hand", "conf", "pts"} - obj.keys()
    if missing:
        raise FrameSchemaError(f"missing fields: {sorted(missing)}")

    t = obj["t"]
    if isinstance(t, bool) or not isinstance(t, int):
        raise FrameSchemaError(f'"t" must be an integer millisecond count, got {t!r}')

    hand = obj["hand"]
    if hand not in ("L", "R"):
        raise FrameSchemaError(f'"hand" must be "L" or "R", got {hand!r}')

    conf = _require_finite_number(obj["conf"], '"conf"')

    pts = obj["pts"]
    if not isinstance(pts, list):
        raise FrameSchemaError('"pts" must be an array')
    if len(pts) != POINTS_PER_HAND:
        raise FrameSchemaError(f"expected {POINTS_PER_HAND} points, got {len(pts)}")
    points = []
    for i, entry in enumerate(pts):
        if not isinstance(entry, list) or len(entry) != 3:
            raise FrameSchemaError(f"point {i} must be an [x, y, z] triple")
        x, y, z = (
            _require_finite_number(entry[k], f"point {i} coordinate {k}")
            for k in range(3)
        )
        points.append(Landmark(x, y, z))

    return HandFrame(t, Handedness(hand), conf, tuple(points))


def parse_frame(line: str) -> HandFrame:
    """Parse one NDJSON frame record into a validated HandFrame."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FrameParseError(f"invalid JSON: {exc}") from None
    return _frame_from_object(obj)


def parse_stream_line(line: str) -> StreamItem:
    """Parse one stream line: either a frame record or the hand-lost marker."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FrameParseError(f"invalid JSON: {exc}") from None
    if isinstance(obj, dict) and "event" in obj:
        if obj["event"] == "hand_lost":
            return HAND_LOST
        raise FrameSchemaError(f"unknown stream event {obj['event']!r}")
    return _frame_from_object(obj)


def parse_stream(lines: Iterable[str]) -> Iterator[StreamItem]:
    """Parse a frame stream line by line, enforcing non-decreasing timestamps.

    Blank lines are skipped. Raises WireFormatError subclasses on bad input.
    """
    last_t = None
    for line in lines:
        if not line.strip():
            continue
        item = parse_stream_line(line)
        if isinstance(item, HandFrame):
            if last_t is not None and item.timestamp_ms < last_t:
                raise FrameRangeError(
                    f"timestamps must be non-decreasing within a stream "
                    f"({item.timestamp_ms} after {last_t})"
                )
            last_t = item.timestamp_ms
        yield item


# ---------------------------------------------------------------------------
# Capture files and dataset directories
# ---------------------------------------------------------------------------

CAPTURE_SUFFIX = ".capture"


def serialize_capture(capture: Capture) -> str:
    """Render a capture as file text: label line plus 30 frame lines."""
    header = json.dumps({"label": capture.label.wire_name}, separators=(",", ":"))
    body = "\n".join(serialize_frame(f) for f in capture.frames)
    return header + "\n" + body + "\n"


def write_capture(capture: Capture, path) -> None:
    Path(path).write_text(serialize_capture(capture), encoding="utf-8", newline="\n")


def read_capture(path) -> Capture:
    """Read one capture file; errors carry the file identity."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CaptureError(f"{path}: cannot read capture file: {exc}") from exc
    lines = [line for line in text.split("\n") if line.strip()]
    if not lines:
        raise CaptureError(f"{path}: empty capture file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise CaptureError(f"{path}: invalid label line: {exc}") from None
    if not isinstance(header, dict) or "label" not in header:
        raise CaptureError(f"{path}: first line must be a label record")
    try:
        label = GestureClass.from_wire(header["label"])
    except CaptureError as exc:
        raise CaptureError(f"{path}: {exc}") from None
    frame_lines = lines[1:]
    if len(frame_lines) != FRAMES_PER_CAPTURE:
        raise CaptureError(
            f"{path}: expected {FRAMES_PER_CAPTURE} frames, found {len(frame_lines)}"
        )
    try:
        frames = tuple(parse_frame(line) for line in frame_lines)
        return Capture(label, frames)
    except WireFormatError as exc:
        raise CaptureError(f"{path}: {exc}") from exc


def load_captures(path) -> list[Capture]:
    """Load every ``*.capture`` file under a dataset directory (sorted by name)."""
    root = Path(path)
    if not root.is_dir():
        raise CaptureError(f"{root}: not a dataset directory")
    return [read_capture(p) for p in sorted(root.glob(f"*{CAPTURE_SUFFIX}"))]
