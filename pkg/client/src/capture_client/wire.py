"""The recognizer's NDJSON wire format, implemented from its documentation.

One frame per line:

    {"t":<ms>,"hand":"L"|"R","conf":<0..1>,"pts":[[x,y,z] x 21]}

Coordinates travel at 6 significant digits; timestamps are non-decreasing
integers. When the tracker loses the hand the stream carries one marker
line, {"event":"hand_lost"}.
"""

from __future__ import annotations

import math

POINTS_PER_HAND = 21

HAND_LOST_LINE = '{"event":"hand_lost"}'

# Matches what the server's parser enforces for the lines we emit.
FRAME_SCHEMA = {
    "type": "object",
    "required": ["t", "hand", "conf", "pts"],
    "additionalProperties": False,
    "properties": {
        "t": {"type": "integer", "minimum": 0},
        "hand": {"enum": ["L", "R"]},
        "conf": {"type": "number", "minimum": 0, "maximum": 1},
        "pts": {
            "type": "array",
            "minItems": POINTS_PER_HAND,
            "maxItems": POINTS_PER_HAND,
            "items": {
                "type": "array",
                "minItems": 3,
                "maxItems": 3,
                "items": {"type": "number"},
            },
        },
    },
}


def _fmt(value: float) -> str:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"coordinates must be finite, got {value!r}")
    if value == 0.0:  # -0.0 and 0.0 must serialize identically
        value = 0.0
    return format(value, ".6g")


def frame_line(t_ms: int, hand: str, conf: float, pts) -> str:
    """Render one detection as a wire line (no trailing newline)."""
    if isinstance(t_ms, bool) or not isinstance(t_ms, int) or t_ms < 0:
        raise ValueError(f"timestamp must be a non-negative integer, got {t_ms!r}")
    if hand not in ("L", "R"):
        raise ValueError(f'hand must be "L" or "R", got {hand!r}')
    if not 0.0 <= conf <= 1.0:
        raise ValueError(f"confidence must be in [0, 1], got {conf!r}")
    pts = list(pts)
    if len(pts) != POINTS_PER_HAND:
        raise ValueError(f"expected {POINTS_PER_HAND} points, got {len(pts)}")
    body = ",".join(f"[{_fmt(x)},{_fmt(y)},{_fmt(z)}]" for x, y, z in pts)
    return f'{{"t":{t_ms},"hand":"{hand}","conf":{_fmt(conf)},"pts":[{body}]}}'


def validate_frame_line(line: str) -> None:
    """Assert a line satisfies FRAME_SCHEMA (jsonschema required)."""
    import json

    import jsonschema

    jsonschema.validate(json.loads(line), FRAME_SCHEMA)
