"""Deterministic synthetic gesture generator.

A parametric skeletal hand (wrist plus five fingers with per-finger curl,
whole-hand tilt, center and scale) is posed per gesture class: nine classes
are held poses, Toggle is a close-and-reopen curl wave, and the windows
gesture adds a rotation sweep about the wrist. Captures vary by small pose
offsets, a speed warp that compresses or stretches the trajectory in time,
and Gaussian position jitter, all drawn from one seeded generator, so a
seed pins the entire dataset byte for byte.

Classes are separable by construction: their mean poses sit far apart
relative to the jitter, which is what lets the test suite train small
models to high accuracy in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .landmarks import (
    FRAMES_PER_CAPTURE,
    HAND_LOST,
    HAND_LOST_LINE,
    Capture,
    GestureClass,
    HandFrame,
    Handedness,
    HandLost,
    Landmark,
    serialize_frame,
)

FPS = 30

# One scripted stream gesture emits the 30-frame trajectory sampled at every
# third index plus two closing hold frames: at triplication factor 3 those
# ten samples rebuild a full 30-entry window, so one gesture spans exactly
# one inference window.
STREAM_SAMPLE_INDICES = tuple(range(0, FRAMES_PER_CAPTURE, 3))
STREAM_HOLD_FRAMES = 2


@dataclass(frozen=True)
class GeneratorConfig:
    """Variation knobs. jitter_sigma is per-coordinate Gaussian noise in
    normalized units; speed_warp is the half-range of the trajectory rate
    factor (0.2 means rates in [0.8, 1.2]); the remaining fields bound the
    per-capture pose offsets."""

    jitter_sigma: float = 0.01
    speed_warp: float = 0.2
    tilt_jitter_deg: float = 5.0
    center_jitter: float = 0.02
    scale_jitter: float = 0.05

    def __post_init__(self):
        for name in ("jitter_sigma", "tilt_jitter_deg", "center_jitter", "scale_jitter"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0.0 <= self.speed_warp < 1.0:
            raise ValueError("speed_warp must lie in [0, 1)")


@dataclass(frozen=True)
class GestureTemplate:
    """Base pose and motion law for one class. motion_amplitude is 0 for
    held poses, the rotation sweep in degrees for "rotate", and the
    fraction of a full fist close for "close_open"."""

    gesture: GestureClass
    curls: tuple[float, float, float, float, float]
    tilt_deg: float = 0.0
    center_offset: tuple[float, float] = (0.0, 0.0)
    motion: str = "static"
    motion_amplitude: float = 0.0


# Finger skeleton: (base angle from straight up in degrees, wrist-to-knuckle
# distance, the three segment lengths, per-joint curl bend in degrees).
_FINGERS = (
    (-65.0, 0.10, (0.07, 0.05, 0.04), 40.0),
    (-18.0, 0.22, (0.08, 0.05, 0.04), 55.0),
    (0.0, 0.23, (0.09, 0.055, 0.045), 55.0),
    (18.0, 0.22, (0.08, 0.05, 0.04), 55.0),
    (35.0, 0.20, (0.06, 0.045, 0.04), 55.0),
)

_DEFAULT_CENTER = (0.5, 0.6)

TEMPLATES: dict[GestureClass, tuple[GestureTemplate, ...]] = {
    GestureClass.AIR_CONDITIONING: (
        GestureTemplate(GestureClass.AIR_CONDITIONING, (0.8, 1.0, 1.0, 1.0, 1.0), tilt_deg=40.0),
    ),
    GestureClass.CURTAINS: (
        GestureTemplate(GestureClass.CURTAINS, (0.5, 0.5, 0.5, 0.5, 0.5), tilt_deg=-45.0),
    ),
    GestureClass.WINDOWS: (
        GestureTemplate(
            GestureClass.WINDOWS,
            (0.9, 1.0, 1.0, 1.0, 0.05),
            tilt_deg=10.0,
            motion="rotate",
            motion_amplitude=-70.0,
        ),
    ),
    GestureClass.LIGHTS: (
        GestureTemplate(GestureClass.LIGHTS, (0.05, 0.05, 1.0, 1.0, 1.0)),
    ),
    GestureClass.TOGGLE: (
        GestureTemplate(
            GestureClass.TOGGLE,
            (0.05, 0.05, 0.05, 0.05, 0.05),
            tilt_deg=-60.0,
            motion="close_open",
            motion_amplitude=1.0,
        ),
    ),
    GestureClass.INCREASE_INTENSITY: (
        GestureTemplate(
            GestureClass.INCREASE_INTENSITY, (1.0, 0.05, 0.05, 1.0, 1.0), tilt_deg=-25.0
        ),
    ),
    GestureClass.DECREASE_INTENSITY: (
        GestureTemplate(
            GestureClass.DECREASE_INTENSITY, (1.0, 0.05, 0.05, 1.0, 1.0), tilt_deg=140.0
        ),
    ),
    GestureClass.COLOR_BLUE: (
        GestureTemplate(GestureClass.COLOR_BLUE, (0.0, 1.0, 1.0, 1.0, 1.0), tilt_deg=-20.0),
    ),
    GestureClass.COLOR_RED: (
        GestureTemplate(
            GestureClass.COLOR_RED, (0.05, 1.0, 1.0, 1.0, 0.05), tilt_deg=25.0
        ),
    ),
    GestureClass.COLOR_WHITE: (
        GestureTemplate(GestureClass.COLOR_WHITE, (1.0, 0.05, 0.05, 0.05, 1.0)),
    ),
    GestureClass.NEUTRAL: (
        GestureTemplate(
            GestureClass.NEUTRAL, (0.55, 0.4, 0.45, 0.5, 0.45), tilt_deg=8.0,
            center_offset=(0.0, 0.1),
        ),
        GestureTemplate(
            GestureClass.NEUTRAL, (0.6, 0.45, 0.5, 0.45, 0.4), tilt_deg=1.0,
            center_offset=(-0.02, 0.12),
        ),
        GestureTemplate(
            GestureClass.NEUTRAL, (0.5, 0.35, 0.4, 0.5, 0.5), tilt_deg=14.0,
            center_offset=(0.02, 0.1),
        ),
    ),
}


def hand_pose(
    curls: Sequence[float],
    *,
    tilt_deg: float = 0.0,
    center: tuple[float, float] = _DEFAULT_CENTER,
    scale: float = 1.0,
) -> np.ndarray:
    """The 21 keypoints (wrist then four joints per finger) for one pose,
    as a (21, 3) float array in normalized image coordinates."""
    pts = np.zeros((21, 3))
    cx, cy = center
    pts[0] = (cx, cy, 0.0)
    for f, (base_angle, knuckle, segments, bend) in enumerate(_FINGERS):
        curl = float(curls[f])
        angle = math.radians(base_angle)
        x = cx + math.sin(angle) * knuckle * scale
        y = cy - math.cos(angle) * knuckle * scale
        idx = 1 + 4 * f
        pts[idx] = (x, y, -0.015 * scale)
        for k, seg in enumerate(segments):
            angle += math.radians(bend) * curl
            x += math.sin(angle) * seg * scale
            y -= math.cos(angle) * seg * scale
            z = -(0.015 + 0.012 * (k + 1) + 0.04 * curl * (k + 1) / 3) * scale
            pts[idx + 1 + k] = (x, y, z)
    if tilt_deg:
        rot = math.radians(tilt_deg)
        c, s = math.cos(rot), math.sin(rot)
        rel = pts[:, :2] - (cx, cy)
        pts[:, 0] = cx + rel[:, 0] * c - rel[:, 1] * s
        pts[:, 1] = cy + rel[:, 0] * s + rel[:, 1] * c
    return pts


def _pose_at(
    template: GestureTemplate,
    phase: float,
    *,
    tilt_offset: float,
    center: tuple[float, float],
    scale: float,
) -> np.ndarray:
    tilt = template.tilt_deg + tilt_offset
    center = (center[0] + template.center_offset[0], center[1] + template.center_offset[1])
    if template.motion == "static":
        curls = template.curls
    elif template.motion == "close_open":
        w = 0.5 * (1.0 - math.cos(2.0 * math.pi * phase)) * template.motion_amplitude
        curls = tuple(c + (0.95 - c) * w for c in template.curls)
    elif template.motion == "rotate":
        curls = template.curls
        tilt += template.motion_amplitude * phase
    else:
        raise ValueError(f"unknown motion kind {template.motion!r}")
    return hand_pose(curls, tilt_deg=tilt, center=center, scale=scale)


def trajectory(
    template: GestureTemplate,
    *,
    rate: float = 1.0,
    tilt_offset: float = 0.0,
    center: tuple[float, float] = _DEFAULT_CENTER,
    scale: float = 1.0,
    indices: Sequence[int] = tuple(range(FRAMES_PER_CAPTURE)),
) -> np.ndarray:
    """Poses at the requested frame indices of the 30-frame timeline, shaped
    (len(indices), 21, 3). The phase at index i is min(1, rate * i / 29):
    rates above 1 finish the motion early and hold, rates below 1 leave it
    unfinished at frame 29."""
    frames = np.empty((len(indices), 21, 3))
    for row, i in enumerate(indices):
        phase = min(1.0, rate * i / (FRAMES_PER_CAPTURE - 1))
        frames[row] = _pose_at(
            template, phase, tilt_offset=tilt_offset, center=center, scale=scale
        )
    return frames


def canonical_trajectory(gesture: GestureClass) -> np.ndarray:
    """The variation-free 30-frame trajectory of a class (first template)."""
    return trajectory(TEMPLATES[gesture][0])


def frame_timestamp_ms(index: int) -> int:
    """Timestamp of frame `index` on the nominal 30 fps grid."""
    return round(index * 1000 / FPS)


def _draw_variation(rng: np.random.Generator, config: GeneratorConfig):
    rate = 1.0 + rng.uniform(-config.speed_warp, config.speed_warp)
    tilt_offset = rng.uniform(-config.tilt_jitter_deg, config.tilt_jitter_deg)
    center = (
        _DEFAULT_CENTER[0] + rng.uniform(-config.center_jitter, config.center_jitter),
        _DEFAULT_CENTER[1] + rng.uniform(-config.center_jitter, config.center_jitter),
    )
    scale = 1.0 + rng.uniform(-config.scale_jitter, config.scale_jitter)
    return rate, tilt_offset, center, scale


def _frames_from_arrays(
    coords: np.ndarray,
    rng: np.random.Generator,
    config: GeneratorConfig,
    timestamps: Sequence[int],
) -> list[HandFrame]:
    noisy = coords + rng.normal(0.0, config.jitter_sigma, coords.shape)
    frames = []
    for row, t in enumerate(timestamps):
        conf = 0.95 + 0.04 * rng.uniform()
        points = tuple(Landmark(*map(float, p)) for p in noisy[row])
        frames.append(HandFrame(int(t), Handedness.RIGHT, float(conf), points))
    return frames


def generate_capture(
    gesture: GestureClass,
    rng: np.random.Generator,
    config: GeneratorConfig = GeneratorConfig(),
) -> Capture:
    """One labeled 30-frame capture with fresh pose variation and jitter."""
    templates = TEMPLATES[gesture]
    template = templates[int(rng.integers(len(templates)))]
    rate, tilt_offset, center, scale = _draw_variation(rng, config)
    coords = trajectory(
        template, rate=rate, tilt_offset=tilt_offset, center=center, scale=scale
    )
    timestamps = [frame_timestamp_ms(i) for i in range(FRAMES_PER_CAPTURE)]
    return Capture(gesture, tuple(_frames_from_arrays(coords, rng, config, timestamps)))


def generate_dataset(
    seed: int,
    captures_per_class: int,
    neutral_multiplier: int = 2,
    config: GeneratorConfig = GeneratorConfig(),
) -> list[Capture]:
    """Labeled captures for all 11 classes, class-major in class order.

    Neutral receives neutral_multiplier x captures_per_class samples drawn
    from its relaxed pose variants; every other class gets
    captures_per_class. Deterministic given (seed, parameters).
    """
    if captures_per_class < 1:
        raise ValueError("captures_per_class must be >= 1")
    if neutral_multiplier < 1:
        raise ValueError("neutral_multiplier must be >= 1")
    rng = np.random.default_rng(seed)
    captures = []
    for gesture in GestureClass:
        count = captures_per_class * (
            neutral_multiplier if gesture is GestureClass.NEUTRAL else 1
        )
        for _ in range(count):
            captures.append(generate_capture(gesture, rng, config))
    return captures


ScriptItem = Union[GestureClass, HandLost, str, int]


def generate_stream(
    seed: int,
    script: Iterable[ScriptItem],
    config: GeneratorConfig = GeneratorConfig(),
) -> list[str]:
    """Render a script into NDJSON stream lines on a 30 fps timeline.

    Script items: a GestureClass emits that gesture (ten trajectory samples
    plus two hold frames, so a triplication-3 window sees the whole motion);
    a HandLost marker (or the string "hand_lost") emits the hand-lost line;
    an integer advances the clock by that many idle milliseconds, rounded
    to whole frames. Timestamps are strictly increasing across the stream.
    """
    script = list(script)
    if not script:
        raise ValueError("script is empty")
    rng = np.random.default_rng(seed)
    lines: list[str] = []
    clock = 0  # virtual frame counter on the 30 fps grid
    for item in script:
        if isinstance(item, GestureClass):
            templates = TEMPLATES[item]
            template = templates[int(rng.integers(len(templates)))]
            rate, tilt_offset, center, scale = _draw_variation(rng, config)
            indices = list(STREAM_SAMPLE_INDICES) + [FRAMES_PER_CAPTURE - 1] * STREAM_HOLD_FRAMES
            coords = trajectory(
                template, rate=rate, tilt_offset=tilt_offset, center=center, scale=scale,
                indices=indices,
            )
            timestamps = [frame_timestamp_ms(clock + k) for k in range(len(indices))]
            clock += len(indices)
            for frame in _frames_from_arrays(coords, rng, config, timestamps):
                lines.append(serialize_frame(frame))
        elif isinstance(item, HandLost) or item == "hand_lost":
            lines.append(HAND_LOST_LINE)
        elif isinstance(item, int) and not isinstance(item, bool):
            if item < 0:
                raise ValueError("idle milliseconds must be >= 0")
            clock += round(item * FPS / 1000)
        else:
            raise ValueError(f"unknown script item {item!r}")
    return lines
