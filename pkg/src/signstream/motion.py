"""Spatiotemporal motion matrices.

A gesture's 30 frames of 21 keypoints become one 90x21 float matrix: rows
0-29 hold the x coordinates of frames 0-29 (one frame per row, one keypoint
per column), rows 30-59 hold y, rows 60-89 hold z. The matrix is then
min-max normalized over all entries at once to [0, 255], which strips the
hand's absolute position and scale while keeping relative motion.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .landmarks import FRAMES_PER_CAPTURE, POINTS_PER_HAND, Capture, HandFrame

MATRIX_ROWS = 3 * FRAMES_PER_CAPTURE  # 90
MATRIX_COLS = POINTS_PER_HAND  # 21
MATRIX_SHAPE = (MATRIX_ROWS, MATRIX_COLS)

NORM_MAX = 255.0


def frames_to_matrix(frames: Sequence[HandFrame]) -> np.ndarray:
    """Stack 30 frames into the raw (unnormalized) 90x21 matrix, float64."""
    if len(frames) != FRAMES_PER_CAPTURE:
        raise ValueError(
            f"need exactly {FRAMES_PER_CAPTURE} frames, got {len(frames)}"
        )
    out = np.empty(MATRIX_SHAPE, dtype=np.float64)
    for i, frame in enumerate(frames):
        for j, p in enumerate(frame.points):
            out[i, j] = p.x
            out[FRAMES_PER_CAPTURE + i, j] = p.y
            out[2 * FRAMES_PER_CAPTURE + i, j] = p.z
    return out


def normalize(matrix: np.ndarray) -> np.ndarray:
    """Min-max normalize all entries jointly to [0, 255].

    The minimum entry maps to exactly 0 and the maximum to exactly 255.
    A constant matrix (max == min) maps to all zeros.
    """
    m = np.asarray(matrix, dtype=np.float64)
    lo = m.min()
    hi = m.max()
    if hi == lo:
        return np.zeros_like(m)
    return (m - lo) / (hi - lo) * NORM_MAX


def encode(capture_or_frames) -> np.ndarray:
    """Full pipeline: frames (or a Capture) to the normalized 90x21 matrix."""
    frames = (
        capture_or_frames.frames
        if isinstance(capture_or_frames, Capture)
        else capture_or_frames
    )
    return normalize(frames_to_matrix(frames))


def encode_dataset(captures) -> list:
    """Encode labeled captures into (matrix, class index) training pairs."""
    return [(encode(c), int(c.label)) for c in captures]


def to_pgm(matrix: np.ndarray) -> bytes:
    """Encode a normalized matrix as a binary PGM (P5) image, 21 wide, 90 tall.

    Entries are rounded half-up to the nearest integer gray level.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.shape != MATRIX_SHAPE:
        raise ValueError(f"expected shape {MATRIX_SHAPE}, got {m.shape}")
    if m.min() < 0.0 or m.max() > NORM_MAX:
        raise ValueError("matrix must be normalized to [0, 255] before PGM export")
    gray = np.floor(m + 0.5).astype(np.uint8)
    header = f"P5\n{MATRIX_COLS} {MATRIX_ROWS}\n255\n".encode("ascii")
    return header + gray.tobytes()


def write_pgm(matrix: np.ndarray, path) -> None:
    from pathlib import Path

    Path(path).write_bytes(to_pgm(matrix))
