"""Live webcam capture via MediaPipe hand tracking.

These entry points need the optional camera extra (mediapipe and
opencv-python); imports happen lazily so the rest of the package works in
camera-less environments, such as the test suite and file replays.
"""

from __future__ import annotations

import socket
import sys
import time
from typing import Iterator, Optional

from .emitter import Detection, WireEmitter
from .recorder import CaptureRecorder


def _load_camera_stack():
    try:
        import cv2
        import mediapipe as mp
    except ImportError as exc:
        raise RuntimeError(
            "live capture needs the camera extra: pip install 'capture-client[camera]'"
        ) from exc
    return cv2, mp


def detections(camera_index: int = 0, mirror: bool = True) -> Iterator[tuple[Optional[Detection], int]]:
    """Yield (detection or None, timestamp_ms) per camera frame until 'q'.

    Timestamps count milliseconds from the first frame. The preview window
    shows the camera image; it is skipped when no display is available.
    """
    cv2, mp = _load_camera_stack()
    capture = cv2.VideoCapture(camera_index)
    if not capture.isOpened():
        raise RuntimeError(f"cannot open camera {camera_index}")
    hands = mp.solutions.hands.Hands(
        max_num_hands=1,
        min_detection_confidence=0.5,
        min_tracking_confidence=0.5,
    )
    started = time.monotonic()
    show = True
    try:
        while True:
            ok, frame = capture.read()
            if not ok:
                return
            if mirror:
                frame = cv2.flip(frame, 1)
            t_ms = int((time.monotonic() - started) * 1000)
            result = hands.process(cv2.cvtColor(frame, cv2.COLOR_BGR2RGB))

            detection = None
            if result.multi_hand_landmarks:
                landmarks = result.multi_hand_landmarks[0]
                handed = result.multi_handedness[0].classification[0]
                detection = Detection(
                    hand="L" if handed.label.startswith("L") else "R",
                    conf=min(max(float(handed.score), 0.0), 1.0),
                    pts=[(p.x, p.y, p.z) for p in landmarks.landmark],
                )
                mp.solutions.drawing_utils.draw_landmarks(
                    frame, landmarks, mp.solutions.hands.HAND_CONNECTIONS
                )

            if show:
                try:
                    cv2.imshow("capture-client (q quits)", frame)
                    if cv2.waitKey(1) & 0xFF == ord("q"):
                        return
                except cv2.error:
                    show = False  # headless OpenCV build: keep capturing
            yield detection, t_ms
    finally:
        hands.close()
        capture.release()
        if show:
            cv2.destroyAllWindows()


def live(host: str, port: int, camera_index: int = 0) -> int:
    """Stream webcam landmarks to a recognizer server; print its responses."""
    with socket.create_connection((host, port), timeout=10.0) as conn:
        conn.settimeout(0.0)  # poll for responses between frames
        emitter = WireEmitter(lambda line: conn.sendall(line.encode("utf-8") + b"\n"))
        for detection, t_ms in detections(camera_index):
            emitter.push(detection, t_ms)
            try:
                data = conn.recv(65536)
                if not data:
                    break
                sys.stdout.write(data.decode("utf-8"))
                sys.stdout.flush()
            except BlockingIOError:
                pass
    print(f"\nsent {emitter.frames_sent} frames, {emitter.losses_sent} hand-lost markers")
    return 0


def record(out_path: str, label: str, camera_index: int = 0) -> int:
    """Record one 30-frame labeled capture from the webcam."""
    recorder = CaptureRecorder(label)
    print(f"recording {label!r}: hold the gesture in view", file=sys.stderr)
    for detection, t_ms in detections(camera_index):
        if detection is None:
            continue
        recorder.add(detection, t_ms)
        print(f"\rframes: {recorder.count}/30", end="", file=sys.stderr)
        if recorder.full:
            break
    print(file=sys.stderr)
    if not recorder.full:
        print("camera closed before 30 frames were captured", file=sys.stderr)
        return 1
    recorder.save(out_path)
    print(f"wrote {out_path}", file=sys.stderr)
    return 0
