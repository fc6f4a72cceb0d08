"""Sliding-window streaming recognition.

Each arriving frame is inserted ``triplication_n`` times into a 30-entry
window buffer (oldest entries are evicted first so the length never exceeds
30), which makes the window span roughly 10 real frames at the default n=3
and lets one model trained on 30-frame captures run on a live stream.
Whenever an insertion fills the buffer to exactly 30 entries the window is
encoded and classified; a prediction at or above the confidence threshold
emits a RecognitionEvent and clears the whole buffer, anything weaker keeps
the buffer sliding. Losing the hand clears the buffer immediately.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .landmarks import FRAMES_PER_CAPTURE, GestureClass, HandFrame, HandLost, StreamItem
from .motion import encode

WINDOW_SIZE = FRAMES_PER_CAPTURE  # 30 entries


@dataclass(frozen=True)
class RecognizerConfig:
    confidence_threshold: float = 0.98
    triplication_n: int = 3
    suppress_neutral_events: bool = True

    def __post_init__(self):
        if not 0.0 < self.confidence_threshold <= 1.0:
            raise ValueError("confidence threshold must lie in (0, 1]")
        if not 1 <= self.triplication_n <= WINDOW_SIZE:
            raise ValueError(f"triplication factor must lie in [1, {WINDOW_SIZE}]")


@dataclass(frozen=True)
class RecognitionEvent:
    gesture: GestureClass
    confidence: float
    window_end_timestamp_ms: int


class StreamRecognizer:
    """Stateful per-stream recognizer. Not safe for concurrent mutation;
    the model it holds is only read."""

    def __init__(self, model, config: RecognizerConfig = RecognizerConfig()):
        self.model = model
        self.config = config
        self._entries: list[HandFrame] = []

    @property
    def buffer_len(self) -> int:
        return len(self._entries)

    @property
    def window(self) -> tuple[HandFrame, ...]:
        """Snapshot of the current buffer contents, oldest first."""
        return tuple(self._entries)

    def hand_lost(self) -> None:
        self._entries.clear()

    def push_frame(self, frame: HandFrame) -> Optional[RecognitionEvent]:
        n = self.config.triplication_n
        self._entries.extend([frame] * n)
        surplus = len(self._entries) - WINDOW_SIZE
        if surplus > 0:
            del self._entries[:surplus]
        if len(self._entries) < WINDOW_SIZE:
            return None

        probs = self.model.predict_proba(encode(self._entries))
        gesture = GestureClass(int(probs.argmax()))
        confidence = float(probs[gesture])
        if confidence < self.config.confidence_threshold:
            return None
        if gesture is GestureClass.NEUTRAL and self.config.suppress_neutral_events:
            return None
        self._entries.clear()
        return RecognitionEvent(gesture, confidence, frame.timestamp_ms)


def run_stream(
    source: Iterable[StreamItem],
    model,
    config: RecognizerConfig = RecognizerConfig(),
) -> list[RecognitionEvent]:
    """Fold a stream of frames and hand-lost markers through a fresh
    recognizer; pure function of (source, model, config)."""
    recognizer = StreamRecognizer(model, config)
    events = []
    for item in source:
        if isinstance(item, HandLost):
            recognizer.hand_lost()
        else:
            event = recognizer.push_frame(item)
            if event is not None:
                events.append(event)
    return events
