"""Continuous recognition over a live-style frame stream.

Replays a synthetic stream (several gestures back to back, with the hand
leaving the scene in between) through the sliding-window recognizer and
prints every recognition event. Uses the weights saved by demo 02, or
trains a quick model if they are missing. Run from the repository root:

    python3 demos/03_streaming_recognition.py
"""

from pathlib import Path

from signstream import (
    GestureClass,
    GestureNet,
    HandLost,
    RecognizerConfig,
    StreamRecognizer,
    TrainConfig,
    encode_dataset,
    generate_dataset,
    generate_stream,
    load_weights,
    parse_stream,
    train,
)

weights = Path("demo_out/demo.gstr")
if weights.exists():
    model = load_weights(weights)
    print(f"loaded trained weights from {weights}")
else:
    print("no demo_out/demo.gstr yet; training a quick model (about a minute)")
    data = encode_dataset(generate_dataset(seed=7, captures_per_class=6))
    model, _ = train(GestureNet(seed=7), data, None, TrainConfig(learning_rate=1e-4, epochs=80, seed=7))

# One gesture, hand away, the next gesture: the kind of stream a capture
# client would send. Plain ints are idle gaps in milliseconds.
script = [
    GestureClass.LIGHTS, "hand_lost",
    GestureClass.TOGGLE, "hand_lost", 500,
    GestureClass.INCREASE_INTENSITY, "hand_lost",
    GestureClass.NEUTRAL, "hand_lost",
    GestureClass.TOGGLE, "hand_lost",
]
lines = generate_stream(seed=3, script=script)
print(f"\nreplaying a {len(lines)}-line stream: "
      "lights, toggle, brighten, a neutral pose, toggle again\n")

# Each incoming frame enters the 30-slot window 3 times, so the window spans
# roughly 10 real frames and consecutive inferences overlap in 27 slots.
recognizer = StreamRecognizer(model, RecognizerConfig())
frames = events = 0
for item in parse_stream(lines):
    if isinstance(item, HandLost):
        recognizer.hand_lost()
        continue
    frames += 1
    event = recognizer.push_frame(item)
    if event is not None:
        events += 1
        print(f"t={event.window_end_timestamp_ms:5d} ms  "
              f"{event.gesture.wire_name:20s}  confidence {event.confidence:.3f}")

print(f"\n{frames} frames in, {events} events out")
print("the neutral pose was classified but suppressed: it is not a command")
