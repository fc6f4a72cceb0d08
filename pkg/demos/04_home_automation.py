"""The gesture-driven home-automation state machine, step by step.

No model needed here: recognition events go in, device state comes out.
Shows context selection, toggling, intensity steps with clamping, colors,
and the rejections that keep stray gestures from doing damage. Run:

    python3 demos/04_home_automation.py
"""

import json

from signstream import GestureClass, HomeController, RecognitionEvent


def event(gesture: GestureClass, t: int) -> RecognitionEvent:
    return RecognitionEvent(gesture, confidence=0.99, window_end_timestamp_ms=t)


controller = HomeController()
print("initial state:")
print(" ", json.dumps(controller.state.snapshot()))

sequence = [
    GestureClass.LIGHTS,              # select a device first
    GestureClass.TOGGLE,              # lights on
    GestureClass.INCREASE_INTENSITY,  # 50 -> 60
    GestureClass.INCREASE_INTENSITY,  # 60 -> 70
    GestureClass.COLOR_RED,
    GestureClass.CURTAINS,            # switch context
    GestureClass.TOGGLE,              # curtains open
    GestureClass.COLOR_BLUE,          # rejected: curtains have no color
    GestureClass.LIGHTS,
    GestureClass.TOGGLE,              # lights off again
]

print("\ngesture              outcome")
for i, gesture in enumerate(sequence):
    entry = controller.handle(event(gesture, t=1000 * (i + 1)))
    if entry.accepted:
        changes = json.dumps(dict(entry.delta))
        print(f"{gesture.wire_name:20s} applied {changes}")
    else:
        print(f"{gesture.wire_name:20s} rejected ({entry.reason})")

print("\nfinal state:")
print(" ", json.dumps(controller.state.snapshot(), indent=2))

print("\naction log (replayable):")
for entry in controller.log:
    print(" ", entry.to_json())
