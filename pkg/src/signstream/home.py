"""Home-automation state machine driven by recognition events.

Gestures 0-3 select the context device; Toggle flips the context device's
power; Increase/Decrease move intensity by a step (default 10, clamped to
[0, 100]) on intensity-capable devices; the color gestures recolor the
lights when they are the context. Anything inapplicable is a rejected
no-op recorded in the action log with a reason, never an exception.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from types import MappingProxyType
from typing import Mapping, Optional

from .landmarks import GestureClass
from .recognizer import RecognitionEvent


class Device(Enum):
    AIR_CONDITIONING = "air_conditioning"
    CURTAINS = "curtains"
    WINDOWS = "windows"
    LIGHTS = "lights"


class LightColor(Enum):
    WHITE = "white"
    BLUE = "blue"
    RED = "red"


CONTEXT_GESTURES: Mapping[GestureClass, Device] = MappingProxyType(
    {
        GestureClass.AIR_CONDITIONING: Device.AIR_CONDITIONING,
        GestureClass.CURTAINS: Device.CURTAINS,
        GestureClass.WINDOWS: Device.WINDOWS,
        GestureClass.LIGHTS: Device.LIGHTS,
    }
)

COLOR_GESTURES: Mapping[GestureClass, LightColor] = MappingProxyType(
    {
        GestureClass.COLOR_WHITE: LightColor.WHITE,
        GestureClass.COLOR_BLUE: LightColor.BLUE,
        GestureClass.COLOR_RED: LightColor.RED,
    }
)

# Only these devices carry an intensity setting; curtains and windows are
# power-only (open/close modeled as power).
INTENSITY_DEVICES = frozenset({Device.AIR_CONDITIONING, Device.LIGHTS})

DEFAULT_INTENSITY = 50
DEFAULT_INTENSITY_STEP = 10


@dataclass(frozen=True)
class DeviceState:
    power: bool = False
    intensity: Optional[int] = None
    color: Optional[LightColor] = None

    def __post_init__(self):
        if self.intensity is not None and not 0 <= self.intensity <= 100:
            raise ValueError(f"intensity must lie in [0, 100], got {self.intensity}")


@dataclass(frozen=True)
class HomeState:
    context: Optional[Device]
    devices: Mapping[Device, DeviceState]

    def __post_init__(self):
        devices = dict(self.devices)
        if set(devices) != set(Device):
            raise ValueError("state must cover every device exactly once")
        for dev, st in devices.items():
            if st.color is not None and dev is not Device.LIGHTS:
                raise ValueError(f"{dev.value} cannot carry a color")
        object.__setattr__(self, "devices", MappingProxyType(devices))

    @classmethod
    def initial(cls) -> "HomeState":
        """Everything off; intensity-capable devices at 50, lights white."""
        return cls(
            context=None,
            devices={
                Device.AIR_CONDITIONING: DeviceState(intensity=DEFAULT_INTENSITY),
                Device.CURTAINS: DeviceState(),
                Device.WINDOWS: DeviceState(),
                Device.LIGHTS: DeviceState(
                    intensity=DEFAULT_INTENSITY, color=LightColor.WHITE
                ),
            },
        )

    def with_device(self, device: Device, state: DeviceState) -> "HomeState":
        devices = dict(self.devices)
        devices[device] = state
        return HomeState(self.context, devices)

    def snapshot(self) -> dict:
        """JSON-ready snapshot with stable field names and ordering."""
        out: dict = {"context": None if self.context is None else self.context.value}
        devices = {}
        for dev in Device:
            st = self.devices[dev]
            entry: dict = {"power": "on" if st.power else "off"}
            if st.intensity is not None:
                entry["intensity"] = st.intensity
            if st.color is not None:
                entry["color"] = st.color.value
            devices[dev.value] = entry
        out["devices"] = devices
        return out


@dataclass(frozen=True)
class ActionLogEntry:
    timestamp_ms: int
    gesture: GestureClass
    accepted: bool
    delta: Mapping[str, object]
    reason: Optional[str] = None

    def to_json(self) -> str:
        obj = {
            "t": self.timestamp_ms,
            "gesture": self.gesture.wire_name,
            "accepted": self.accepted,
            "delta": dict(self.delta),
        }
        if self.reason is not None:
            obj["reason"] = self.reason
        return json.dumps(obj, separators=(",", ":"))


def apply(
    state: HomeState,
    event: RecognitionEvent,
    *,
    intensity_step: int = DEFAULT_INTENSITY_STEP,
) -> tuple[HomeState, ActionLogEntry]:
    """Apply one recognition event; returns the next state and a log entry.

    Pure function: inapplicable events leave the state unchanged and come
    back as rejected entries with a reason.
    """
    gesture = event.gesture
    if gesture is GestureClass.NEUTRAL:
        raise ValueError("neutral carries no command; filter it upstream")
    t = event.window_end_timestamp_ms

    def accept(new_state: HomeState, delta: dict) -> tuple[HomeState, ActionLogEntry]:
        return new_state, ActionLogEntry(t, gesture, True, MappingProxyType(delta))

    def reject(reason: str) -> tuple[HomeState, ActionLogEntry]:
        return state, ActionLogEntry(t, gesture, False, MappingProxyType({}), reason)

    if gesture in CONTEXT_GESTURES:
        device = CONTEXT_GESTURES[gesture]
        return accept(
            HomeState(device, dict(state.devices)), {"context": device.value}
        )

    if state.context is None:
        return reject("no context selected")
    device = state.context
    current = state.devices[device]

    if gesture is GestureClass.TOGGLE:
        flipped = replace(current, power=not current.power)
        return accept(
            state.with_device(device, flipped),
            {f"{device.value}.power": "on" if flipped.power else "off"},
        )

    if gesture in (GestureClass.INCREASE_INTENSITY, GestureClass.DECREASE_INTENSITY):
        if device not in INTENSITY_DEVICES:
            return reject("intensity not applicable")
        step = intensity_step if gesture is GestureClass.INCREASE_INTENSITY else -intensity_step
        level = min(100, max(0, current.intensity + step))
        return accept(
            state.with_device(device, replace(current, intensity=level)),
            {f"{device.value}.intensity": level},
        )

    if gesture in COLOR_GESTURES:
        if device is not Device.LIGHTS:
            return reject("color not applicable")
        color = COLOR_GESTURES[gesture]
        return accept(
            state.with_device(device, replace(current, color=color)),
            {f"{device.value}.color": color.value},
        )

    raise ValueError(f"unhandled gesture {gesture!r}")


class HomeController:
    """Owns one home's state and its append-only action log."""

    def __init__(self, *, intensity_step: int = DEFAULT_INTENSITY_STEP):
        self.intensity_step = intensity_step
        self.state = HomeState.initial()
        self.log: list[ActionLogEntry] = []

    def handle(self, event: RecognitionEvent) -> ActionLogEntry:
        if self.log and event.window_end_timestamp_ms < self.log[-1].timestamp_ms:
            raise ValueError("events must arrive in timestamp order")
        self.state, entry = apply(self.state, event, intensity_step=self.intensity_step)
        self.log.append(entry)
        return entry
