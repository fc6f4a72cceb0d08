import json
import math

import pytest
from hypothesis import given, strategies as st

from signstream import (
    CLASS_ORDER,
    FRAMES_PER_CAPTURE,
    HAND_LOST,
    HAND_LOST_LINE,
    Capture,
    CaptureError,
    FrameParseError,
    FrameRangeError,
    FrameSchemaError,
    GestureClass,
    Handedness,
    HandFrame,
    HandLost,
    Landmark,
    load_captures,
    parse_frame,
    parse_stream,
    parse_stream_line,
    read_capture,
    serialize_capture,
    serialize_frame,
    write_capture,
)


def make_frame(t=0, conf=0.95, coord=0.5):
    pts = tuple(Landmark(coord, coord, coord) for _ in range(21))
    return HandFrame(t, Handedness.RIGHT, conf, pts)


def make_capture(label=GestureClass.TOGGLE):
    # Coordinates exact at 6 significant digits so the text trip is lossless.
    frames = tuple(make_frame(t=33 * i, coord=round(0.1 + 0.01 * i, 6)) for i in range(30))
    return Capture(label, frames)


class TestGestureClass:
    def test_class_order_is_frozen(self):
        assert CLASS_ORDER == (
            "air_conditioning",
            "curtains",
            "windows",
            "lights",
            "toggle",
            "increase_intensity",
            "decrease_intensity",
            "color_blue",
            "color_red",
            "color_white",
            "neutral",
        )
        assert [int(GestureClass.from_wire(n)) for n in CLASS_ORDER] == list(range(11))

    def test_wire_name_round_trip(self):
        for cls in GestureClass:
            assert GestureClass.from_wire(cls.wire_name) is cls

    def test_unknown_name_rejected(self):
        with pytest.raises(CaptureError):
            GestureClass.from_wire("wave")


class TestHandFrame:
    def test_point_count_enforced(self):
        pts = tuple(Landmark(0, 0, 0) for _ in range(20))
        with pytest.raises(FrameSchemaError):
            HandFrame(0, Handedness.LEFT, 0.9, pts)

    @pytest.mark.parametrize("conf", [-0.01, 1.01, float("nan")])
    def test_confidence_range(self, conf):
        with pytest.raises(FrameRangeError):
            make_frame(conf=conf)

    def test_timestamp_must_be_nonnegative_int(self):
        with pytest.raises(FrameSchemaError):
            make_frame(t=1.5)
        with pytest.raises(FrameSchemaError):
            make_frame(t=True)
        with pytest.raises(FrameRangeError):
            make_frame(t=-1)

    def test_nonfinite_coordinate_rejected(self):
        with pytest.raises(FrameRangeError):
            Landmark(0.0, math.inf, 0.0)

    def test_frames_are_immutable(self):
        frame = make_frame()
        with pytest.raises(AttributeError):
            frame.timestamp_ms = 5


class TestFrameWireFormat:
    def test_serialized_shape(self):
        line = serialize_frame(make_frame(t=42, conf=0.9375, coord=0.25))
        obj = json.loads(line)
        assert set(obj) == {"t", "hand", "conf", "pts"}
        assert obj["t"] == 42
        assert obj["hand"] == "R"
        assert obj["conf"] == 0.9375
        assert len(obj["pts"]) == 21
        assert obj["pts"][0] == [0.25, 0.25, 0.25]

    def test_coordinates_carry_six_significant_digits(self):
        line = serialize_frame(make_frame(coord=0.123456789))
        assert "0.123457" in line
        assert "0.123456789" not in line

    def test_round_trip_exact(self):
        frame = make_frame(t=1234, conf=0.875, coord=-0.0625)
        assert parse_frame(serialize_frame(frame)) == frame

    @given(
        coords=st.lists(
            st.floats(allow_nan=False, allow_infinity=False), min_size=63, max_size=63
        ),
        t=st.integers(min_value=0, max_value=2**40),
        conf=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_serialize_parse_is_idempotent(self, coords, t, conf):
        pts = tuple(Landmark(*coords[3 * i : 3 * i + 3]) for i in range(21))
        frame = HandFrame(t, Handedness.LEFT, conf, pts)
        line = serialize_frame(frame)
        reparsed = parse_frame(line)
        # One trip may round to 6 significant digits; a second trip must not move.
        assert serialize_frame(reparsed) == line
        for orig, back in zip(frame.points, reparsed.points):
            for a, b in zip((orig.x, orig.y, orig.z), (back.x, back.y, back.z)):
                assert math.isclose(a, b, rel_tol=1e-5, abs_tol=1e-9)

    @pytest.mark.parametrize(
        "line,err",
        [
            ("not json", FrameParseError),
            ("[1,2,3]", FrameSchemaError),
            ('{"hand":"R","conf":0.9,"pts":[]}', FrameSchemaError),
            ('{"t":0.5,"hand":"R","conf":0.9,"pts":[]}', FrameSchemaError),
            ('{"t":0,"hand":"both","conf":0.9,"pts":[]}', FrameSchemaError),
            ('{"t":0,"hand":"R","conf":0.9,"pts":[[0,0,0]]}', FrameSchemaError),
            ('{"t":0,"hand":"R","conf":0.9,"pts":"none"}', FrameSchemaError),
            ('{"t":0,"hand":"R","conf":NaN,"pts":[]}', FrameRangeError),
            ('{"t":-3,"hand":"R","conf":0.9,"pts":[]}', FrameRangeError),
        ],
    )
    def test_malformed_lines_rejected(self, line, err):
        # Pad "pts" out to 21 entries so only the targeted defect triggers.
        obj = None
        try:
            obj = json.loads(line)
        except ValueError:
            pass
        if isinstance(obj, dict) and obj.get("pts") == []:
            obj["pts"] = [[0, 0, 0]] * 21
            line = json.dumps(obj)
        with pytest.raises(err):
            parse_frame(line)

    def test_point_must_be_triple(self):
        obj = {"t": 0, "hand": "R", "conf": 0.9, "pts": [[0, 0, 0]] * 20 + [[0, 0]]}
        with pytest.raises(FrameSchemaError):
            parse_frame(json.dumps(obj))


class TestStreamParsing:
    def test_hand_lost_marker(self):
        assert parse_stream_line(HAND_LOST_LINE) is HAND_LOST
        assert isinstance(parse_stream_line('{"event": "hand_lost"}'), HandLost)

    def test_unknown_event_rejected(self):
        with pytest.raises(FrameSchemaError):
            parse_stream_line('{"event":"hand_found"}')

    def test_blank_lines_skipped(self):
        lines = [
            "",
            serialize_frame(make_frame(t=0)),
            "   ",
            HAND_LOST_LINE,
            serialize_frame(make_frame(t=10)),
            "\t",
        ]
        items = list(parse_stream(lines))
        assert len(items) == 3
        assert isinstance(items[0], HandFrame)
        assert items[1] is HAND_LOST
        assert items[2].timestamp_ms == 10

    def test_equal_timestamps_allowed(self):
        lines = [serialize_frame(make_frame(t=5)), serialize_frame(make_frame(t=5))]
        assert len(list(parse_stream(lines))) == 2

    def test_timestamp_regression_rejected(self):
        lines = [serialize_frame(make_frame(t=10)), serialize_frame(make_frame(t=9))]
        with pytest.raises(FrameRangeError):
            list(parse_stream(lines))

    def test_regression_detected_across_hand_lost(self):
        lines = [
            serialize_frame(make_frame(t=10)),
            HAND_LOST_LINE,
            serialize_frame(make_frame(t=3)),
        ]
        with pytest.raises(FrameRangeError):
            list(parse_stream(lines))


class TestCaptureFormat:
    def test_capture_needs_thirty_frames(self):
        frames = tuple(make_frame(t=i) for i in range(29))
        with pytest.raises(CaptureError):
            Capture(GestureClass.LIGHTS, frames)

    def test_capture_timestamps_must_not_decrease(self):
        frames = tuple(make_frame(t=30 - i) for i in range(30))
        with pytest.raises(CaptureError):
            Capture(GestureClass.LIGHTS, frames)

    def test_serialized_layout(self):
        text = serialize_capture(make_capture())
        lines = text.split("\n")
        assert lines[-1] == ""  # trailing newline
        assert len(lines) == FRAMES_PER_CAPTURE + 2
        assert json.loads(lines[0]) == {"label": "toggle"}

    def test_file_round_trip(self, tmp_path):
        cap = make_capture(GestureClass.COLOR_RED)
        path = tmp_path / "one.capture"
        write_capture(cap, path)
        assert read_capture(path) == cap

    def test_read_errors_carry_path(self, tmp_path):
        path = tmp_path / "bad.capture"
        path.write_text('{"label":"toggle"}\nnot json\n')
        with pytest.raises(CaptureError, match="bad.capture"):
            read_capture(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CaptureError, match="nope.capture"):
            read_capture(tmp_path / "nope.capture")

    def test_wrong_frame_count(self, tmp_path):
        text = serialize_capture(make_capture())
        trimmed = "\n".join(text.split("\n")[:-2]) + "\n"
        path = tmp_path / "short.capture"
        path.write_text(trimmed)
        with pytest.raises(CaptureError, match="29"):
            read_capture(path)

    def test_unknown_label(self, tmp_path):
        text = serialize_capture(make_capture()).replace('"toggle"', '"spin"')
        path = tmp_path / "odd.capture"
        path.write_text(text)
        with pytest.raises(CaptureError, match="spin"):
            read_capture(path)

    def test_load_captures_sorted(self, tmp_path):
        for name, label in [
            ("0002_b.capture", GestureClass.CURTAINS),
            ("0001_a.capture", GestureClass.LIGHTS),
        ]:
            write_capture(make_capture(label), tmp_path / name)
        (tmp_path / "notes.txt").write_text("ignored")
        caps = load_captures(tmp_path)
        assert [c.label for c in caps] == [GestureClass.LIGHTS, GestureClass.CURTAINS]

    def test_load_captures_requires_directory(self, tmp_path):
        with pytest.raises(CaptureError):
            load_captures(tmp_path / "missing")
