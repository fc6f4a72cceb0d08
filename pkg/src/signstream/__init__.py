"""Streaming hand-gesture recognition over 21-keypoint landmark streams.

The pipeline: landmark frames arrive as NDJSON (landmarks), 30-frame
windows become 90x21 normalized motion matrices (motion), a from-scratch
numpy CNN classifies them (cnn), a sliding-window recognizer turns a live
stream into recognition events (recognizer), and a state machine maps the
events onto home-automation devices (home). synth generates deterministic
labeled data, server exposes a single-session TCP loop, and cli ties the
workflows together.
"""

from .landmarks import (
    CLASS_ORDER,
    FRAMES_PER_CAPTURE,
    HAND_LOST,
    HAND_LOST_LINE,
    NUM_CLASSES,
    POINTS_PER_HAND,
    Capture,
    CaptureError,
    FrameParseError,
    FrameRangeError,
    FrameSchemaError,
    GestureClass,
    HandFrame,
    Handedness,
    HandLost,
    Landmark,
    WireFormatError,
    load_captures,
    parse_frame,
    parse_stream,
    parse_stream_line,
    read_capture,
    serialize_capture,
    serialize_frame,
    write_capture,
)
from .motion import (
    MATRIX_SHAPE,
    encode,
    encode_dataset,
    frames_to_matrix,
    normalize,
    to_pgm,
    write_pgm,
)
from .cnn import (
    Architecture,
    ConvSpec,
    DEFAULT_ARCHITECTURE,
    GestureNet,
    TrainConfig,
    TrainReport,
    TrainingDivergedError,
    evaluate,
    load_weights,
    save_weights,
    train,
)
from .recognizer import (
    RecognitionEvent,
    RecognizerConfig,
    StreamRecognizer,
    WINDOW_SIZE,
    run_stream,
)
from .home import (
    Device,
    DeviceState,
    HomeController,
    HomeState,
    LightColor,
    apply,
)
from .synth import GeneratorConfig, GestureTemplate, generate_capture, generate_dataset, generate_stream
from .server import GestureServer, event_line, state_line

__version__ = "0.1.0"
