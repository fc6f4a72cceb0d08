"""Single-session TCP serving loop.

Protocol: newline-delimited JSON over TCP, UTF-8, LF line endings. The
client sends frame records and hand-lost markers; the server answers with
one state snapshot line on connect, then an event line followed by a state
line after every recognition, and an error line for every malformed or
out-of-order input line (the connection survives those). One client at a
time: while a session is active, later connections get a busy error and are
closed. Every reply is a pure function of the received lines, so replaying
the same stream yields byte-identical output.
"""

from __future__ import annotations

import json
import selectors
import socket
import threading
from typing import Optional

from .home import HomeController, HomeState
from .landmarks import HandFrame, HandLost, WireFormatError, parse_stream_line
from .recognizer import RecognitionEvent, RecognizerConfig, StreamRecognizer

BUSY_LINE = '{"error":"busy"}'


def event_line(event: RecognitionEvent) -> str:
    """One recognition as an NDJSON line (no trailing newline)."""
    return json.dumps(
        {
            "event": {
                "gesture": event.gesture.wire_name,
                "confidence": event.confidence,
                "t": event.window_end_timestamp_ms,
            }
        },
        separators=(",", ":"),
    )


def state_line(state: HomeState) -> str:
    """One home-state snapshot as an NDJSON line (no trailing newline)."""
    return json.dumps({"state": state.snapshot()}, separators=(",", ":"))


def error_line(message: str) -> str:
    return json.dumps({"error": message}, separators=(",", ":"))


class _Session:
    """One connected client: its socket, receive buffer, and a fresh
    recognizer plus home controller."""

    def __init__(self, sock: socket.socket, model, config: RecognizerConfig, step: int):
        self.sock = sock
        self.buffer = bytearray()
        self.recognizer = StreamRecognizer(model, config)
        self.controller = HomeController(intensity_step=step)
        self.last_t: Optional[int] = None


class GestureServer:
    """Owns the listening socket; serve_forever runs the session loop."""

    def __init__(
        self,
        model,
        host: str = "127.0.0.1",
        port: int = 0,
        *,
        recognizer_config: RecognizerConfig = RecognizerConfig(),
        intensity_step: int = 10,
    ):
        self.model = model
        self.config = recognizer_config
        self.intensity_step = intensity_step
        self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            self._listener.bind((host, port))
        except OSError:
            self._listener.close()
            raise
        self._listener.listen(5)
        self._listener.setblocking(False)
        self.address: tuple[str, int] = self._listener.getsockname()[:2]

    def close(self) -> None:
        self._listener.close()

    def serve_forever(
        self, stop: Optional[threading.Event] = None, poll_interval: float = 0.2
    ) -> None:
        """Accept and serve sessions until `stop` is set; then close up."""
        sel = selectors.DefaultSelector()
        sel.register(self._listener, selectors.EVENT_READ)
        session: Optional[_Session] = None
        try:
            while stop is None or not stop.is_set():
                for key, _ in sel.select(poll_interval):
                    if key.fileobj is self._listener:
                        conn, _addr = self._listener.accept()
                        if session is not None:
                            self._send(conn, BUSY_LINE)
                            conn.close()
                            continue
                        conn.setblocking(False)
                        session = _Session(conn, self.model, self.config, self.intensity_step)
                        sel.register(conn, selectors.EVENT_READ)
                        if not self._send(conn, state_line(session.controller.state)):
                            session = self._drop(sel, session)
                    else:
                        session = self._read(sel, session)
        finally:
            if session is not None:
                self._drop(sel, session)
            sel.unregister(self._listener)
            sel.close()
            self._listener.close()

    # -- internals ---------------------------------------------------------

    def _drop(self, sel, session: _Session) -> None:
        sel.unregister(session.sock)
        session.sock.close()
        return None

    def _send(self, sock: socket.socket, line: str) -> bool:
        try:
            sock.sendall(line.encode("utf-8") + b"\n")
            return True
        except OSError:
            return False

    def _read(self, sel, session: _Session) -> Optional[_Session]:
        try:
            data = session.sock.recv(65536)
        except BlockingIOError:
            return session
        except OSError:
            return self._drop(sel, session)
        if not data:
            return self._drop(sel, session)
        session.buffer += data
        while True:
            nl = session.buffer.find(b"\n")
            if nl < 0:
                break
            raw = bytes(session.buffer[:nl])
            del session.buffer[: nl + 1]
            if not self._handle_line(session, raw):
                return self._drop(sel, session)
        return session

    def _handle_line(self, session: _Session, raw: bytes) -> bool:
        """Process one input line; False means the client is unreachable."""
        text = raw.decode("utf-8", errors="replace").rstrip("\r")
        if not text.strip():
            return True
        try:
            item = parse_stream_line(text)
        except WireFormatError as exc:
            return self._send(session.sock, error_line(str(exc)))

        if isinstance(item, HandLost):
            session.recognizer.hand_lost()
            return True

        assert isinstance(item, HandFrame)
        if session.last_t is not None and item.timestamp_ms < session.last_t:
            return self._send(
                session.sock,
                error_line(
                    f"timestamps must be non-decreasing "
                    f"({item.timestamp_ms} after {session.last_t})"
                ),
            )
        session.last_t = item.timestamp_ms
        event = session.recognizer.push_frame(item)
        if event is None:
            return True
        session.controller.handle(event)
        ok = self._send(session.sock, event_line(event))
        return ok and self._send(session.sock, state_line(session.controller.state))
