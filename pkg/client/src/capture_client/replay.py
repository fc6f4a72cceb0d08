"""Replaying a recorded stream file against a live recognizer server."""

from __future__ import annotations

import socket
import threading
import time
from pathlib import Path
from typing import Iterable, Optional

# The server accepts one session at a time; a second connection is told so
# and closed. Shortly after a disconnect the old session may still count as
# live, so a busy answer is worth retrying.
SERVER_BUSY_LINE = '{"error":"busy"}'


class _BusySession(Exception):
    pass


def _attempt(lines, host, port, timeout, pace_s) -> list[str]:
    responses: list[str] = []
    with socket.create_connection((host, port), timeout=timeout) as conn:
        reader_file = conn.makefile("rb")

        def drain():
            for raw in reader_file:
                responses.append(raw.decode("utf-8").rstrip("\n"))

        reader = threading.Thread(target=drain, daemon=True)
        reader.start()
        try:
            for line in lines:
                conn.sendall(line.encode("utf-8") + b"\n")
                if pace_s:
                    time.sleep(pace_s)
            conn.shutdown(socket.SHUT_WR)
        except OSError:
            # the server may have rejected the session and hung up mid-send
            reader.join(timeout)
            if responses[:1] == [SERVER_BUSY_LINE]:
                raise _BusySession() from None
            raise
        reader.join(timeout)
        if reader.is_alive():
            raise TimeoutError("server did not close the session in time")
    if responses[:1] == [SERVER_BUSY_LINE]:
        raise _BusySession()
    return responses


def replay_lines(
    lines: Iterable[str],
    host: str,
    port: int,
    *,
    timeout: float = 10.0,
    pace_s: Optional[float] = None,
    busy_retries: int = 40,
) -> list[str]:
    """Send stream lines to the server; return every response line.

    The server talks first (the current home state on connect) and answers
    recognitions as they happen, so responses are read on a side thread
    while we send. After the last line the write side is closed and the
    remaining responses are drained until the server hangs up. Busy
    answers are retried with a short pause.
    """
    source = [line.strip() for line in lines]
    source = [line for line in source if line]
    for _ in range(busy_retries):
        try:
            return _attempt(source, host, port, timeout, pace_s)
        except _BusySession:
            time.sleep(0.05)
    raise TimeoutError(f"server at {host}:{port} stayed busy")


def replay_file(path, host: str, port: int, **kwargs) -> list[str]:
    """replay_lines over the contents of a stream file."""
    text = Path(path).read_text(encoding="utf-8")
    return replay_lines(text.splitlines(), host, port, **kwargs)
