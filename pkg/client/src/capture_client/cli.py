"""capture-client command line.

    capture-client replay --file walk.stream --host 127.0.0.1 --port 9331
    capture-client live --host 127.0.0.1 --port 9331
    capture-client record --out toggle.capture --label toggle

replay works anywhere; live and record need a webcam and the camera extra.
"""

from __future__ import annotations

import argparse
import sys


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="capture-client", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    p = subs.add_parser("replay", help="send a recorded stream file to a server")
    p.add_argument("--file", required=True, help="stream file of NDJSON frame lines")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=9331)
    p.add_argument("--pace", type=float, default=0.0, help="seconds to sleep between lines")

    p = subs.add_parser("live", help="stream webcam landmarks to a server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=9331)
    p.add_argument("--camera", type=int, default=0)

    p = subs.add_parser("record", help="record one 30-frame capture from the webcam")
    p.add_argument("--out", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--camera", type=int, default=0)

    args = parser.parse_args(argv)
    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        return 1

    try:
        if args.subcommand == "replay":
            from .replay import replay_file

            responses = replay_file(
                args.file, args.host, args.port, pace_s=args.pace or None
            )
            for line in responses:
                print(line)
            return 0
        if args.subcommand == "live":
            from .camera import live

            return live(args.host, args.port, args.camera)
        from .camera import record

        return record(args.out, args.label, args.camera)
    except (OSError, RuntimeError, TimeoutError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
