"""Command-line entry point.

Subcommands: gen (synthetic datasets and streams), train, eval, encode
(capture to PGM), stream (offline replay producing the event/state log),
and serve (live TCP session for a capture client).

Every flag can also come from a TOML config file (one table per
subcommand, keys named like the long flags with dashes as underscores);
explicit flags win over the file, the file wins over built-in defaults.
The resolved effective configuration is printed to stderr before the run.

Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime abort.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
import threading
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from . import synth
from .cnn import (
    Architecture,
    ConvSpec,
    GestureNet,
    TrainConfig,
    TrainReport,
    TrainingDivergedError,
    WeightsError,
    evaluate,
    load_weights,
    save_weights,
    train,
)
from .home import HomeController
from .landmarks import (
    CLASS_ORDER,
    GestureClass,
    HandLost,
    WireFormatError,
    load_captures,
    parse_stream,
    read_capture,
    write_capture,
)
from .motion import encode, encode_dataset, write_pgm
from .recognizer import RecognizerConfig, StreamRecognizer
from .server import GestureServer, event_line, state_line

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class UsageError(Exception):
    pass


class RuntimeAbort(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems with exit code 1."""

    def error(self, message):
        raise UsageError(message)


_DEFAULTS: dict[str, dict] = {
    "gen": {
        "out": "dataset",
        "seed": 0,
        "per_class": 10,
        "neutral_multiplier": 2,
        "jitter_sigma": 0.01,
        "speed_warp": 0.2,
        "stream": None,
    },
    "train": {
        "data": None,
        "val": None,
        "out": "weights.gstr",
        "metrics": "metrics.csv",
        "seed": 0,
        "lr": 1e-6,
        "batch": 8,
        "epochs": 150,
        "l1": 1e-4,
        "conv": "33p,64,64",
        "hidden": 64,
    },
    "eval": {"weights": None, "data": None, "csv": None},
    "encode": {"capture": None, "out": None},
    "stream": {
        "weights": None,
        "infile": "-",
        "out": "-",
        "threshold": 0.98,
        "triplication": 3,
        "intensity_step": 10,
    },
    "serve": {
        "weights": None,
        "host": "127.0.0.1",
        "port": 9331,
        "threshold": 0.98,
        "triplication": 3,
        "intensity_step": 10,
    },
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="signstream", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    def sub(name: str, help_text: str) -> _Parser:
        p = subs.add_parser(name, help=help_text)
        p.add_argument("--config", help="TOML config file; flags override it")
        return p

    p = sub("gen", "generate a synthetic dataset directory or stream file")
    p.add_argument("--out", help="output dataset directory (or stream file with --stream)")
    p.add_argument("--seed", type=int)
    p.add_argument("--per-class", dest="per_class", type=int)
    p.add_argument("--neutral-multiplier", dest="neutral_multiplier", type=int)
    p.add_argument("--jitter-sigma", dest="jitter_sigma", type=float)
    p.add_argument("--speed-warp", dest="speed_warp", type=float)
    p.add_argument(
        "--stream",
        help="emit a stream instead: comma list of class names, hand_lost, idle:MS",
    )

    p = sub("train", "train a model on a capture dataset")
    p.add_argument("--data", help="training dataset directory")
    p.add_argument("--val", help="validation dataset directory")
    p.add_argument("--out", help="output weight file")
    p.add_argument("--metrics", help="output per-epoch metrics CSV")
    p.add_argument("--seed", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--batch", type=int)
    p.add_argument("--epochs", type=int, help="0 saves the untouched initialization")
    p.add_argument("--l1", type=float)
    p.add_argument("--conv", help="conv stack, e.g. 33p,64,64 (p = 2x2 max pool)")
    p.add_argument("--hidden", type=int)

    p = sub("eval", "report accuracy and confusion matrix on a dataset")
    p.add_argument("--weights")
    p.add_argument("--data")
    p.add_argument("--csv", help="also write the confusion matrix as CSV")

    p = sub("encode", "render a capture file as a 21x90 PGM image")
    p.add_argument("--capture")
    p.add_argument("--out", help="output PGM path (default: capture path + .pgm)")

    p = sub("stream", "replay a frame stream offline and log events and states")
    p.add_argument("--weights")
    p.add_argument("--in", dest="infile", help="stream file, or - for stdin")
    p.add_argument("--out", help="event/state log file, or - for stdout")
    p.add_argument("--threshold", type=float)
    p.add_argument("--triplication", type=int)
    p.add_argument("--intensity-step", dest="intensity_step", type=int)

    p = sub("serve", "serve one live TCP NDJSON session at a time")
    p.add_argument("--weights")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--triplication", type=int)
    p.add_argument("--intensity-step", dest="intensity_step", type=int)

    return parser


def _merge_config(sub: str, args: argparse.Namespace) -> dict:
    cfg = dict(_DEFAULTS[sub])
    if args.config is not None:
        try:
            with open(args.config, "rb") as fh:
                filed = tomllib.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from None
        except tomllib.TOMLDecodeError as exc:
            raise UsageError(f"invalid config file: {exc}") from None
        section = filed.get(sub, {})
        if not isinstance(section, dict):
            raise UsageError(f"config table [{sub}] must be a table")
        for key, value in section.items():
            key = key.replace("-", "_")
            if key == "in":
                key = "infile"
            if key not in cfg:
                raise UsageError(f"unknown config key {key!r} for {sub}")
            cfg[key] = value
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _require(cfg: dict, sub: str, *keys: str) -> None:
    for key in keys:
        if cfg[key] is None:
            flag = "--in" if key == "infile" else "--" + key.replace("_", "-")
            raise UsageError(f"{sub} requires {flag}")


def _print_config(sub: str, cfg: dict) -> None:
    print(f"config: {json.dumps({'subcommand': sub, **cfg}, sort_keys=True)}", file=sys.stderr)


def _parse_conv(text: str) -> tuple[ConvSpec, ...]:
    specs = []
    for item in text.split(","):
        item = item.strip()
        pool = item.endswith("p")
        body = item[:-1] if pool else item
        if not body.isdigit():
            raise UsageError(f"bad conv spec {item!r} (want e.g. 33p,64,64)")
        specs.append(ConvSpec(int(body), pool=pool))
    return tuple(specs)


def _parse_script(text: str) -> list:
    items: list = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token == "hand_lost":
            items.append("hand_lost")
        elif token.startswith("idle:"):
            try:
                items.append(int(token[5:]))
            except ValueError:
                raise UsageError(f"bad idle token {token!r}") from None
        else:
            try:
                items.append(GestureClass.from_wire(token))
            except WireFormatError:
                raise UsageError(
                    f"unknown script token {token!r} (classes: {', '.join(CLASS_ORDER)})"
                ) from None
    if not items:
        raise UsageError("empty stream script")
    return items


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_gen(cfg: dict) -> int:
    gen_cfg = synth.GeneratorConfig(
        jitter_sigma=cfg["jitter_sigma"], speed_warp=cfg["speed_warp"]
    )
    if cfg["stream"] is not None:
        script = _parse_script(cfg["stream"])
        lines = synth.generate_stream(cfg["seed"], script, gen_cfg)
        out = Path(cfg["out"])
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        print(f"wrote {len(lines)} stream lines to {out}", file=sys.stderr)
        return EXIT_OK

    captures = synth.generate_dataset(
        cfg["seed"], cfg["per_class"], cfg["neutral_multiplier"], gen_cfg
    )
    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, capture in enumerate(captures):
        write_capture(capture, out_dir / f"{i:04d}_{capture.label.wire_name}.capture")
    print(f"wrote {len(captures)} captures to {out_dir}", file=sys.stderr)
    return EXIT_OK


def _load_dataset(path: str) -> list:
    captures = load_captures(path)
    if not captures:
        raise WireFormatError(f"{path}: no capture files found")
    return encode_dataset(captures)


def _cmd_train(cfg: dict) -> int:
    _require(cfg, "train", "data")
    arch = Architecture(conv=_parse_conv(cfg["conv"]), hidden=cfg["hidden"])
    train_set = _load_dataset(cfg["data"])
    val_set = _load_dataset(cfg["val"]) if cfg["val"] is not None else None

    model = GestureNet(arch, seed=cfg["seed"])
    print(f"parameters: {model.parameter_count()}", file=sys.stderr)

    if cfg["epochs"] == 0:
        report = TrainReport(TrainConfig(seed=cfg["seed"]), ())
    else:
        train_cfg = TrainConfig(
            learning_rate=cfg["lr"],
            batch_size=cfg["batch"],
            epochs=cfg["epochs"],
            l1_lambda=cfg["l1"],
            seed=cfg["seed"],
        )
        model, report = train(model, train_set, val_set, train_cfg)
        last = report.epochs[-1]
        line = f"epoch {last.epoch}: train_acc {last.train_accuracy:.4f} train_loss {last.train_loss:.6f}"
        if last.val_accuracy is not None:
            line += f" val_acc {last.val_accuracy:.4f} val_loss {last.val_loss:.6f}"
        print(line, file=sys.stderr)

    save_weights(model, cfg["out"])
    Path(cfg["metrics"]).write_text(report.to_csv(), encoding="utf-8", newline="\n")
    print(f"wrote {cfg['out']} and {cfg['metrics']}", file=sys.stderr)
    return EXIT_OK


def _cmd_eval(cfg: dict) -> int:
    _require(cfg, "eval", "weights", "data")
    model = load_weights(cfg["weights"])
    dataset = _load_dataset(cfg["data"])
    x = np.stack([m for m, _ in dataset])
    y = np.array([label for _, label in dataset])
    pred = np.concatenate(
        [model.predict(x[i : i + 64]) for i in range(0, len(y), 64)]
    )
    matrix = np.zeros((len(CLASS_ORDER), len(CLASS_ORDER)), dtype=int)
    np.add.at(matrix, (y, pred), 1)
    accuracy = float((pred == y).mean())

    print(f"accuracy: {accuracy:.4f} ({int((pred == y).sum())}/{len(y)})")
    header = "true\\pred " + " ".join(f"{i:4d}" for i in range(len(CLASS_ORDER)))
    print(header)
    for i, name in enumerate(CLASS_ORDER):
        row = " ".join(f"{int(v):4d}" for v in matrix[i])
        print(f"{i:9d} {row}  {name}")

    if cfg["csv"] is not None:
        lines = ["class," + ",".join(CLASS_ORDER)]
        for i, name in enumerate(CLASS_ORDER):
            lines.append(name + "," + ",".join(str(int(v)) for v in matrix[i]))
        Path(cfg["csv"]).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        print(f"wrote {cfg['csv']}", file=sys.stderr)
    return EXIT_OK


def _cmd_encode(cfg: dict) -> int:
    _require(cfg, "encode", "capture")
    capture = read_capture(cfg["capture"])
    out = cfg["out"] if cfg["out"] is not None else cfg["capture"] + ".pgm"
    write_pgm(encode(capture), out)
    print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def _cmd_stream(cfg: dict) -> int:
    _require(cfg, "stream", "weights")
    model = load_weights(cfg["weights"])
    rec_cfg = RecognizerConfig(
        confidence_threshold=cfg["threshold"], triplication_n=cfg["triplication"]
    )
    recognizer = StreamRecognizer(model, rec_cfg)
    controller = HomeController(intensity_step=cfg["intensity_step"])

    if cfg["infile"] == "-":
        lines = sys.stdin
    else:
        try:
            lines = Path(cfg["infile"]).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise WireFormatError(f"{cfg['infile']}: cannot read stream: {exc}") from exc

    out_lines = [state_line(controller.state)]
    events = 0
    for item in parse_stream(lines):
        if isinstance(item, HandLost):
            recognizer.hand_lost()
            continue
        event = recognizer.push_frame(item)
        if event is None:
            continue
        events += 1
        controller.handle(event)
        out_lines.append(event_line(event))
        out_lines.append(state_line(controller.state))

    text = "\n".join(out_lines) + "\n"
    if cfg["out"] == "-":
        sys.stdout.write(text)
    else:
        Path(cfg["out"]).write_text(text, encoding="utf-8", newline="\n")
    print(f"events: {events}", file=sys.stderr)
    return EXIT_OK


def _cmd_serve(cfg: dict) -> int:
    _require(cfg, "serve", "weights")
    model = load_weights(cfg["weights"])
    rec_cfg = RecognizerConfig(
        confidence_threshold=cfg["threshold"], triplication_n=cfg["triplication"]
    )
    try:
        server = GestureServer(
            model,
            cfg["host"],
            cfg["port"],
            recognizer_config=rec_cfg,
            intensity_step=cfg["intensity_step"],
        )
    except OSError as exc:
        raise RuntimeAbort(f"cannot bind {cfg['host']}:{cfg['port']}: {exc}") from exc

    stop = threading.Event()
    for sig in (signal.SIGINT, signal.SIGTERM):
        signal.signal(sig, lambda *_: stop.set())
    print(f"listening on {server.address[0]}:{server.address[1]}", file=sys.stderr)
    server.serve_forever(stop)
    print("shut down", file=sys.stderr)
    return EXIT_OK


_HANDLERS = {
    "gen": _cmd_gen,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "encode": _cmd_encode,
    "stream": _cmd_stream,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand is None:
            raise UsageError("a subcommand is required (see --help)")
        cfg = _merge_config(args.subcommand, args)
        _print_config(args.subcommand, cfg)
        return _HANDLERS[args.subcommand](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WireFormatError, WeightsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        # config values rejected by the dataclass validators
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TrainingDivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except RuntimeAbort as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
