"""Command-line interface: extract, generate, evaluate, compare, swatch.

Exit status is 0 on success, 1 on runtime or data failures and 2 on usage
errors (bad flags, malformed documents).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

from .binning import BinningConfig
from .channels import split_channels
from .errors import ChanbinError, InvalidSpec, KTooLarge
from .evaluation import image_epsilon
from .gla import GlaConfig, compare_methods
from .image_io import CompositionSpec, generate_stripes, read_image, render_swatch, stripe_truth, write_ppm
from .merge import MergeConfig
from .model import ChannelId, DominantColor
from .pipeline import ChannelReport, ExtractionConfig, extract_dominant_colors

SCHEMA_VERSION = "1.0"
CHANNELS = [ch.label for ch in ChannelId]


class UsageError(Exception):
    """Malformed input document; reported with exit status 2."""


# ---------------------------------------------------------------------------
# Documents

def _color_entry(color: DominantColor, full_precision: bool) -> dict:
    if full_precision:
        return {"value": color.value, "percent": color.percent}
    return {"value": color.pixel_value, "percent": round(color.percent, 2)}


def result_document(image: str, config: ExtractionConfig | None, reports, full_precision: bool = False) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "image": image,
        "config": asdict(config) if config is not None else None,
        "channels": {r.channel.label: [_color_entry(c, full_precision) for c in r.colors] for r in reports},
    }


def reports_from_document(doc) -> list[ChannelReport]:
    try:
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise UsageError(f"unsupported schema_version {doc.get('schema_version')!r}")
        channels = doc["channels"]
        reports = []
        for name in CHANNELS:
            entries = channels[name]
            colors = tuple(DominantColor(float(e["value"]), float(e["percent"])) for e in entries)
            if not colors:
                raise UsageError(f"channel {name} has no colors")
            reports.append(ChannelReport(ChannelId.parse(name), colors))
        return reports
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed result document: {exc!r}") from exc


def document_to_csv(doc: dict, with_image: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow((["image"] if with_image else []) + ["channel", "value", "percent"])
    docs = doc if isinstance(doc, list) else [doc]
    for d in docs:
        for name, entries in d["channels"].items():
            for e in entries:
                writer.writerow(([d["image"]] if with_image else []) + [name, e["value"], e["percent"]])
    return buf.getvalue()


def csv_to_channels(text: str) -> dict:
    channels: dict = {}
    for row in csv.DictReader(io.StringIO(text)):
        value = float(row["value"])
        channels.setdefault(row["channel"], []).append(
            {"value": int(value) if value.is_integer() else value, "percent": float(row["percent"])}
        )
    return channels


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from exc


def _emit(text: str, out: str | None, binary: bytes | None = None) -> None:
    if out:
        if binary is not None:
            with open(out, "wb") as fh:
                fh.write(binary)
        else:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands

def _extraction_config(args) -> ExtractionConfig:
    rho_mode = {"distinct": "distinct", "all": "all_pixels", "all_pixels": "all_pixels"}[args.rho_mode]
    valley = None if args.valley_ratio.lower() == "none" else float(args.valley_ratio)
    return ExtractionConfig(
        BinningConfig(rho_mode=rho_mode),
        MergeConfig(
            thresh_count_pct=args.thresh_count_pct,
            thresh_distance=args.thresh_distance,
            max_colors=args.max_colors or None,
            valley_ratio=valley,
        ),
    )


def run_extract(args) -> int:
    try:
        config = _extraction_config(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.workers < 1:
        raise UsageError("--workers must be positive")

    def one(path):
        return result_document(path, config, extract_dominant_colors(read_image(path), config), args.full_precision)

    if args.workers > 1 and len(args.images) > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            docs = list(pool.map(one, args.images))
    else:
        docs = [one(p) for p in args.images]
    payload = docs[0] if len(docs) == 1 else docs
    if args.format == "csv":
        _emit(document_to_csv(payload, with_image=len(docs) > 1), args.out)
    else:
        _emit(dumps(payload), args.out)
    return 0


def run_generate(args) -> int:
    if args.width <= 0 or args.height <= 0:
        raise UsageError("width and height must be positive")
    try:
        with open(args.spec, encoding="utf-8") as fh:
            spec = CompositionSpec.from_json(fh.read())
        image = generate_stripes(spec, args.width, args.height)
    except InvalidSpec as exc:
        raise UsageError(f"{args.spec}: {exc}") from exc
    data = write_ppm(image)
    if args.out:
        _emit("", args.out, binary=data)
    else:
        sys.stdout.buffer.write(data)
    if args.truth:
        truth = [ChannelReport(ch, tuple(colors)) for ch, colors in zip(ChannelId, stripe_truth(spec, args.width))]
        _emit(dumps(result_document(args.out or "-", None, truth, args.full_precision)), args.truth)
    return 0


def run_evaluate(args) -> int:
    est = reports_from_document(_load_json(args.estimated))
    act = reports_from_document(_load_json(args.actual))
    report = image_epsilon(est, act)
    doc = {"schema_version": SCHEMA_VERSION, "estimated": args.estimated, "actual": args.actual}
    doc.update(report.to_dict())
    _emit(dumps(doc), args.out)
    return 0


def run_compare(args) -> int:
    image = read_image(args.image)
    init = "seeded_random" if args.init == "random" else "uniform_spread"
    if args.k < 1:
        raise UsageError("--k must be positive")
    if args.k > 256:
        raise KTooLarge(f"k={args.k} exceeds the 256 possible channel values")
    gla_cfg = GlaConfig(k=args.k, init=init, seed=args.seed)
    channels = {}
    for ch, hist in zip(ChannelId, split_channels(image)):
        rec = compare_methods(hist, gla_cfg=gla_cfg, channel=ch)
        entry = {
            "binning": [_color_entry(c, args.full_precision) for c in rec.binning],
            "gla": [_color_entry(c, args.full_precision) for c in rec.gla],
            "binning_k": rec.binning_k,
        }
        if not args.omit_timings:
            entry["wall_times"] = rec.wall_times
        channels[ch.label] = entry
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["channel", "method", "value", "percent"])
        for name, entry in channels.items():
            for method in ("binning", "gla"):
                for e in entry[method]:
                    writer.writerow([name, method, e["value"], e["percent"]])
        _emit(buf.getvalue(), args.out)
        return 0
    doc = {
        "schema_version": SCHEMA_VERSION,
        "image": args.image,
        "gla": {"k": args.k, "init": init, "seed": args.seed},
        "channels": channels,
    }
    _emit(dumps(doc), args.out)
    return 0


def run_swatch(args) -> int:
    reports = reports_from_document(_load_json(args.result))
    try:
        image = render_swatch([r.colors for r in reports], bar_height=args.bar_height, width=args.width)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit("", args.out, binary=write_ppm(image))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chanbin", description="Dominant color pixel values per RGB channel.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract dominant values from one or more images")
    p.add_argument("images", nargs="+")
    p.add_argument("--rho-mode", choices=["distinct", "all", "all_pixels"], default="distinct")
    p.add_argument("--thresh-count-pct", type=float, default=MergeConfig.thresh_count_pct)
    p.add_argument("--thresh-distance", type=float, default=MergeConfig.thresh_distance)
    p.add_argument("--max-colors", type=int, default=MergeConfig.max_colors, help="0 disables the cap")
    p.add_argument("--valley-ratio", default=str(MergeConfig.valley_ratio), help="'none' disables hump consolidation")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--full-precision", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=run_extract)

    p = sub.add_parser("generate", help="write a synthetic stripe image")
    p.add_argument("--spec", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--truth", help="also write the realised composition as a result document")
    p.add_argument("--full-precision", action="store_true")
    p.set_defaults(func=run_generate)

    p = sub.add_parser("evaluate", help="error between estimated and actual result documents")
    p.add_argument("--estimated", required=True)
    p.add_argument("--actual", required=True)
    p.add_argument("--out")
    p.set_defaults(func=run_evaluate)

    p = sub.add_parser("compare", help="channelized binning against Lloyd")
    p.add_argument("image")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", choices=["uniform", "random"], default="uniform")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--full-precision", action="store_true")
    p.add_argument("--omit-timings", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=run_compare)

    p = sub.add_parser("swatch", help="render a result document as a PPM swatch")
    p.add_argument("result")
    p.add_argument("--out", required=True)
    p.add_argument("--bar-height", type=int, default=32)
    p.add_argument("--width", type=int, default=256)
    p.set_defaults(func=run_swatch)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"chanbin {args.command}: {exc}", file=sys.stderr)
        return 2
    except (ChanbinError, OSError) as exc:
        print(f"chanbin {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
