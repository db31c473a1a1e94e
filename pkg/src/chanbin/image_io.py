"""Image decoding, PPM output, synthetic stripe images and swatches."""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CorruptData, EmptyReport, InvalidSpec, UnsupportedFormat
from .model import DominantColor

FORMATS = ("ppm", "png", "jpeg", "auto")


@dataclass(frozen=True)
class RgbImage:
    """8-bit RGB image; ``data`` has shape (height, width, 3), dtype uint8."""

    width: int
    height: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        arr = np.asarray(self.data)
        if arr.shape != (self.height, self.width, 3):
            raise ValueError(f"data shape {arr.shape} does not match {self.height}x{self.width}x3")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("pixel components must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_pixels(cls, width: int, height: int, pixels: Iterable[Sequence[int]]) -> "RgbImage":
        arr = np.asarray(list(pixels), dtype=np.int64).reshape(height, width, 3)
        return cls(width, height, arr)

    @property
    def pixel_count(self) -> int:
        return self.width * self.height

    def pixels(self) -> list[tuple[int, int, int]]:
        return [tuple(int(c) for c in p) for p in self.data.reshape(-1, 3)]


@dataclass(frozen=True)
class Stripe:
    color: tuple[int, int, int]
    fraction: float


@dataclass(frozen=True)
class CompositionSpec:
    stripes: tuple[Stripe, ...]
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.stripes:
            raise InvalidSpec("composition needs at least one stripe")
        for s in self.stripes:
            if len(s.color) != 3 or any(not 0 <= int(c) <= 255 for c in s.color):
                raise InvalidSpec(f"stripe color {s.color!r} outside [0,255]^3")
            if not 0.0 < s.fraction <= 1.0:
                raise InvalidSpec(f"stripe fraction {s.fraction!r} not in (0, 1]")
        total = math.fsum(s.fraction for s in self.stripes)
        if abs(total - 1.0) > 1e-9:
            raise InvalidSpec(f"stripe fractions sum to {total!r}, expected 1")
        if not (self.noise_sigma >= 0.0 and math.isfinite(self.noise_sigma)):
            raise InvalidSpec("noise_sigma must be finite and >= 0")
        if self.seed < 0:
            raise InvalidSpec("seed must be unsigned")

    @classmethod
    def from_percentages(cls, colors, percents, noise_sigma=0.0, seed=0) -> "CompositionSpec":
        """Build a spec from percentages that need not sum to exactly 100."""
        total = math.fsum(percents)
        stripes = tuple(Stripe(tuple(int(c) for c in col), p / total) for col, p in zip(colors, percents))
        return cls(stripes, noise_sigma, seed)

    @classmethod
    def from_json(cls, text: str) -> "CompositionSpec":
        try:
            doc = json.loads(text)
            stripes = tuple(
                Stripe(tuple(int(c) for c in s["color"]), float(s["fraction"])) for s in doc["stripes"]
            )
            return cls(stripes, float(doc.get("noise_sigma", 0.0)), int(doc.get("seed", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidSpec):
                raise
            raise InvalidSpec(f"malformed composition document: {exc}") from exc

    def to_json(self) -> str:
        doc = {
            "stripes": [{"color": list(s.color), "fraction": s.fraction} for s in self.stripes],
            "noise_sigma": self.noise_sigma,
            "seed": self.seed,
        }
        return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# Decoding

def _sniff(data: bytes) -> str:
    if len(data) >= 2 and data[0:1] == b"P" and data[1:2] in b"2356":
        return "ppm"
    if data.startswith(b"\x89PNG\r\n\x1a\n"):
        return "png"
    if data.startswith(b"\xff\xd8"):
        return "jpeg"
    raise UnsupportedFormat(f"unrecognised image signature {data[:8]!r}")


def _sniff_or_none(data: bytes):
    try:
        return _sniff(data)
    except UnsupportedFormat:
        return None


def _pnm_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    """Read ``count`` whitespace-separated header integers; return them and the offset after."""
    tokens: list[int] = []
    pos = 2
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in b" \t\r\n":
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < n and data[pos] in b"0123456789":
            pos += 1
        if start == pos:
            raise CorruptData(f"bad PNM header at byte offset {pos}")
        tokens.append(int(data[start:pos]))
    return tokens, pos


def _decode_pnm(data: bytes) -> RgbImage:
    magic = data[:2]
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise UnsupportedFormat(f"unsupported PNM magic {magic!r}")
    (width, height, maxval), pos = _pnm_tokens(data, 3)
    if width <= 0 or height <= 0:
        raise CorruptData(f"non-positive PNM dimensions {width}x{height}")
    if not 0 < maxval < 65536:
        raise CorruptData(f"invalid PNM maxval {maxval}")
    if maxval > 255:
        raise UnsupportedFormat("16-bit PNM samples are not supported")
    channels = 3 if magic in (b"P3", b"P6") else 1
    needed = width * height * channels
    if magic in (b"P5", b"P6"):
        if pos >= len(data) or data[pos] not in b" \t\r\n":
            raise CorruptData(f"missing whitespace after PNM header at byte offset {pos}")
        pos += 1
        payload = data[pos:pos + needed]
        if len(payload) < needed:
            raise CorruptData(
                f"truncated PNM payload: expected {needed} bytes at offset {pos}, got {len(payload)}"
            )
        samples = np.frombuffer(payload, dtype=np.uint8).astype(np.int64)
    else:
        try:
            samples = np.array(data[pos:].split()[:needed], dtype=np.int64)
        except ValueError as exc:
            raise CorruptData(f"bad ASCII PNM sample after byte offset {pos}") from exc
        if samples.size < needed:
            raise CorruptData(f"truncated ASCII PNM payload after byte offset {pos}")
    if samples.size and samples.max() > maxval:
        raise CorruptData(f"sample exceeds maxval {maxval}")
    if maxval != 255:
        samples = (samples * 255 + maxval // 2) // maxval
    arr = samples.reshape(height, width, channels)
    if channels == 1:
        arr = np.repeat(arr, 3, axis=2)
    return RgbImage(width, height, arr.astype(np.uint8))


def _decode_pillow(data: bytes, fmt: str) -> RgbImage:
    from PIL import Image, UnidentifiedImageError

    formats = {"png": ["PNG"], "jpeg": ["JPEG"]}[fmt]
    try:
        with Image.open(io.BytesIO(data), formats=formats) as im:
            rgb = im.convert("RGB")
            arr = np.asarray(rgb, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        if _sniff_or_none(data) == fmt:
            raise CorruptData(f"{fmt.upper()} stream could not be decoded: {exc}") from exc
        raise UnsupportedFormat(f"not a {fmt.upper()} stream: {exc}") from exc
    except (OSError, SyntaxError, ValueError) as exc:
        raise CorruptData(f"{fmt.upper()} decoder error: {exc}") from exc
    h, w, _ = arr.shape
    return RgbImage(w, h, arr)


def decode_image(data: bytes, format_hint: str = "auto") -> RgbImage:
    """Decode PPM/PGM (binary or ASCII), PNG or JPEG bytes to 8-bit RGB.

    Grayscale is replicated across the three channels and alpha is dropped.
    """
    if not data:
        raise CorruptData("empty input at byte offset 0")
    if format_hint not in FORMATS:
        raise UnsupportedFormat(f"unknown format hint {format_hint!r}")
    fmt = _sniff(data) if format_hint == "auto" else format_hint
    if fmt == "ppm":
        return _decode_pnm(data)
    return _decode_pillow(data, fmt)


def read_image(path) -> RgbImage:
    with open(path, "rb") as fh:
        return decode_image(fh.read())


def write_ppm(image: RgbImage) -> bytes:
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(image.data, dtype=np.uint8).tobytes()


# ---------------------------------------------------------------------------
# Synthesis

def _largest_remainder(weights: Sequence[float], total: int) -> list[int]:
    wsum = math.fsum(weights)
    quotas = [w * total / wsum for w in weights]
    floors = [math.floor(q) for q in quotas]
    short = total - sum(floors)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - floors[i]), i))
    for i in order[:short]:
        floors[i] += 1
    return floors


def stripe_widths(spec: CompositionSpec, width: int) -> list[int]:
    return _largest_remainder([s.fraction for s in spec.stripes], width)


def generate_stripes(spec: CompositionSpec, width: int, height: int) -> RgbImage:
    """Vertical stripes left to right, optionally with seeded Gaussian noise."""
    if width <= 0 or height <= 0:
        raise InvalidSpec(f"image dimensions must be positive, got {width}x{height}")
    if width * height < len(spec.stripes):
        raise InvalidSpec("image has fewer pixels than stripes")
    cols = stripe_widths(spec, width)
    row = np.repeat(np.array([s.color for s in spec.stripes], dtype=np.float64), cols, axis=0)
    arr = np.broadcast_to(row, (height, width, 3)).copy()
    if spec.noise_sigma > 0:
        rng = np.random.default_rng(spec.seed)
        arr += rng.normal(0.0, spec.noise_sigma, size=arr.shape)
        arr = np.floor(arr + 0.5)
    return RgbImage(width, height, np.clip(arr, 0, 255).astype(np.uint8))


def stripe_truth(spec: CompositionSpec, width: int) -> list[list[DominantColor]]:
    """Per-channel composition actually realised by the noiseless stripe layout."""
    cols = stripe_widths(spec, width)
    report = []
    for ch in range(3):
        mass: dict[int, int] = {}
        for s, c in zip(spec.stripes, cols):
            if c:
                mass[s.color[ch]] = mass.get(s.color[ch], 0) + c
        report.append([DominantColor(float(v), 100.0 * m / width) for v, m in sorted(mass.items())])
    return report


def render_swatch(report, bar_height: int = 32, width: int = 256) -> RgbImage:
    """One band per channel, each dominant value a block sized by its percentage.

    ``report`` is a sequence of per-channel lists (red first) of
    :class:`DominantColor` or ``(value, percent)`` pairs.
    """
    if not report or all(len(colors) == 0 for colors in report):
        raise EmptyReport("swatch needs at least one dominant color")
    if bar_height <= 0 or width <= 0:
        raise ValueError("bar height and width must be positive")
    if len(report) > 3:
        raise ValueError("at most three channel bands")
    arr = np.zeros((bar_height * len(report), width, 3), dtype=np.uint8)
    for ch, colors in enumerate(report):
        pairs = [(c.value, c.percent) if isinstance(c, DominantColor) else tuple(c) for c in colors]
        if not pairs:
            continue
        widths = _largest_remainder([p for _, p in pairs], width)
        x = 0
        band = arr[ch * bar_height:(ch + 1) * bar_height]
        for (value, _), w in zip(pairs, widths):
            band[:, x:x + w, ch] = min(255, max(0, int(value + 0.5)))
            x += w
    return RgbImage(width, arr.shape[0], arr)
