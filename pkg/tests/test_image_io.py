import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from PIL import Image

from chanbin.errors import CorruptData, EmptyReport, InvalidSpec, UnsupportedFormat
from chanbin.image_io import (
    CompositionSpec,
    RgbImage,
    Stripe,
    decode_image,
    generate_stripes,
    render_swatch,
    stripe_widths,
    write_ppm,
)
from chanbin.model import DominantColor


def test_decode_smallest_p6():
    img = decode_image(b"P6\n1 1\n255\n" + bytes([255, 0, 0]), "ppm")
    assert (img.width, img.height) == (1, 1)
    assert img.pixels() == [(255, 0, 0)]


def test_decode_two_pixel_p6():
    img = decode_image(b"P6\n2 1\n255\n" + bytes([255, 242, 0, 237, 28, 36]))
    assert img.pixels() == [(255, 242, 0), (237, 28, 36)]


def test_decode_truncated_payload():
    with pytest.raises(CorruptData, match="offset"):
        decode_image(b"P6\n2 1\n255\n" + bytes([1, 2, 3, 4]))


def test_decode_header_comment_and_pgm():
    img = decode_image(b"P5\n# made by hand\n2 1\n255\n" + bytes([9, 200]))
    assert img.pixels() == [(9, 9, 9), (200, 200, 200)]


def test_decode_ascii_ppm():
    img = decode_image(b"P3\n1 2\n255\n1 2 3\n4 5 6\n")
    assert img.pixels() == [(1, 2, 3), (4, 5, 6)]


def test_decode_maxval_rescale():
    img = decode_image(b"P6\n1 1\n15\n" + bytes([15, 0, 8]))
    assert img.pixels() == [(255, 0, 136)]


@pytest.mark.parametrize("data", [b"GIF89a....", b"BM\x00\x00"])
def test_decode_unknown_signature(data):
    with pytest.raises(UnsupportedFormat):
        decode_image(data)


def test_decode_empty():
    with pytest.raises(CorruptData):
        decode_image(b"")


def test_decode_png_drops_alpha():
    buf = io.BytesIO()
    Image.fromarray(np.array([[[10, 20, 30, 0], [40, 50, 60, 255]]], dtype=np.uint8), "RGBA").save(buf, "PNG")
    img = decode_image(buf.getvalue())
    assert img.pixels() == [(10, 20, 30), (40, 50, 60)]


def test_decode_grayscale_png_replicates():
    buf = io.BytesIO()
    Image.fromarray(np.array([[7, 250]], dtype=np.uint8), "L").save(buf, "PNG")
    assert decode_image(buf.getvalue(), "png").pixels() == [(7, 7, 7), (250, 250, 250)]


def test_decode_jpeg_roundtrip_is_close():
    arr = np.full((8, 8, 3), (200, 100, 50), dtype=np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, "JPEG", quality=95)
    img = decode_image(buf.getvalue())
    assert img.data.shape == (8, 8, 3)
    assert np.abs(img.data.astype(int) - arr).max() <= 3


def test_decode_corrupt_png():
    buf = io.BytesIO()
    Image.fromarray(np.zeros((4, 4, 3), dtype=np.uint8)).save(buf, "PNG")
    with pytest.raises(CorruptData):
        decode_image(buf.getvalue()[:40])


def test_write_ppm_single_black_pixel():
    out = write_ppm(RgbImage(1, 1, np.zeros((1, 1, 3), dtype=np.uint8)))
    assert out[:-3] == b"P6\n1 1\n255\n"
    assert len(out[:-3]) == 11
    assert out[-3:] == b"\x00\x00\x00"


def test_write_ppm_2x2_golden():
    img = RgbImage.from_pixels(2, 2, [(1, 2, 3), (4, 5, 6), (7, 8, 9), (250, 251, 252)])
    # written out by hand: header then row-major RGB triples
    golden = b"P6\n2 2\n255\n\x01\x02\x03\x04\x05\x06\x07\x08\x09\xfa\xfb\xfc"
    assert write_ppm(img) == golden


@settings(max_examples=200)
@given(st.integers(1, 12), st.integers(1, 12), st.data())
def test_ppm_roundtrip(w, h, data):
    arr = np.array(data.draw(st.lists(st.integers(0, 255), min_size=w * h * 3, max_size=w * h * 3)), dtype=np.uint8)
    img = RgbImage(w, h, arr.reshape(h, w, 3))
    back = decode_image(write_ppm(img))
    assert np.array_equal(back.data, img.data)


def test_rgb_image_rejects_bad_shape():
    with pytest.raises(ValueError):
        RgbImage(2, 2, np.zeros((2, 3, 3), dtype=np.uint8))


def test_stripes_two_colors_exact_halves():
    spec = CompositionSpec((Stripe((255, 242, 0), 0.5), Stripe((237, 28, 36), 0.5)))
    img = generate_stripes(spec, 256, 384)
    flat = img.data.reshape(-1, 3)
    assert (flat == (255, 242, 0)).all(axis=1).sum() == 256 * 384 // 2
    assert (flat == (237, 28, 36)).all(axis=1).sum() == 256 * 384 // 2


def test_single_stripe_constant():
    img = generate_stripes(CompositionSpec((Stripe((9, 8, 7), 1.0),)), 5, 3)
    assert (img.data == (9, 8, 7)).all()


def test_largest_remainder_widths():
    spec = CompositionSpec((Stripe((0, 0, 0), 0.333), Stripe((1, 1, 1), 0.333), Stripe((2, 2, 2), 0.334)))
    assert stripe_widths(spec, 3) == [1, 1, 1]


def test_stripes_deterministic_with_noise():
    spec = CompositionSpec((Stripe((10, 20, 30), 0.4), Stripe((200, 100, 0), 0.6)), noise_sigma=3.0, seed=7)
    a = write_ppm(generate_stripes(spec, 64, 32))
    b = write_ppm(generate_stripes(spec, 64, 32))
    assert a == b
    c = write_ppm(generate_stripes(CompositionSpec(spec.stripes, 3.0, 8), 64, 32))
    assert a != c


def test_noise_is_clamped():
    spec = CompositionSpec((Stripe((0, 255, 128), 1.0),), noise_sigma=10.0, seed=1)
    img = generate_stripes(spec, 50, 50)
    assert img.data.dtype == np.uint8
    assert img.data[:, :, 0].min() == 0 and img.data[:, :, 1].max() == 255


@pytest.mark.parametrize(
    "stripes",
    [(), (Stripe((1, 2, 3), 0.5),), (Stripe((1, 2, 3), 0.7), Stripe((1, 2, 3), 0.7))],
)
def test_invalid_spec(stripes):
    with pytest.raises(InvalidSpec):
        CompositionSpec(stripes)


def test_spec_json_roundtrip():
    spec = CompositionSpec((Stripe((1, 2, 3), 0.25), Stripe((4, 5, 6), 0.75)), 1.5, 3)
    assert CompositionSpec.from_json(spec.to_json()) == spec
    with pytest.raises(InvalidSpec):
        CompositionSpec.from_json(json.dumps({"stripes": [{"color": [1, 2]}]}))


def test_generate_rejects_too_few_pixels():
    spec = CompositionSpec((Stripe((0, 0, 0), 0.5), Stripe((1, 1, 1), 0.5)))
    with pytest.raises(InvalidSpec):
        generate_stripes(spec, 1, 1)


def test_swatch_solid_red_band():
    img = render_swatch([[DominantColor(255, 100.0)]], bar_height=4, width=10)
    assert img.height == 4
    assert (img.data == (255, 0, 0)).all()


def test_swatch_half_split():
    img = render_swatch([[(0, 50.0), (255, 50.0)]], bar_height=2, width=10)
    assert (img.data[:, :5] == (0, 0, 0)).all()
    assert (img.data[:, 5:] == (255, 0, 0)).all()


def test_swatch_blocks_follow_percent_ratio():
    # an uneven 78.93 : 21.06 split
    img = render_swatch([[(99, 78.93), (192, 21.06)]], bar_height=1, width=256)
    row = img.data[0, :, 0]
    w99 = int((row == 99).sum())
    w192 = int((row == 192).sum())
    assert w99 + w192 == 256
    assert abs(w99 - 256 * 78.93 / 99.99) <= 1
    assert abs(w192 - 256 * 21.06 / 99.99) <= 1


def test_swatch_three_bands_use_own_channel():
    img = render_swatch([[(10, 100.0)], [(20, 100.0)], [(30, 100.0)]], bar_height=2, width=4)
    assert img.height == 6
    assert (img.data[0:2] == (10, 0, 0)).all()
    assert (img.data[2:4] == (0, 20, 0)).all()
    assert (img.data[4:6] == (0, 0, 30)).all()


def test_swatch_empty_report():
    with pytest.raises(EmptyReport):
        render_swatch([])
    with pytest.raises(EmptyReport):
        render_swatch([[], []])
