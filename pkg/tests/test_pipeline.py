import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chanbin.evaluation import image_epsilon
from chanbin.image_io import RgbImage, generate_stripes, stripe_truth
from chanbin.model import ChannelId
from chanbin.pipeline import ChannelReport, ExtractionConfig, extract_dominant_colors

from conftest import four_mode_spec, constructed_spec


def as_image(arr):
    return RgbImage(arr.shape[1], arr.shape[0], arr)


def truth_reports(spec, width):
    return [ChannelReport(ch, tuple(c)) for ch, c in zip(ChannelId, stripe_truth(spec, width))]


def test_two_stripe_exact():
    spec = constructed_spec(1)
    reports = extract_dominant_colors(generate_stripes(spec, 256, 384))
    assert [r.values for r in reports] == [[237, 255], [28, 242], [0, 36]]
    assert all(r.percents == [50.0, 50.0] for r in reports)


def test_constant_image():
    img = as_image(np.full((9, 7, 3), (5, 128, 250), dtype=np.uint8))
    reports = extract_dominant_colors(img)
    assert [[(c.value, c.percent) for c in r.colors] for r in reports] == [[(5, 100)], [(128, 100)], [(250, 100)]]


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_four_mode_image(seed):
    spec, chans = four_mode_spec(seed)
    reports = extract_dominant_colors(generate_stripes(spec, 256, 256))
    for r, modes in zip(reports, chans):
        assert 3 <= len(r.colors) <= 5
        # every recovered value sits near one of the generating modes
        assert all(min(abs(v - m) for m in modes) < 15 for v in r.values)


def test_noisy_two_stripe_error_is_small():
    spec = constructed_spec(1, noise_sigma=2.0, seed=4)
    reports = extract_dominant_colors(generate_stripes(spec, 256, 384))
    assert image_epsilon(reports, truth_reports(spec, 256)).image_epsilon < 1.0


images = st.tuples(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1)).map(
    lambda t: as_image(np.random.default_rng(t[2]).integers(0, 256, (t[0], t[1], 3), dtype=np.uint8))
)


@settings(max_examples=150)
@given(images)
def test_percentages_sum_to_100(img):
    for r in extract_dominant_colors(img):
        assert sum(r.percents) == pytest.approx(100.0, abs=1e-6)
        assert r.values == sorted(r.values)
        assert all(0 <= v <= 255 for v in r.values)


@settings(max_examples=100)
@given(images, st.integers(0, 2**32 - 1))
def test_spatial_permutation_invariance(img, seed):
    flat = img.data.reshape(-1, 3)
    perm = np.random.default_rng(seed).permutation(len(flat))
    shuffled = as_image(flat[perm].reshape(img.data.shape))
    assert extract_dominant_colors(shuffled) == extract_dominant_colors(img)


@settings(max_examples=100)
@given(images, st.integers(0, 255))
def test_channels_are_independent(img, fill):
    data = img.data.copy()
    data[..., 1] = fill
    before = extract_dominant_colors(img)
    after = extract_dominant_colors(as_image(data))
    assert after[0] == before[0] and after[2] == before[2]
    assert after[1].values == [fill]


def test_workers_match_sequential():
    spec, _ = four_mode_spec(3)
    img = generate_stripes(spec, 128, 64)
    assert extract_dominant_colors(img, workers=3) == extract_dominant_colors(img)


def test_config_default():
    cfg = ExtractionConfig()
    assert cfg.binning.rho_mode == "distinct"
    assert cfg.merge.thresh_count_pct == 5.0 and cfg.merge.thresh_distance == 40.0


def test_fallback_without_numba_matches(tmp_path):
    import os
    import subprocess
    import sys

    spec, _ = four_mode_spec(5)
    img = generate_stripes(spec, 64, 48)
    path = tmp_path / "img.npy"
    np.save(path, img.data)
    code = (
        "import sys, numpy as np\n"
        "from chanbin._accel import ENABLE_NUMBA\n"
        "from chanbin.image_io import RgbImage\n"
        "from chanbin.pipeline import extract_dominant_colors\n"
        "assert not ENABLE_NUMBA\n"
        f"d = np.load({str(path)!r})\n"
        "for r in extract_dominant_colors(RgbImage(d.shape[1], d.shape[0], d)):\n"
        "    print([(c.value, c.percent) for c in r.colors])\n"
    )
    env = dict(os.environ, CHANBIN_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    expected = "".join(f"{[(c.value, c.percent) for c in r.colors]}\n" for r in extract_dominant_colors(img))
    assert out == expected
