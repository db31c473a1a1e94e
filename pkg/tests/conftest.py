import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from chanbin.image_io import CompositionSpec

settings.register_profile(
    "chanbin", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("chanbin")

# True compositions of the three constructed test images: (r, g, b) and percent.
CONSTRUCTED = {
    1: [((255, 242, 0), 50.0), ((237, 28, 36), 50.0)],
    2: [
        ((0, 162, 232), 25.2),
        ((34, 177, 76), 19.8),
        ((153, 217, 234), 7.41),
        ((163, 73, 164), 28.2),
        ((255, 201, 14), 19.3),
    ],
    3: [
        ((185, 122, 87), 8.5),
        ((153, 153, 234), 32.2),
        ((239, 239, 176), 18.3),
        ((181, 230, 29), 40.9),
    ],
}


def constructed_spec(number, noise_sigma=0.0, seed=0):
    rows = CONSTRUCTED[number]
    return CompositionSpec.from_percentages([c for c, _ in rows], [p for _, p in rows], noise_sigma, seed)


def four_mode_spec(seed, sigma=5.0, separation=60, min_mass=0.08):
    """Four stripes whose channels each carry four modes spaced at least ``separation`` apart."""
    rng = np.random.default_rng(1000 + seed)
    while True:
        fr = rng.dirichlet(np.ones(4))
        if fr.min() >= min_mass:
            break

    def modes():
        while True:
            v = np.sort(rng.integers(10, 246, size=4))
            if np.diff(v).min() >= separation:
                return rng.permutation(v)

    chans = [modes() for _ in range(3)]
    colors = [tuple(int(chans[c][i]) for c in range(3)) for i in range(4)]
    return CompositionSpec.from_percentages(colors, list(fr * 100), sigma, seed), chans


@pytest.fixture
def constructed():
    return constructed_spec


# --- acceptance reporting -----------------------------------------------------
# Tests marked ``criterion("Cn")`` are grouped; the terminal summary prints one
# line per criterion, passing only when every test in its group passed.

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    cid, title = marker.args
    entry = _CRITERIA.setdefault(cid, {"title": title, "ok": True, "details": []})
    if call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception):
        entry["ok"] = False
    entry["details"].extend(v for k, v in item.user_properties if k == "detail")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: int(c[1:])):
        entry = _CRITERIA[cid]
        status = "PASS" if entry["ok"] else "FAIL"
        detail = "; ".join(entry["details"])
        terminalreporter.write_line(f"{cid} {status} {entry['title']}" + (f" ({detail})" if detail else ""))
