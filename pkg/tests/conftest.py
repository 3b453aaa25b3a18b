import numpy as np
import pytest

from projbar.complex import GridSpec, MultiFiltration, build_complex, freudenthal_grid
from projbar.persistence import Bar, GradedBarcode


def random_complex(rng, n_vertices=8, n_top=6, max_dim=2, max_simplices=200):
    """Face closure of random simplices, trimmed until it has at most ``max_simplices`` simplices."""
    while True:
        tops = []
        for _ in range(n_top):
            k = int(rng.integers(1, max_dim + 2))
            tops.append(tuple(sorted(rng.choice(n_vertices, size=min(k, n_vertices), replace=False).tolist())))
        tops += [(v,) for v in range(n_vertices)]
        cx = build_complex(tops)
        if len(cx) <= max_simplices:
            return cx
        n_top = max(1, n_top - 1)


def random_field(rng, cx, integer=False):
    if integer:
        return rng.integers(0, 5, cx.vertex_count).astype(float)
    return rng.normal(size=cx.vertex_count)


def random_barcode(rng, max_bars=6, degrees=(0, 1), integer=True, allow_inf=True):
    bars = {}
    for d in degrees:
        bs = []
        for _ in range(int(rng.integers(0, max_bars + 1))):
            b = float(rng.integers(0, 8)) if integer else float(rng.uniform(0, 8))
            if allow_inf and rng.random() < 0.15:
                bs.append(Bar(b, np.inf))
            else:
                length = float(rng.integers(1, 6)) if integer else float(rng.uniform(0.1, 5))
                bs.append(Bar(b, b + length))
        bars[d] = bs
    return GradedBarcode(bars)


def grid_bifiltration(rng, res=8, scale=1.0):
    cx = freudenthal_grid(GridSpec.square(res))
    return MultiFiltration(cx, scale * rng.normal(size=(cx.vertex_count, 2)))


def path_complex():
    return build_complex([(0, 1), (1, 2)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
