import numpy as np
import pytest

from projbar.complex import (GridSpec, MultiFiltration, PointCloud2D, build_complex, distance_field,
                             freudenthal_grid, gaussian_kde, make_bifiltration, read_cloud, read_filtration,
                             sample_circle_dataset, scott_bandwidth, write_cloud, write_filtration)


def grid_counts(nx, ny):
    # independent count: cells, then horizontal + vertical + diagonal edges
    cells = (nx - 1) * (ny - 1)
    edges = ny * (nx - 1) + nx * (ny - 1) + cells
    return nx * ny, edges, 2 * cells


def test_face_closure_of_triangle():
    cx = build_complex([(0, 1, 2)])
    assert (cx.count(0), cx.count(1), cx.count(2)) == (3, 3, 1)
    cx.validate()


def test_empty_complex():
    cx = build_complex([])
    assert len(cx) == 0 and cx.vertex_count == 0 and cx.dimension == -1


def test_hollow_triangle():
    cx = build_complex([(0, 1), (1, 2), (0, 2)])
    assert (cx.count(0), cx.count(1), cx.count(2)) == (3, 3, 0)


def test_duplicates_are_merged():
    cx = build_complex([(2, 1), (1, 2), (0, 1, 2)])
    assert len(cx) == 7
    cx.validate()


@pytest.mark.parametrize("bad", [[(0, 0)], [(1, 2, 1)], [(-1, 2)], [()]])
def test_invalid_simplices_rejected(bad):
    with pytest.raises(ValueError):
        build_complex(bad)


@pytest.mark.parametrize("nx,ny", [(2, 2), (3, 3), (2, 3), (5, 4)])
def test_freudenthal_counts(nx, ny):
    cx = freudenthal_grid(GridSpec(-1, 1, -1, 1, nx, ny))
    assert (cx.count(0), cx.count(1), cx.count(2)) == grid_counts(nx, ny)
    cx.validate()


def test_freudenthal_small_cases():
    assert grid_counts(2, 2) == (4, 5, 2)
    assert grid_counts(3, 3) == (9, 16, 8)
    assert grid_counts(2, 3) == (6, 9, 4)


def test_freudenthal_diagonal_direction():
    cx = freudenthal_grid(GridSpec.square(2))
    # vertex ids j*nx+i: (0,0)=0, (1,0)=1, (0,1)=2, (1,1)=3
    assert (0, 3) in cx.index and (1, 2) not in cx.index


@pytest.mark.parametrize("kwargs", [dict(xmin=1, xmax=0), dict(ymin=0, ymax=0), dict(nx=1), dict(ny=0)])
def test_gridspec_invariants(kwargs):
    with pytest.raises(ValueError):
        GridSpec(**kwargs)


def test_circle_dataset_radii():
    cloud = sample_circle_dataset(300, 1.0, 0.1, 0, seed=7)
    r = np.linalg.norm(cloud.points, axis=1)
    assert len(cloud) == 300
    assert r.min() >= 1.0 and r.max() <= 1.1


def test_outliers_only():
    cloud = sample_circle_dataset(0, 1.0, 0.1, 10, seed=3)
    assert len(cloud) == 10
    assert np.all(np.abs(cloud.points) <= 1.0)


def test_circle_dataset_deterministic():
    a = sample_circle_dataset(50, 1.0, 0.1, 5, seed=11)
    b = sample_circle_dataset(50, 1.0, 0.1, 5, seed=11)
    assert np.array_equal(a.points, b.points)


def test_circle_dataset_rejects_bad_params():
    with pytest.raises(ValueError):
        sample_circle_dataset(-1)
    with pytest.raises(ValueError):
        sample_circle_dataset(10, radius=0)
    with pytest.raises(ValueError):
        PointCloud2D([[0.0, np.nan]])


def test_distance_field_zero_at_sample():
    grid = GridSpec.square(5)
    node = grid.nodes()[7]
    d = distance_field(PointCloud2D([node]), grid)
    assert d[7] == 0.0


def test_distance_field_half():
    grid = GridSpec.square(5)
    nodes = grid.nodes()
    k = int(np.nonzero(np.all(np.isclose(nodes, [0.5, 0.0]), axis=1))[0][0])
    assert distance_field(PointCloud2D([[0.0, 0.0]]), grid)[k] == pytest.approx(0.5)


def test_distance_field_brute_force(rng):
    grid = GridSpec.square(9)
    pts = rng.uniform(-1, 1, (2, 2))
    d = distance_field(PointCloud2D(pts), grid)
    for k in rng.choice(len(d), 10, replace=False):
        v = grid.nodes()[k]
        assert d[k] == pytest.approx(min(np.hypot(*(v - p)) for p in pts))


def test_distance_field_empty_rejected():
    with pytest.raises(ValueError):
        distance_field(PointCloud2D(np.zeros((0, 2))), GridSpec.square(3))


def test_kde_single_point_peak():
    grid = GridSpec.square(5)
    k = gaussian_kde(PointCloud2D([grid.nodes()[12]]), 1.0, grid)
    assert k[12] == pytest.approx(1 / (2 * np.pi))
    assert np.all(k > 0)


def test_kde_integrates_to_one(rng):
    grid = GridSpec(-4, 4, -4, 4, 161, 161)
    cloud = PointCloud2D(rng.uniform(-0.5, 0.5, (20, 2)))
    k = gaussian_kde(cloud, 0.4, grid)
    assert abs(k.sum() * grid.cell_area - 1) < 0.02


def test_kde_rejects_bad_bandwidth():
    with pytest.raises(ValueError):
        gaussian_kde(PointCloud2D([[0, 0]]), 0.0, GridSpec.square(3))


def test_scott_bandwidth_matches_rule(rng):
    cloud = PointCloud2D(rng.normal(size=(64, 2)))
    sigma = np.mean(np.std(cloud.points, axis=0, ddof=1))
    assert scott_bandwidth(cloud) == pytest.approx(64 ** (-1 / 6) * sigma)


def test_bifiltration_stacking():
    grid = GridSpec.square(64)
    cx = freudenthal_grid(grid)
    cloud = sample_circle_dataset(100, seed=1)
    d, k = distance_field(cloud, grid), gaussian_kde(cloud, None, grid)
    f = make_bifiltration(cx, [d, k], negate=[False, True])
    assert f.n_params == 2
    assert np.array_equal(f.values[:, 0], d) and np.array_equal(f.values[:, 1], -k)
    assert make_bifiltration(cx, [d]).n_params == 1
    same = make_bifiltration(cx, [d, d])
    assert np.array_equal(same.values[:, 0], same.values[:, 1])


def test_bifiltration_length_mismatch():
    cx = build_complex([(0, 1)])
    with pytest.raises(ValueError):
        make_bifiltration(cx, [np.zeros(3)])
    with pytest.raises(ValueError):
        MultiFiltration(cx, np.array([[0.0], [np.inf]]))


def test_filtration_file_round_trip(tmp_path, rng):
    cx = freudenthal_grid(GridSpec.square(8))
    f = MultiFiltration(cx, rng.normal(size=(64, 2)))
    write_filtration(f, tmp_path / "f.txt")
    g = read_filtration(tmp_path / "f.txt")
    assert g.complex.simplices == cx.simplices
    assert np.array_equal(g.values, f.values)


def test_filtration_file_missing_vertex(tmp_path):
    (tmp_path / "bad.txt").write_text("v 0 1.0\ns 0 1\n")
    with pytest.raises(ValueError):
        read_filtration(tmp_path / "bad.txt")


def test_cloud_round_trip(tmp_path):
    cloud = sample_circle_dataset(20, seed=2)
    write_cloud(cloud, tmp_path / "c.csv")
    assert (tmp_path / "c.csv").read_text().startswith("x,y")
    assert np.array_equal(read_cloud(tmp_path / "c.csv").points, cloud.points)
