import itertools
import math

import numpy as np
import pytest

from fairclust import (
    AdversarialSpec,
    CostSpec,
    IngestSpec,
    InputError,
    adversarial_instance,
    brute_force_optimal,
    fair_radii,
    fairness_ratio,
    load_csv,
    random_instance,
    standin_dataset,
)
from fairclust.geometry import aspect_ratio
from fairclust.instances import STANDIN_SHAPES, adversarial_layout, points_to_csv, write_csv


def test_adversarial_geometry():
    spec = AdversarialSpec(k=4, n=20)
    ps = adversarial_instance(spec)
    lay = adversarial_layout(spec)
    assert ps.d == 2 * 3 + 1
    assert ps.n == len(lay.left) + len(lay.nodes) + sum(len(r) for r in lay.rings) <= spec.n
    D = ps.matrix()
    for a, b in itertools.combinations(lay.left, 2):
        assert D[a, b] == pytest.approx(spec.M, rel=1e-9)
    for a, b in itertools.combinations(lay.nodes, 2):
        assert D[a, b] == pytest.approx(2 * spec.R, rel=1e-9)
    for node, ring in zip(lay.nodes, lay.rings):
        for y in ring:
            assert D[node, y] == pytest.approx(spec.r, rel=1e-9)
    right = [i for i in range(ps.n) if i not in lay.left]
    assert D[np.ix_(lay.left, right)].min() >= spec.D
    assert D[np.ix_(right, right)].max() <= 2 * spec.R + 2 * spec.r + 1e-9


def test_adversarial_k3_unfair_optimum_and_fair_witness():
    spec = AdversarialSpec(k=3, n=12, r=1.0, R=100.0)
    ps = adversarial_instance(spec)
    radii = fair_radii(ps, 3)
    opt = brute_force_optimal(ps, 3, CostSpec(1, 3))
    lay = adversarial_layout(spec)
    assert set(lay.left) <= set(opt.centers)
    assert fairness_ratio(ps, radii, opt.centers)[0] > spec.R / spec.r - 1
    assert fairness_ratio(ps, radii, lay.witness())[0] <= 1.0 + 1e-6


def test_adversarial_k2_alternating_ring():
    ps = adversarial_instance(AdversarialSpec(k=2, n=6))
    assert ps.d == 3 and ps.n == 6


def test_adversarial_validation():
    for bad in (dict(k=1), dict(k=4, n=10), dict(r=0.0), dict(R=0.5, r=1.0), dict(separation=5.0)):
        with pytest.raises(InputError):
            AdversarialSpec(**bad)


def test_random_instance_determinism_and_spread_zero():
    a = random_instance(50, 3, 4, 0.1, seed=3)
    b = random_instance(50, 3, 4, 0.1, seed=3)
    np.testing.assert_array_equal(a.coords, b.coords)
    z = random_instance(50, 3, 4, 0.0, seed=3)
    assert len(np.unique(z.coords, axis=0)) == 4
    assert math.isfinite(aspect_ratio(a)) and aspect_ratio(a) > 1
    with pytest.raises(InputError):
        random_instance(3, 2, 4, 0.1, seed=0)


@pytest.mark.parametrize("name", sorted(STANDIN_SHAPES))
def test_standin_shapes(name):
    ps = standin_dataset(name, n=300, seed=1)
    assert ps.coords.shape == (300, STANDIN_SHAPES[name])
    np.testing.assert_array_equal(ps.coords, standin_dataset(name, n=300, seed=1).coords)


def test_standin_unknown():
    with pytest.raises(InputError):
        standin_dataset("iris")


def test_load_csv_header_columns_and_subsample(tmp_path):
    path = tmp_path / "d.csv"
    rows = ["age,time-in-hospital,name"] + [f"{i},{i % 7},p{i}" for i in range(40)]
    path.write_text("\n".join(rows) + "\n")
    ps = load_csv(IngestSpec(path, ["age", "time-in-hospital"], subsample_size=None))
    assert ps.coords.shape == (40, 2)
    a = load_csv(IngestSpec(path, ["age", 1], subsample_size=10, seed=5))
    b = load_csv(IngestSpec(path, ["age", 1], subsample_size=10, seed=5))
    np.testing.assert_array_equal(a.coords, b.coords)
    assert list(a.coords[:, 0]) == sorted(a.coords[:, 0])
    assert len(set(a.coords[:, 0])) == 10
    full = load_csv(IngestSpec(path, [0, 1], subsample_size=40))
    np.testing.assert_array_equal(full.coords, ps.coords)


def test_load_csv_errors(tmp_path):
    with pytest.raises(InputError):
        load_csv(IngestSpec(tmp_path / "missing.csv"))
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,2\n3,oops\n")
    with pytest.raises(InputError, match="line 3"):
        load_csv(IngestSpec(bad, subsample_size=None))
    with pytest.raises(InputError):
        load_csv(IngestSpec(bad, ["z"], subsample_size=None))
    with pytest.raises(InputError):
        load_csv(IngestSpec(bad, subsample_size=5))


def test_load_csv_headerless_and_normalize(tmp_path):
    path = tmp_path / "n.csv"
    path.write_text("0,10\n5,20\n10,30\n")
    ps = load_csv(IngestSpec(path, subsample_size=None, normalize=True))
    np.testing.assert_array_equal(ps.coords, [[0, 0], [0.5, 0.5], [1, 1]])


def test_csv_round_trip_is_exact(tmp_path):
    ps = random_instance(30, 3, 2, 0.3, seed=8)
    path = tmp_path / "r.csv"
    write_csv(ps, path)
    back = load_csv(IngestSpec(path, subsample_size=None))
    np.testing.assert_array_equal(back.coords, ps.coords)
    assert points_to_csv(back) == path.read_text()
