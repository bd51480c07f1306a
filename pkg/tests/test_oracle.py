import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairclust import (
    CostSpec,
    InputError,
    PointSet,
    brute_force_optimal,
    cost,
    fair_radii,
    fairness_ratio,
    random_instance,
)
from fairclust.errors import InfeasibleError, OracleCapExceeded


def test_line_example(line4):
    res = brute_force_optimal(line4, 2, CostSpec(1, 2))
    assert res.centers == (1, 3)
    assert res.cost == 2.0
    assert res.feasible_count == 6
    assert math.isnan(res.fairness_ratio)


def test_k_equals_n():
    ps = PointSet(np.random.default_rng(0).normal(size=(5, 2)))
    res = brute_force_optimal(ps, 5, CostSpec(2, 5))
    assert res.centers == tuple(range(5)) and res.cost == 0.0


def test_cap_and_range_errors():
    ps = PointSet(np.random.default_rng(0).normal(size=(30, 1)))
    with pytest.raises(OracleCapExceeded):
        brute_force_optimal(ps, 10, CostSpec(1, 10), cap=1000)
    with pytest.raises(InputError):
        brute_force_optimal(ps, 0, CostSpec(1, 1))


def test_infeasible_reported():
    # with alpha = 1 and ell = n every point needs its own center
    ps = PointSet([[0.0], [1.0], [2.0]])
    radii = fair_radii(ps, 3)
    with pytest.raises(InfeasibleError):
        brute_force_optimal(ps, 2, CostSpec(1, 2), fairness=(1.0, radii))


def test_fairness_ratio_zero_radius_rules():
    ps = PointSet([[0.0], [0.0], [3.0], [3.0]])
    radii = fair_radii(ps, 2)
    assert radii.radii.tolist() == [0.0, 0.0, 0.0, 0.0]
    fmax, fmean, per = fairness_ratio(ps, radii, [0, 2])
    assert (fmax, fmean) == (0.0, 0.0)
    fmax, fmean, per = fairness_ratio(ps, radii, [0])
    assert fmax == math.inf and fmean == math.inf
    assert per.tolist() == [0.0, 0.0, math.inf, math.inf]


def test_all_locations_as_centers_give_zero():
    ps = random_instance(20, 2, 3, 0.1, seed=0)
    assert fairness_ratio(ps, fair_radii(ps, 3), range(20))[0] == 0.0


small = st.builds(
    random_instance,
    n=st.integers(4, 9),
    d=st.integers(1, 2),
    k=st.integers(1, 3),
    spread=st.sampled_from([0.0, 0.1, 0.3]),
    seed=st.integers(0, 10_000),
)


@given(small, st.integers(1, 3), st.sampled_from([1.0, 2.0, math.inf]), st.sampled_from([1.0, 2.0, 3.0]))
def test_matches_plain_enumeration(ps, k, p, alpha):
    k = min(k, ps.n)
    spec = CostSpec(p, k)
    radii = fair_radii(ps, k)
    best, best_set, feasible = math.inf, None, 0
    for S in itertools.combinations(range(ps.n), k):
        d = ps.columns(list(S)).min(axis=1)
        if (d > alpha * radii.radii).any():
            continue
        feasible += 1
        c = cost(ps, S, spec)
        if c < best:
            best, best_set = c, S
    if best_set is None:
        with pytest.raises(InfeasibleError):
            brute_force_optimal(ps, k, spec, fairness=(alpha, radii))
        return
    res = brute_force_optimal(ps, k, spec, fairness=(alpha, radii))
    assert res.feasible_count == feasible
    assert res.cost == pytest.approx(best, rel=1e-12, abs=0)
    assert res.fairness_ratio <= alpha
    unconstrained = brute_force_optimal(ps, k, spec)
    assert unconstrained.cost <= res.cost
