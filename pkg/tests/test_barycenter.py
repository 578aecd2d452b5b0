import time

import numpy as np
import pytest

from helpers import make_diagram, random_diagram
from topoclust.barycenter import barycenter, frechet_energy, median_diagram_index
from topoclust.budget import TimeBudget
from topoclust.diagram import PersistenceDiagram
from topoclust.errors import EmptyInput, FamilyMismatch
from topoclust.metric import wasserstein


def test_two_point_midpoint():
    res = barycenter([make_diagram([(0, 2)]), make_diagram([(0, 4)])])
    assert res.converged
    assert len(res.centroid) == 1
    assert (res.centroid.births[0], res.centroid.deaths[0]) == (0.0, 3.0)
    assert res.frechet_energy == pytest.approx(2.0, abs=1e-12)
    assert res.energy_trace[0] == pytest.approx(4.0)


def test_single_diagram_is_its_own_barycenter(rng):
    for _ in range(10):
        D = random_diagram(rng, 6, with_locations=True)
        res = barycenter([D])
        assert res.centroid.same_points(D.without_diagonal())
        assert res.frechet_energy == 0.0


def test_identical_inputs():
    D = make_diagram([(0, 3), (1, 5), (2, 2.5)])
    res = barycenter([D, D, D])
    assert res.centroid.same_points(D) and res.frechet_energy == 0.0


def test_energy_trace_non_increasing(rng):
    for _ in range(20):
        ds = [random_diagram(rng, 6) for _ in range(5)]
        res = barycenter(ds)
        trace = np.array(res.energy_trace)
        assert np.all(np.diff(trace) <= 1e-9 * max(1.0, trace[0]))
        assert res.frechet_energy == pytest.approx(frechet_energy(res.centroid, ds), rel=1e-12, abs=1e-12)


def test_reported_distances_are_exact(rng):
    ds = [random_diagram(rng, 5) for _ in range(4)]
    res = barycenter(ds)
    want = [wasserstein(res.centroid, d) for d in ds]
    assert np.allclose(res.distances, want, rtol=1e-12, atol=1e-12)


def test_input_order_does_not_matter(rng):
    ds = [random_diagram(rng, 5) for _ in range(6)]
    a = barycenter(ds)
    perm = rng.permutation(6)
    b = barycenter([ds[i] for i in perm])
    assert a.centroid == b.centroid
    assert np.array_equal(a.distances[perm], b.distances)


def test_not_worse_than_the_median_input(rng):
    for _ in range(10):
        ds = [random_diagram(rng, 6) for _ in range(5)]
        res = barycenter(ds)
        start = ds[median_diagram_index(ds)]
        assert res.frechet_energy <= frechet_energy(start, ds) + 1e-9


def test_tiny_budget_returns_first_evaluated_centroid(rng):
    ds = [random_diagram(rng, 6) for _ in range(5)]
    res = barycenter(ds, budget=TimeBudget(1e-6))
    assert res.iterations == 0 and not res.converged
    assert len(res.energy_trace) == 1
    assert res.frechet_energy == pytest.approx(frechet_energy(res.centroid, ds))


def test_maxima_family_centroid():
    ds = [make_diagram([(1, 3)], family="maxima"), make_diagram([(1, 5)], family="maxima")]
    res = barycenter(ds)
    assert res.centroid.family == "maxima"
    assert res.centroid.deaths[0] == pytest.approx(4.0)


def test_errors():
    with pytest.raises(EmptyInput):
        barycenter([])
    with pytest.raises(FamilyMismatch):
        barycenter([make_diagram([(0, 1)]), make_diagram([(0, 1)], family="maxima")])


def test_all_empty_inputs():
    res = barycenter([PersistenceDiagram.empty(), PersistenceDiagram.empty()])
    assert len(res.centroid) == 0 and res.frechet_energy == 0.0


def test_microsecond_budget_on_large_inputs(rng):
    ds = [random_diagram(rng, 60) for _ in range(100)]
    res = barycenter(ds, budget=TimeBudget(1e-6))
    assert not res.converged and res.iterations == 0
    # the first matching round always completes, so it is the only overrun
    t0 = time.perf_counter()
    frechet_energy(res.centroid, ds)
    one_round = time.perf_counter() - t0
    assert res.elapsed <= 1e-6 + 3 * one_round
