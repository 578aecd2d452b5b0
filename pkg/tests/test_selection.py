import math
from types import SimpleNamespace

import numpy as np
import pytest

from helpers import make_diagram
from oracles import ic_oracle
from topoclust.errors import (
    DegenerateVariance,
    InconsistentInputs,
    InvalidParameter,
    KEqualsN,
)
from topoclust.selection import (
    _argmin_k,
    log_likelihood,
    points_dimension,
    resolve_dimension,
    score,
    select_k,
)


def _result(k, assignment, distances):
    return SimpleNamespace(k=k, assignment=np.asarray(assignment), distances=np.asarray(distances, float))


def test_worked_example():
    r = _result(2, [0, 0, 1, 1], [1.0, 0.0, 1.0, 0.0])
    L, s2 = log_likelihood(r, 2.0)
    assert s2 == 0.5
    want_L = 2 * 2 * math.log(2) - 4 * math.log(4) - 4 * math.log(math.pi) - 2
    assert L == pytest.approx(want_L, rel=1e-15)
    sc = score(r, 2.0)
    # the four-decimal reference values carry a 2e-4 slip in L; the closed
    # form above is the exact target
    assert L == pytest.approx(-9.3513, abs=5e-4)
    assert sc["aic"] == pytest.approx(26.7026, abs=5e-4)
    assert sc["bic"] == pytest.approx(24.2478, abs=5e-4)
    assert sc["aic"] == pytest.approx(-2 * want_L + 8, rel=1e-15)
    assert sc["bic"] == pytest.approx(-2 * want_L + 4 * math.log(4), rel=1e-15)


def test_matches_oracle(rng):
    for _ in range(100):
        n = int(rng.integers(3, 40))
        k = int(rng.integers(1, n))
        assignment = rng.integers(0, k, n)
        dist = rng.uniform(0.01, 5.0, n)
        d = float(rng.uniform(0.5, 20))
        L, s2 = log_likelihood(_result(k, assignment, dist), d)
        sc = score(_result(k, assignment, dist), d)
        oL, os2, oaic, obic = ic_oracle(k, assignment.tolist(), dist.tolist(), d)
        assert abs(L - oL) <= 1e-12 * abs(oL)
        assert abs(s2 - os2) <= 1e-12 * os2
        assert abs(sc["aic"] - oaic) <= 1e-12 * abs(oaic)
        assert abs(sc["bic"] - obic) <= 1e-12 * abs(obic)


def test_errors():
    with pytest.raises(KEqualsN):
        log_likelihood(_result(3, [0, 1, 2], [0.0, 0.0, 0.0]), 2)
    with pytest.raises(DegenerateVariance):
        log_likelihood(_result(1, [0, 0, 0], [0.0, 0.0, 0.0]), 2)
    with pytest.raises(InvalidParameter):
        log_likelihood(_result(1, [0, 0], [1.0, 1.0]), 0)


def test_select_validates_inputs():
    a = _result(1, [0, 0, 0, 0], [1.0, 1, 1, 1])
    b = _result(3, [0, 1, 2, 2], [1.0, 1, 1, 1])
    with pytest.raises(InconsistentInputs):
        select_k([a, b], 2)
    with pytest.raises(InconsistentInputs):
        select_k([a, _result(2, [0, 1, 1], [1.0, 1, 1])], 2)
    with pytest.raises(InconsistentInputs):
        select_k([], 2)


def _grouped(n_groups, per_group, spread, rng):
    # one-dimensional points in well separated groups, scored for every k
    x = np.concatenate([g * 100 + rng.normal(0, spread, per_group) for g in range(n_groups)])
    out = []
    for k in range(1, 7):
        edges = np.quantile(x, np.linspace(0, 1, k + 1)[1:-1])
        labels = np.searchsorted(edges, x)
        centres = np.array([x[labels == j].mean() for j in range(k)])
        out.append(_result(k, labels, np.abs(x - centres[labels])))
    return out


def test_argmin_on_constructed_groups(rng):
    rep = select_k(_grouped(4, 20, 1.0, rng), 1.0)
    assert rep.selected_k_aic == 4 and rep.selected_k_bic == 4


def test_normalisation_and_ordering(rng):
    rep = select_k(_grouped(3, 10, 1.0, rng), 2.0)
    for crit in ("aic", "bic"):
        curve = dict(rep.curve(crit))
        assert curve[1] == 1.0
    # BIC penalises harder than AIC once log n > 2
    for k, s in rep.per_k.items():
        assert s.bic - s.aic == pytest.approx(k * 2.0 * (math.log(rep.n) - 2), rel=1e-9)


def test_tie_goes_to_smaller_k():
    assert _argmin_k({1: 3.0, 2: 1.0, 3: 1.0}) == 2
    assert _argmin_k({4: -1.0, 5: -1.0}) == 4


def test_dimension_rules():
    ds = [make_diagram([(0, 1), (0, 2)]), make_diagram([(0, 1)] * 4)]
    assert resolve_dimension(None) == 2.0
    assert resolve_dimension("auto") == 2.0
    assert resolve_dimension("points", ds) == points_dimension(ds) == 6.0
    assert resolve_dimension("3.5") == 3.5
    assert points_dimension([make_diagram([])]) == 2.0
    with pytest.raises(InvalidParameter):
        resolve_dimension("wide")
    with pytest.raises(InvalidParameter):
        resolve_dimension(-1)
