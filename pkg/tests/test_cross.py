import itertools
import math
import random

import numpy as np
import pytest

from multilattice.cross import (
    CrossSizeError,
    cardinality_bound,
    enumerate_cross,
    feasible_supports,
    span_closed_form,
    tail_bound,
)
from multilattice.weights import SmoothnessParams, TheoryParams, WeightSpec

from _oracles import (
    brute_cross_box,
    brute_tail_box,
    oracle_gamma,
    safe_box_radius,
    tail_remainder_bound,
)


def test_interval_example():
    cross = enumerate_cross(SmoothnessParams(1.0, 3.0, 1), WeightSpec.product([1.0]))
    assert cross.indices == tuple((k,) for k in range(-3, 4))
    assert cross.cardinality == 7
    assert cross.span == 6


def test_radius_below_one_gives_empty_set():
    cross = enumerate_cross(SmoothnessParams(1.0, 0.5, 2), WeightSpec.product([1.0, 1.0]))
    assert cross.cardinality == 0
    assert cross.span == 0


def test_two_dim_example_cardinality_33():
    cross = enumerate_cross(SmoothnessParams(1.0, 3.0, 2), WeightSpec.product([1.0, 1.0]))
    assert cross.cardinality == 33
    assert cross.span == 6


def test_boundary_indices_included():
    # rnorm = M exactly must be kept: alpha=2, M=4 admits (1,2) with norm 4
    cross = enumerate_cross(SmoothnessParams(2.0, 4.0, 2), WeightSpec.product([1.0, 1.0]))
    assert (1, 2) in cross
    assert (2, 0) in cross
    assert cross.cardinality == 21  # brute force over [-2,2]^2


def test_exactness_against_box_brute_force():
    random.seed(23)
    trials = 0
    while trials < 25:
        d = random.randint(1, 3)
        alpha = random.choice([0.7, 1.0, 1.5, 2.0])
        m_radius = random.uniform(0.4, 20.0)
        kind = random.choice(["product", "pod", "explicit"])
        if kind == "product":
            spec = WeightSpec.product([random.uniform(0, 1.5) for _ in range(d)])
        elif kind == "pod":
            spec = WeightSpec.pod(
                [1.0] + [random.uniform(0, 1.6) for _ in range(d)],
                [random.uniform(0, 1.4) for _ in range(d)],
            )
        else:
            emap = {}
            for r in range(1, d + 1):
                for u in itertools.combinations(range(1, d + 1), r):
                    if random.random() < 0.6:
                        emap[u] = random.uniform(0, 2.0)
            spec = WeightSpec(kind="explicit", explicit_map=emap)
        box = safe_box_radius(d, alpha, m_radius, spec, d)
        if (2 * box + 1) ** d > 300_000:
            continue
        trials += 1
        params = SmoothnessParams(alpha, m_radius, d)
        expected = brute_cross_box(d, alpha, m_radius, spec, box)
        cross = enumerate_cross(params, spec)
        assert list(cross.indices) == expected


def test_negation_closure_and_ordinal_round_trip():
    spec = WeightSpec.pod([1.0, 1.0, 0.7], [1.0, 0.8])
    cross = enumerate_cross(SmoothnessParams(1.0, 6.0, 2), spec)
    assert cross.cardinality > 1
    for i, k in enumerate(cross.indices):
        assert cross.ordinal_of(k) == i
        assert tuple(-c for c in k) in cross
    assert (0, 0) in cross


def test_lexicographic_order_and_array_agree():
    cross = enumerate_cross(SmoothnessParams(1.0, 4.0, 2), WeightSpec.product([1.0, 0.9]))
    assert list(cross.indices) == sorted(cross.indices)
    arr = cross.as_array()
    assert arr.shape == (cross.cardinality, 2)
    assert [tuple(int(v) for v in row) for row in arr] == list(cross.indices)


def test_span_closed_form_examples():
    assert span_closed_form(SmoothnessParams(1.0, 3.0, 2), WeightSpec.product([1.0, 1.0])) == 6
    assert span_closed_form(SmoothnessParams(1.0, 4.0, 1), WeightSpec.product([0.5])) == 4
    # all weight off the empty set: single point, span 0
    only_origin = WeightSpec(kind="explicit", explicit_map={})
    cross = enumerate_cross(SmoothnessParams(1.0, 2.0, 2), only_origin)
    assert cross.indices == ((0, 0),)
    assert span_closed_form(SmoothnessParams(1.0, 2.0, 2), only_origin) == 0 == cross.span


def test_span_closed_form_matches_enumeration_randomized():
    random.seed(7)
    for _ in range(20):
        d = random.randint(1, 3)
        alpha = random.choice([0.8, 1.0, 2.0])
        m_radius = random.uniform(1.0, 15.0)
        spec = WeightSpec.product([random.uniform(0.1, 1.2) for _ in range(d)])
        params = SmoothnessParams(alpha, m_radius, d)
        cross = enumerate_cross(params, spec)
        assert span_closed_form(params, spec) == cross.span
        # explicit supports argument gives the same answer
        assert span_closed_form(params, spec, supports=feasible_supports(params, spec)) == cross.span


def test_feasible_supports_match_definition():
    random.seed(5)
    for _ in range(10):
        d = random.randint(1, 4)
        m_radius = random.uniform(0.5, 12.0)
        spec = WeightSpec.pod(
            [1.0] + [random.uniform(0, 1.5) for _ in range(d)],
            [random.uniform(0, 1.3) for _ in range(d)],
        )
        params = SmoothnessParams(1.0, m_radius, d)
        got = set(feasible_supports(params, spec))
        expect = set()
        for r in range(d + 1):
            for u in itertools.combinations(range(1, d + 1), r):
                if oracle_gamma(spec, u) * m_radius >= 1.0 - 1e-12:
                    expect.add(u)
        assert got == expect


def test_spod_enumeration_requires_hook():
    spod = WeightSpec(
        kind="spod",
        order_gammas=tuple([1.0] * 5),
        spod_table=((0.6, 0.2), (0.5, 0.1)),
        spod_sigma=2,
    )
    params = SmoothnessParams(1.0, 4.0, 2)
    with pytest.raises(ValueError, match="superset_bound_hook"):
        enumerate_cross(params, spod)
    hooked = WeightSpec(
        kind="spod",
        order_gammas=spod.order_gammas,
        spod_table=spod.spod_table,
        spod_sigma=2,
        superset_bound_hook=lambda u: 2.0,  # any valid upper bound works
    )
    cross = enumerate_cross(params, hooked)
    box = safe_box_radius(2, 1.0, 4.0, hooked, 2)
    assert list(cross.indices) == brute_cross_box(2, 1.0, 4.0, hooked, box)


def test_cardinality_cap_aborts():
    with pytest.raises(CrossSizeError):
        enumerate_cross(
            SmoothnessParams(1.0, 50.0, 2),
            WeightSpec.product([1.0, 1.0]),
            cardinality_cap=100,
        )


def test_cardinality_bound_examples():
    bound = cardinality_bound(
        SmoothnessParams(1.0, 3.0, 1), WeightSpec.product([1.0]), TheoryParams(lam=2.0)
    )
    assert bound == pytest.approx(9.0 * (1.0 + math.pi**2 / 3.0), rel=1e-12)
    assert bound >= 7
    # M = 1 bound is the weighted sum itself, at least the singleton count
    b1 = cardinality_bound(
        SmoothnessParams(1.0, 1.0, 2), WeightSpec.product([0.5, 0.5]), TheoryParams(lam=1.5)
    )
    assert b1 >= 1.0
    b2 = cardinality_bound(
        SmoothnessParams(2.0, 4.0, 2), WeightSpec.product([1.0, 1.0]), TheoryParams(lam=1.0)
    )
    assert b2 == pytest.approx(4.0 * (1.0 + math.pi**2 / 3.0) ** 2, rel=1e-12)
    cross = enumerate_cross(SmoothnessParams(2.0, 4.0, 2), WeightSpec.product([1.0, 1.0]))
    assert b2 >= cross.cardinality


def test_cardinality_bound_rejects_small_lambda():
    with pytest.raises(ValueError):
        cardinality_bound(
            SmoothnessParams(1.0, 3.0, 1), WeightSpec.product([1.0]), TheoryParams(lam=0.8)
        )


def test_tail_bound_examples():
    t1 = tail_bound(
        SmoothnessParams(2.0, 1.0, 1), WeightSpec.product([1.0]), TheoryParams(lam=1.0)
    )
    assert t1 == pytest.approx(16.0 * (1.0 + math.pi**2 / 3.0), rel=1e-12)
    # true tail for alpha=2, M=1: 2*(zeta(4)-1)
    true_tail = 2.0 * (math.pi**4 / 90.0 - 1.0)
    assert true_tail <= t1
    t2 = tail_bound(
        SmoothnessParams(2.0, 2.0, 2), WeightSpec.product([1.0, 1.0]), TheoryParams(lam=1.0)
    )
    assert t2 == pytest.approx(0.5 * 16.0 * (1.0 + math.pi**2 / 3.0) ** 2, rel=1e-12)


def test_tail_bound_dominates_brute_force():
    cases = [
        (1, 2.0, 1.0, 1.0, WeightSpec.product([1.0])),
        (2, 2.0, 2.0, 1.0, WeightSpec.product([1.0, 1.0])),
        (2, 1.0, 3.0, 1.5, WeightSpec.product([1.0, 0.5])),
        (3, 1.5, 2.0, 1.2, WeightSpec.pod([1.0, 1.0, 0.5, 0.2], [0.9, 0.6, 0.4])),
        (2, 1.0, 2.0, 1.5, WeightSpec(kind="explicit", explicit_map={(1,): 1.0, (1, 2): 0.5})),
    ]
    for d, alpha, m_radius, lam, spec in cases:
        params = SmoothnessParams(alpha, m_radius, d)
        bound = tail_bound(params, spec, TheoryParams(lam=lam))
        box = {1: 40_000, 2: 250, 3: 32}[d]
        brute = brute_tail_box(d, alpha, m_radius, spec, box)
        remainder = tail_remainder_bound(d, alpha, spec, box)
        assert brute + remainder <= bound, (d, alpha, m_radius, lam, brute, remainder, bound)
        assert brute >= 0.0


def test_tail_bound_preconditions():
    spec = WeightSpec.product([1.0])
    with pytest.raises(ValueError):
        tail_bound(SmoothnessParams(2.0, 1.0, 1), spec, TheoryParams(lam=2.0))
    with pytest.raises(ValueError):
        tail_bound(SmoothnessParams(2.0, 0.9, 1), spec, TheoryParams(lam=1.0))


def test_span_at_most_cardinality_minus_one():
    # structural chain: the axis segments through each feasible support
    # already contribute span many indices beyond the origin
    random.seed(31)
    for _ in range(20):
        d = random.randint(1, 3)
        alpha = random.choice([0.8, 1.0, 2.0])
        m_radius = random.uniform(1.0, 12.0)
        kind = random.choice(["product", "pod"])
        if kind == "product":
            spec = WeightSpec.product([random.uniform(0.2, 1.2) for _ in range(d)])
        else:
            spec = WeightSpec.pod(
                [1.0] + [random.uniform(0.2, 1.2) for _ in range(d)],
                [random.uniform(0.2, 1.2) for _ in range(d)],
            )
        cross = enumerate_cross(SmoothnessParams(alpha, m_radius, d), spec)
        if cross.cardinality >= 2:
            assert cross.span <= cross.cardinality - 1


def test_csv_and_metadata_export(tmp_path):
    cross = enumerate_cross(SmoothnessParams(1.0, 3.0, 2), WeightSpec.product([1.0, 1.0]))
    path = tmp_path / "cross.csv"
    with open(path, "w") as fh:
        cross.to_csv(fh)
    lines = path.read_text().splitlines()
    assert lines[0] == "k_1,k_2,rnorm"
    assert len(lines) == 1 + 33
    meta = cross.metadata()
    assert meta["cardinality"] == 33
    assert meta["span"] == 6
    assert meta["weight_spec"]["kind"] == "product"
