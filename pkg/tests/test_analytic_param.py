"""Analytic delta-parametrization: dyadic partitions (distance invariant and
logarithmic budget), affine a-charts against closed-form disk maxima, unit
refinement, and the chart-count law."""

import dataclasses
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from smoothparam.analytic_param import (_a_chart_for_interval,
                                        AnalyticParametrization,
                                        analytic_delta_parametrize,
                                        dyadic_partition,
                                        hyperbola_analytic_charts,
                                        refine_to_unit_charts,
                                        verify_a_chart_variation)
from smoothparam.charts import verify_a_chart, verify_mild_chart
from smoothparam.config import DEFAULT
from smoothparam.errors import SingularityInsideDisk
from smoothparam.funcs import RationalExpr, SqrtExpr
from smoothparam.poly import Poly

CHEAP = dataclasses.replace(DEFAULT, a_chart_angles=32, a_chart_radii=4)


def test_partition_single_singularity_delta_sixteenth():
    part = dyadic_partition((F(-1), F(1)), [0j], F(1, 16))
    assert part.removed == [(F(-1, 16), F(1, 16))]
    worst, count, budget = part.check_invariants()
    assert worst >= 3 - 1e-6
    assert count <= budget          # budget = 2*(1+1)*log2(16) = 16
    # kept intervals tile both gaps exactly
    left = sorted(iv for iv in part.kept if iv[1] <= 0)
    right = sorted(iv for iv in part.kept if iv[0] >= 0)
    assert left[0][0] == F(-1) and left[-1][1] == F(-1, 16)
    assert right[0][0] == F(1, 16) and right[-1][1] == F(1)
    for ivs in (left, right):
        for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
            assert b1 == a2


def test_partition_no_singularities():
    part = dyadic_partition((F(-1), F(1)), [], F(1, 16))
    assert part.removed == []
    worst, count, budget = part.check_invariants()
    assert math.isinf(worst)
    assert count <= 2 * math.log2(16)
    assert sorted(part.kept)[0][0] == F(-1)
    assert sorted(part.kept)[-1][1] == F(1)


def test_partition_random_instances():
    rng = random.Random(29)
    for _ in range(60):
        m = rng.randint(1, 3)
        sings = [complex(rng.uniform(-1, 1), 0) for _ in range(m)]
        delta = F(1, 2 ** rng.randint(4, 10))
        part = dyadic_partition((F(-1), F(1)), sings, delta)
        worst, count, budget = part.check_invariants()
        assert worst >= 3 - 1e-6
        assert count <= budget
        # kept intervals are disjoint and avoid every removed interval
        kept = sorted(part.kept)
        for (a1, b1), (a2, b2) in zip(kept, kept[1:]):
            assert b1 <= a2
        for a, b in kept:
            for lo, hi in part.removed:
                assert b <= lo or a >= hi


def test_partition_rejects_bad_delta():
    with pytest.raises(ValueError):
        dyadic_partition((F(-1), F(1)), [0j], F(1))
    with pytest.raises(ValueError):
        dyadic_partition((F(-1), F(1)), [0j], F(0))


def test_affine_function_unit_charts_without_refinement():
    f = RationalExpr(Poly([0, F(1, 4)]))     # x/4 on [-1, 1], no singularities
    P = analytic_delta_parametrize(f, F(1, 16), (F(-1), F(1)),
                                   declared_singularities=[], normalize=False)
    assert P.chart_count == 2
    R = refine_to_unit_charts(P)
    assert R.chart_count == P.chart_count    # already unit, nothing splits
    for ch in R.charts:
        assert verify_a_chart_variation(ch) <= 1 + 1e-9


def test_hyperbola_chart_K_matches_closed_form():
    e = F(1, 10)
    P = hyperbola_analytic_charts(e, F(1, 16))
    assert P.chart_count >= 1
    for ch in P.charts:
        c = abs(ch.meta["disk_center"])
        r = ch.meta["disk_radius"]
        # max of |eps^2/z| over the disk sits at the point nearest the pole
        closed = float(e) ** 2 / (c - r)
        assert abs(ch.meta["K"] - closed) <= 1e-12 * closed


def test_sqrt_branch_disk_bound_matches_closed_form():
    f = SqrtExpr(RationalExpr(Poly([0, 1])))
    ch = _a_chart_for_interval(f, F(1, 4), F(1, 2), DEFAULT, [0j])
    # max |sqrt(z)| over the disk about c of radius r is sqrt(c + r)
    closed = math.sqrt(3 / 8 + 1 / 4)
    assert abs(ch.meta["K"] - closed) <= 1e-6


def test_verify_a_chart_constant_and_square():
    const = RationalExpr(Poly([F(1, 2)]))
    assert verify_a_chart(const, 0j, 5.0, K=0.5).ok
    sq = RationalExpr(Poly([0, 0, 1]))
    assert verify_a_chart(sq, 0j, 3.0, K=9.0).ok
    assert not verify_a_chart(sq, 0j, 3.0, K=8.9).ok


def test_singularity_inside_protected_disk_raises():
    g = RationalExpr(Poly([1]), Poly([0, 1]))
    with pytest.raises(SingularityInsideDisk):
        _a_chart_for_interval(g, F(-1), F(1), CHEAP, [0j])


def test_refine_to_unit_charts_splits_square():
    f = RationalExpr(Poly([0, 0, 1]))        # x^2 on [-1, 1]: variation 4
    ch = _a_chart_for_interval(f, F(-1), F(1), DEFAULT, [])
    P = AnalyticParametrization(charts=[ch], removed=[], delta=F(1, 16),
                                domain=(F(-1), F(1)))
    assert verify_a_chart_variation(ch) > 1
    R = refine_to_unit_charts(P)
    assert R.chart_count >= math.ceil(3 * 4) - 2   # one split round of ~3K
    assert R.meta.get("refined")
    for sub in R.charts:
        assert verify_a_chart_variation(sub) <= 1 + 1e-9
    # the subcharts tile the original interval
    imgs = sorted((F(a), F(b)) for a, b in (c.image for c in R.charts))
    assert imgs[0][0] == F(-1) and imgs[-1][1] == F(1)
    for (a1, b1), (a2, b2) in zip(imgs, imgs[1:]):
        assert b1 == a2


def test_mildness_of_a_chart():
    f = RationalExpr(Poly([0, 0, 1]))
    ch = _a_chart_for_interval(f, F(-1), F(1), DEFAULT, [])
    K = ch.meta["K"]
    assert verify_mild_chart(ch, A=K, C=0.0, order=3).ok
    assert not verify_mild_chart(ch, A=0.1, C=0.0, order=3).ok


def test_hyperbola_chart_count_law():
    # chart count against log2(1/delta): linear with R^2 >= 0.99
    e = F(1, 2 ** 26)
    xs, ys = [], []
    for j in range(4, 15, 2):
        P = hyperbola_analytic_charts(e, F(1, 2 ** j), cfg=CHEAP)
        xs.append(float(j))
        ys.append(float(P.chart_count))
    xs, ys = np.array(xs), np.array(ys)
    slope, icpt = np.polyfit(xs, ys, 1)
    pred = slope * xs + icpt
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    assert 1 - ss_res / ss_tot >= 0.99
    assert slope > 0
