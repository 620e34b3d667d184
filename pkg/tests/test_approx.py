"""Polynomial approximation with complexity accounting: exact Taylor data,
analytic-tail remainders, removed-box bookkeeping, and the log-cubic
complexity model against power laws."""

import dataclasses
import math
from fractions import Fraction as F

import numpy as np
import pytest

from smoothparam.approx import (analytic_approximate, ck_approximate,
                                aic_of_fit, compare_log_cubic_vs_power,
                                fit_affine, taylor_patch, taylor_polynomial,
                                verify_and_score)
from smoothparam.analytic_param import hyperbola_analytic_charts
from smoothparam.config import DEFAULT
from smoothparam.funcs import RationalExpr
from smoothparam.poly import Poly

CHEAP = dataclasses.replace(DEFAULT, a_chart_angles=32, a_chart_radii=4)


def test_taylor_polynomial_exact_for_polynomials():
    g = RationalExpr(Poly([0, 0, 1]))
    assert taylor_polynomial(g, 2, F(0)) == Poly([0, 0, 1])
    assert taylor_polynomial(g, 5, F(1, 2)) == Poly([0, 0, 1])


def test_taylor_polynomial_geometric_series():
    # 1/(1 - x) at 0: coefficients are all 1, exactly
    g = RationalExpr(Poly([1]), Poly([1, -1]))
    p = taylor_polynomial(g, 6, F(0))
    assert p == Poly([1] * 7)


def test_analytic_tail_bound_is_K_times_two_to_minus_d():
    P = hyperbola_analytic_charts(F(1, 10), F(1, 16), cfg=CHEAP)
    ch = P.charts[0]
    K = ch.meta["K"]
    for d in (4, 8, 12):
        p, bound = taylor_patch(ch.f_comp, d, F(0), 1, "analytic", K=K)
        assert bound == K * 2.0 ** (-d)
        ts = np.linspace(-1, 1, 800)
        err = float(np.max(np.abs(ch.f_comp.eval_array(ts) - p.eval_array(ts))))
        assert err <= bound * (1 + 1e-9)


def test_complexity_is_sum_of_degree_powers():
    e = F(1, 2 ** 20)
    f = RationalExpr(Poly([e * e]), Poly([0, 1]))
    A = analytic_approximate(f, (e, F(1)), 2.0 ** -8,
                             declared_singularities=[0j], slab=True, cfg=CHEAP)
    assert A.complexity == sum(p.degree ** p.dim for p in A.patches)
    assert A.complexity > 0


def test_removed_boxes_respect_epsilon():
    e = F(1, 2 ** 20)
    f = RationalExpr(Poly([e * e]), Poly([0, 1]))
    eps = 2.0 ** -8
    A = analytic_approximate(f, (e, F(1)), eps,
                             declared_singularities=[0j], cfg=CHEAP)
    boxes = [p for p in A.patches if p.source == "removed-box"]
    assert boxes                         # the strip [e, eps) must be boxed
    for b in boxes:
        assert b.sup_error <= eps * (1 + 1e-12)
        assert b.side <= eps * (1 + 1e-12)
        assert b.degree ** b.dim == 1    # each box costs one unit
    rep = verify_and_score(A)
    assert rep["ok"] and rep["max_error"] <= eps * (1 + 1e-9)


def test_ck_route_error_and_patch_scaling():
    f = RationalExpr(Poly([0, 0, 0, 1]))      # x^3, sigma = 1/2 -> k = 3
    A1 = ck_approximate(f, (F(0), F(1)), 1e-3, 0.5)
    A2 = ck_approximate(f, (F(0), F(1)), 1e-6, 0.5)
    for A in (A1, A2):
        assert all(p.sup_error <= A.epsilon for p in A.patches)
        assert A.meta["k"] == 3
    # patch count grows like eps^(-1/k): a factor 10 per three decades
    ratio = len(A2.patches) / len(A1.patches)
    assert 4 <= ratio <= 25


def test_slab_patches_reverify_at_4x_sampling():
    e = F(1, 2 ** 20)
    f = RationalExpr(Poly([e * e]), Poly([0, 1]))
    eps = 2.0 ** -10
    A = analytic_approximate(f, (e, F(1)), eps,
                             declared_singularities=[0j], slab=True, cfg=CHEAP)
    ts = np.linspace(-1.0, 1.0, 4 * DEFAULT.patch_samples)
    for p in A.patches:
        if p.source == "removed-box":
            continue
        psi, poly = p.coeffs
        err = float(np.max(np.abs(f.eval_array(psi.eval_array(ts))
                                  - poly.eval_array(ts))))
        assert err <= eps * (1 + 1e-6)


def test_fit_affine_and_aic_prefer_true_model():
    xs = np.arange(1.0, 9.0)
    ys = 3.0 * xs + 1.0
    slope, icpt, r2 = fit_affine(xs, ys)
    assert abs(slope - 3) < 1e-12 and abs(icpt - 1) < 1e-12 and r2 == 1.0
    good = aic_of_fit(ys, 3.0 * xs + 1.0, 2)
    bad = aic_of_fit(ys, 2.0 * xs + 1.0, 2)
    assert good < bad


def test_log_cubic_model_beats_powers_on_slab_sweep():
    e0 = F(1, 2 ** 26)
    f = RationalExpr(Poly([e0 * e0]), Poly([0, 1]))
    eps_list, cx = [], []
    for j in range(8, 21, 3):
        eps = 2.0 ** -j
        A = analytic_approximate(f, (e0, F(1)), eps,
                                 declared_singularities=[0j], slab=True,
                                 cfg=CHEAP)
        eps_list.append(eps)
        cx.append(A.complexity)
    out = compare_log_cubic_vs_power(eps_list, cx, [0.1, 0.3, 0.5, 1.0])
    cubic = out["cubic"]["aic"]
    for key, val in out.items():
        if key != "cubic":
            assert cubic < val["aic"], key
