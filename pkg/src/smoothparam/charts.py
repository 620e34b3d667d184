"""Chart records and certificate checkers.

A chart is a polynomial (or explicitly composed) substitution from the unit
interval (or unit square, for slabs) into the original domain, together with
the function it carries.  The checkers measure derivative suprema on dense
grids — exactly in rational arithmetic when the data allows, in floats
otherwise — and certify the unit bound up to a stated tolerance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import DEFAULT, Config
from .funcs import FunctionExpr, RationalExpr, _wrap
from .poly import (Poly, _fr, max_abs_on_rational_grid, max_abs_ratio_on_grid)


@dataclass
class CertificateReport:
    ok: bool
    max_bound: float                 # largest measured supremum
    per_order: dict = field(default_factory=dict)
    mode: str = "float"
    tolerance: float = 0.0
    detail: str = ""

    def __bool__(self):
        return self.ok


@dataclass
class Chart:
    """One chart of a parametrization: psi maps [0, 1] onto a subinterval of
    the original domain, f_comp = f o psi."""

    psi: Poly
    f_comp: FunctionExpr
    k: int
    image: tuple = None              # (psi(0), psi(1)), exact when possible
    bounds: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.image is None:
            self.image = (self.psi(Fraction(0)), self.psi(Fraction(1)))

    @property
    def degree(self):
        return self.psi.degree


@dataclass
class SlabChart:
    """Chart of a 2d slab {a <= x <= b, g1(x) <= y <= g2(x)}:
    psi(t1, t2) = (x(t1), (1 - t2) G1(t1) + t2 G2(t1)) with Gi = gi o x."""

    x_map: Poly                      # t1 -> x
    G1: FunctionExpr
    G2: FunctionExpr
    k: int
    bounds: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def eval(self, t1, t2):
        x = self.x_map(t1)
        g1, g2 = self.G1.eval(t1), self.G2.eval(t1)
        return (x, (1 - t2) * g1 + t2 * g2)


def _rational_grid(n: int):
    return [Fraction(i, n) for i in range(n + 1)]


def _max_abs_exact(p: Poly, grid) -> Fraction:
    best = Fraction(0)
    for t in grid:
        v = abs(p(t))
        if v > best:
            best = v
    return best


def measure_chart_bounds(chart: Chart, cfg: Config = DEFAULT, exact=None):
    """Per-order suprema of |psi - psi(0)|, |psi^(i)| and |(f o psi)^(i)|,
    i = 1..k, sampled on a dense grid."""
    k = chart.k
    rat = chart.f_comp.as_rational()
    if exact is None:
        exact = rat is not None
    per = {}
    if exact:
        if rat is None:
            raise ValueError("exact verification needs a rational composition")
        n = cfg.exact_grid_points
        base = chart.psi - Poly.const(chart.psi(Fraction(0)))
        per[("psi", 0)] = float(max_abs_on_rational_grid(base, n))
        for i, d in enumerate(chart.psi.derivs(k)[1:], start=1):
            per[("psi", i)] = float(max_abs_on_rational_grid(d, n))
        fexpr = RationalExpr(rat[0], rat[1])
        chain = fexpr.derivative_chain(k, cfg)
        for i in range(1, k + 1):
            num, den = chain[i].as_rational()
            per[("f", i)] = float(max_abs_ratio_on_grid(num, den, n))
        mode = "exact"
    else:
        xs = np.linspace(0.0, 1.0, cfg.grid_points)
        base = chart.psi.eval_array(xs) - float(chart.psi(0.0))
        per[("psi", 0)] = float(np.max(np.abs(base)))
        dp = chart.psi
        for i in range(1, k + 1):
            dp = dp.deriv()
            per[("psi", i)] = float(np.max(np.abs(dp.eval_array(xs)))) if not dp.is_zero() else 0.0
        chain = chart.f_comp.derivative_chain(k, cfg)
        for i in range(1, k + 1):
            per[("f", i)] = float(np.max(np.abs(chain[i].eval_array(xs))))
        mode = "float"
    chart.bounds = per
    return per, mode


def verify_ck_chart(chart: Chart, cfg: Config = DEFAULT, exact=None) -> CertificateReport:
    """Certify the unit-norm condition: the chart map stays within distance 1
    of its basepoint in C^k, and the carried function does too (orders >= 1)."""
    per, mode = measure_chart_bounds(chart, cfg, exact)
    tol = cfg.ck_tolerance_exact if mode == "exact" else cfg.ck_tolerance_float
    worst = max(per.values()) if per else 0.0
    ok = worst <= 1.0 + tol
    return CertificateReport(ok=ok, max_bound=worst, per_order=per,
                             mode=mode, tolerance=tol)


def verify_slab_chart(slab: SlabChart, cfg: Config = DEFAULT) -> CertificateReport:
    """The second component is affine in t2, so all mixed partials reduce to
    t1-derivatives of G1 and G2 - G1; check those plus the x-map."""
    k = slab.k
    xs = np.linspace(0.0, 1.0, cfg.grid_points_2d ** 2 // 4 + 2)
    per = {}
    base = slab.x_map.eval_array(xs) - float(slab.x_map(0.0))
    per[("x", 0)] = float(np.max(np.abs(base)))
    dp = slab.x_map
    for i in range(1, k + 1):
        dp = dp.deriv()
        per[("x", i)] = float(np.max(np.abs(dp.eval_array(xs)))) if not dp.is_zero() else 0.0
    c1 = slab.G1.derivative_chain(k, cfg)
    c2 = slab.G2.derivative_chain(k, cfg)
    g1v = [g.eval_array(xs) for g in c1]
    g2v = [g.eval_array(xs) for g in c2]
    per[("y", 0)] = float(max(np.max(np.abs(g1v[0] - g1v[0][0])),
                              np.max(np.abs(g2v[0] - g1v[0][0]))))
    for i in range(1, k + 1):
        # d^i/dt1^i of psi2 at t2 in {0, 1}, and of the t2-slope G2 - G1
        per[("y", i)] = float(max(np.max(np.abs(g1v[i])), np.max(np.abs(g2v[i]))))
        per[("y-slope", i - 1)] = float(np.max(np.abs(g2v[i - 1] - g1v[i - 1])))
    slab.bounds = per
    worst = max(per.values())
    tol = cfg.ck_tolerance_float
    return CertificateReport(ok=worst <= 1.0 + tol, max_bound=worst,
                             per_order=per, mode="float", tolerance=tol)


def verify_mild_chart(chart: Chart, A: float, C: float, order: int,
                      cfg: Config = DEFAULT) -> CertificateReport:
    """Mildness: |psi^(i)| <= i! (A i^C)^i for i = 1..order (and the carried
    function likewise)."""
    xs = np.linspace(0.0, 1.0, cfg.grid_points)
    per = {}
    ok = True
    worst_ratio = 0.0
    dp = chart.psi
    chain = chart.f_comp.derivative_chain(order, cfg)
    for i in range(1, order + 1):
        dp = dp.deriv()
        allowed = math.factorial(i) * (A * i**C) ** i
        for tag, arr in (("psi", dp.eval_array(xs) if not dp.is_zero() else np.zeros(1)),
                         ("f", chain[i].eval_array(xs))):
            m = float(np.max(np.abs(arr)))
            per[(tag, i)] = m
            ratio = m / allowed
            worst_ratio = max(worst_ratio, ratio)
            if ratio > 1.0 + cfg.ck_tolerance_float:
                ok = False
    return CertificateReport(ok=ok, max_bound=worst_ratio, per_order=per,
                             mode="float", tolerance=cfg.ck_tolerance_float,
                             detail=f"A={A}, C={C}")


def verify_a_chart(fn: FunctionExpr, center: complex, radius: float, K: float,
                   cfg: Config = DEFAULT) -> CertificateReport:
    """Certify |f| <= K on the disk of the given radius about `center` by
    sampling concentric circles (max modulus makes the boundary decisive, the
    inner circles guard against evaluation blowups)."""
    fn = _wrap(fn)
    worst = 0.0
    tol = cfg.ck_tolerance_float
    angles = np.linspace(0.0, 2 * math.pi, cfg.a_chart_angles, endpoint=False)
    for rstep in range(1, cfg.a_chart_radii + 1):
        r = radius * rstep / cfg.a_chart_radii
        for th in angles:
            z = center + r * complex(math.cos(th), math.sin(th))
            v = abs(complex(fn.eval_complex(z)))
            worst = max(worst, v)
    ok = worst <= K * (1.0 + tol)
    return CertificateReport(ok=ok, max_bound=worst, mode="complex",
                             tolerance=tol, detail=f"K={K}, radius={radius}")


def chart_from_affine(f: FunctionExpr, a, b, k: int, meta=None) -> Chart:
    """Chart covering [a, b] with the affine map t -> a + (b - a) t."""
    a, b = _fr(a), _fr(b)
    psi = Poly.affine(b - a, a)
    return Chart(psi=psi, f_comp=_wrap(f).precompose_poly(psi), k=k,
                 image=(a, b), meta=meta or {})
