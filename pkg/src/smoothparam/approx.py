"""Parametric polynomial approximation with complexity accounting.

Two routes: the C^k route (order k = floor(n/sigma) + 1 parametrization,
degree k-1 Taylor patches on subcubes of adaptively chosen side) and the
analytic route (delta-parametrization with delta = eps, degree
floor(log2(1/eps)) + 1 truncations per analytic chart, one degree-0 box per
removed strip).  Complexity of a patch family is the exact integer
sum of d^(n_j) over patches."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .analytic_param import analytic_delta_parametrize
from .charts import Chart
from .ck_param import ck_parametrize_function
from .config import DEFAULT, Config
from .errors import DegreeOverflow
from .funcs import FunctionExpr, RationalExpr, _wrap
from .poly import Poly, _fr


@dataclass
class ApproxPatch:
    dim: int                      # n_j
    degree: int
    coeffs: list                  # per output coordinate: Poly (in t1) or const
    center: tuple
    side: float
    source: str = ""
    sup_error: float = 0.0
    bound: float = 0.0

    @property
    def complexity(self) -> int:
        return self.degree ** self.dim


@dataclass
class Approximation:
    patches: list
    epsilon: float
    route: str
    meta: dict = field(default_factory=dict)

    @property
    def complexity(self) -> int:
        return sum(p.complexity for p in self.patches)


def taylor_polynomial(g: FunctionExpr, d: int, center, cfg: Config = DEFAULT) -> Poly:
    """Degree-d Taylor polynomial of g at `center` (exact for rational g at a
    rational center)."""
    if d > cfg.taylor_degree_cap:
        raise DegreeOverflow(f"degree {d} exceeds cap {cfg.taylor_degree_cap}")
    rat = g.as_rational()
    if rat is not None and isinstance(center, (int, Fraction)):
        return _rational_taylor(rat[0], rat[1], d, _fr(center))
    chain = g.derivative_chain(d, cfg)
    c = _fr(center) if isinstance(center, (int, Fraction)) else center
    coeffs = []
    fact = 1
    for i, gi in enumerate(chain):
        if i > 0:
            fact *= i
        v = gi.eval(c)
        coeffs.append(_fr(v) / fact if isinstance(v, (int, Fraction))
                      else Fraction(v) / fact)
    # shift: p(t) = sum coeffs[i] (t - c)^i
    shifted = Poly([])
    base = Poly.affine(1, -_fr(c) if isinstance(c, (int, Fraction)) else -Fraction(c))
    for i in reversed(range(len(coeffs))):
        shifted = shifted * base + Poly.const(coeffs[i])
    return shifted


def _rational_taylor(num: Poly, den: Poly, d: int, c: Fraction) -> Poly:
    """Exact degree-d Taylor polynomial of num/den at c via power-series
    division (no derivative chain, no gcds)."""
    from .errors import EvaluationAtSingularity
    shift = Poly.affine(1, c)            # t -> t + c
    ns = num.compose(shift).coeffs
    ds = den.compose(shift).coeffs
    if not ds or ds[0] == 0:
        raise EvaluationAtSingularity(f"pole at expansion center {c}")
    q = []
    for j in range(d + 1):
        acc = ns[j] if j < len(ns) else Fraction(0)
        for i in range(j):
            dj = ds[j - i] if j - i < len(ds) else Fraction(0)
            if dj:
                acc -= q[i] * dj
        q.append(acc / ds[0])
    return Poly(q).compose(Poly.affine(1, -c))


def taylor_patch(g: FunctionExpr, d: int, center, halfwidth, route: str,
                 K: float = None, cfg: Config = DEFAULT):
    """(polynomial, remainder bound) for g on [center-halfwidth, center+halfwidth].

    C^k route: measured (d+1)-derivative max times halfwidth^(d+1)/(d+1)!.
    Analytic route: K * 2^(-d) geometric tail from the certified disk bound."""
    p = taylor_polynomial(g, d, center, cfg)
    if route == "analytic":
        if K is None:
            raise ValueError("analytic remainder needs the disk bound K")
        bound = K * 2.0 ** (-d)
    else:
        chain = g.derivative_chain(d + 1, cfg)
        lo, hi = float(center) - float(halfwidth), float(center) + float(halfwidth)
        xs = np.linspace(lo, hi, cfg.patch_samples)
        m = float(np.max(np.abs(chain[d + 1].eval_array(xs))))
        bound = m * float(halfwidth) ** (d + 1) / math.factorial(d + 1)
    return p, bound


def _sampled_error(g: FunctionExpr, p: Poly, lo, hi, n):
    xs = np.linspace(float(lo), float(hi), n)
    return float(np.max(np.abs(g.eval_array(xs) - p.eval_array(xs))))


def ck_approximate(f: FunctionExpr, interval, eps: float, sigma: float,
                   cfg: Config = DEFAULT) -> Approximation:
    """Graph-of-function route over an interval (n = 1)."""
    f = _wrap(f)
    n = 1
    k = int(n / sigma) + 1
    d = max(1, k - 1)
    param = ck_parametrize_function(f, k, interval, cfg)
    patches = []
    for idx, ch in enumerate(param.charts):
        r = eps ** (1.0 / k)
        while True:
            m = max(1, math.ceil(1.0 / r))
            ok = True
            cand = []
            for j in range(m):
                u, v = Fraction(j, m), Fraction(j + 1, m)
                c = (u + v) / 2
                half = (v - u) / 2
                p, bound = taylor_patch(ch.f_comp, d, c, half, "ck", cfg=cfg)
                err = _sampled_error(ch.f_comp, p, u, v, cfg.patch_samples)
                if err > eps:
                    ok = False
                    break
                psi_p = ch.psi  # already polynomial, kept exactly
                cand.append(ApproxPatch(dim=1, degree=d,
                                        coeffs=[psi_p, p],
                                        center=(float(c),), side=float(2 * half),
                                        source=f"chart{idx}", sup_error=err,
                                        bound=bound))
            if ok:
                patches.extend(cand)
                break
            r /= 2
            if r < 1e-9:
                raise DegreeOverflow("subcube side underflow in ck route")
    return Approximation(patches=patches, epsilon=eps, route="ck",
                         meta={"k": k, "d": d, "charts": param.chart_count})


def analytic_approximate(f: FunctionExpr, interval, eps: float,
                         declared_singularities=None,
                         slab: bool = False, g1=None,
                         cfg: Config = DEFAULT) -> Approximation:
    """Analytic route with delta = eps.  With slab=True the patches are 2d:
    phi(t1, t2) = (psi(t1), (1 - t2) g1 + t2 p(t1)) with p the truncation of
    the upper boundary; each removed strip is covered by size-eps boxes of
    degree 0."""
    f = _wrap(f)
    g1 = _wrap(g1 if g1 is not None else 0)
    d0 = int(math.floor(math.log2(1.0 / eps))) + 1
    param = analytic_delta_parametrize(f, _fr(eps).limit_denominator(2**40),
                                       interval,
                                       declared_singularities=declared_singularities,
                                       cfg=cfg, normalize=False)
    patches = []
    for idx, ch in enumerate(param.charts):
        K = ch.meta["K"]
        d = d0
        while True:
            p, bound = taylor_patch(ch.f_comp, d, Fraction(0), 1, "analytic",
                                    K=max(K, 1e-300), cfg=cfg)
            err = _sampled_error(ch.f_comp, p, -1, 1, cfg.patch_samples)
            if err <= eps:
                break
            d += 2
            if d > cfg.taylor_degree_cap:
                raise DegreeOverflow(
                    f"analytic patch on {ch.image} needs degree > cap")
        a, b = ch.image
        c = (float(a) + float(b)) / 2
        if slab:
            patches.append(ApproxPatch(dim=2, degree=d,
                                       coeffs=[ch.psi, p],
                                       center=(c, 0.5), side=float(abs(float(b) - float(a))),
                                       source=f"a-chart{idx}", sup_error=err,
                                       bound=bound))
        else:
            patches.append(ApproxPatch(dim=1, degree=d,
                                       coeffs=[ch.psi, p],
                                       center=(c,), side=float(abs(float(b) - float(a))),
                                       source=f"a-chart{idx}", sup_error=err,
                                       bound=bound))
    # removed strips: degree-0 boxes of size eps
    for (a, b) in param.removed:
        w = float(b - a)
        xs = np.linspace(float(a), float(b), 64)
        try:
            h = float(np.max(np.abs(f.eval_array(xs))))
        except Exception:
            h = 1.0
        if not math.isfinite(h):
            h = 1.0
        h = min(h, 1.0)
        nx = max(1, math.ceil(w / eps))
        ny = max(1, math.ceil(h / eps)) if slab else 1
        for i in range(nx):
            for j in range(ny):
                cx = float(a) + (i + 0.5) * w / nx
                cy = (j + 0.5) * h / ny if slab else float(f.eval(cx)) if h else 0.0
                patches.append(ApproxPatch(dim=2 if slab else 1, degree=1,
                                           coeffs=[Poly.const(Fraction(cx).limit_denominator(2**40)),
                                                   Poly.const(Fraction(cy).limit_denominator(2**40))],
                                           center=(cx, cy) if slab else (cx,),
                                           side=w / nx, source="removed-box",
                                           sup_error=min(w / nx, eps),
                                           bound=eps))
    return Approximation(patches=patches, epsilon=eps, route="analytic",
                         meta={"d0": d0, "delta": eps,
                               "charts": param.chart_count,
                               "removed": len(param.removed), "slab": slab})


def verify_and_score(approx: Approximation, sources: dict = None,
                     cfg: Config = DEFAULT):
    """Re-sample every patch at 4x build resolution against its source chart
    composition; returns {max_error, complexity, per_patch, ok}."""
    per = []
    worst = 0.0
    ok = True
    for p in approx.patches:
        if p.source == "removed-box" or len(p.coeffs) < 2:
            per.append((p.source, p.sup_error))
            worst = max(worst, p.sup_error)
            continue
        src = sources.get(p.source) if sources else None
        if src is None:
            per.append((p.source, p.sup_error))
            worst = max(worst, p.sup_error)
            continue
        lo = p.center[0] - p.side / 2
        hi = p.center[0] + p.side / 2
        err = _sampled_error(src, p.coeffs[1], lo, hi, 4 * cfg.patch_samples)
        per.append((p.source, err))
        worst = max(worst, err)
        if err > approx.epsilon * (1 + 1e-9):
            ok = False
    return {"max_error": worst, "complexity": approx.complexity,
            "per_patch": per, "ok": ok and worst <= approx.epsilon * (1 + 1e-9)}


# -- model comparison helpers --------------------------------------------------

def fit_affine(xs, ys):
    """Least-squares affine fit; returns (slope, intercept, r_squared)."""
    xs, ys = np.asarray(xs, float), np.asarray(ys, float)
    A = np.vstack([xs, np.ones_like(xs)]).T
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - A @ coef
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coef[0]), float(coef[1]), r2


def aic_of_fit(ys, preds, n_params: int) -> float:
    ys, preds = np.asarray(ys, float), np.asarray(preds, float)
    n = len(ys)
    rss = float(np.sum((ys - preds) ** 2))
    rss = max(rss, 1e-300)
    return n * math.log(rss / n) + 2 * n_params


def compare_log_cubic_vs_power(eps_list, complexities, sigmas):
    """AIC of c*(log2 1/eps)^3 against c*(1/eps)^sigma for each sigma.

    Both models have a single scale parameter fit by least squares."""
    eps = np.asarray(eps_list, float)
    ys = np.asarray(complexities, float)
    L = np.log2(1.0 / eps)
    basis = L ** 3
    c_cubic = float(np.dot(basis, ys) / np.dot(basis, basis))
    aic_cubic = aic_of_fit(ys, c_cubic * basis, 1)
    out = {"cubic": {"c": c_cubic, "aic": aic_cubic}}
    for s in sigmas:
        b = (1.0 / eps) ** s
        c = float(np.dot(b, ys) / np.dot(b, b))
        out[f"power_{s}"] = {"c": c, "aic": aic_of_fit(ys, c * b, 1)}
    return out
