"""Determinant-method machinery: combinatorial exponents, the interpolation
determinant bound, exact rational-point enumeration on graphs, and the
ball-cover argument putting dilation-t integral points on few low-degree
hypersurfaces.

All point arithmetic and rank tests are exact; floats appear only in
derivative-norm estimation and ball sizing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from .config import DEFAULT, Config
from .errors import CoverTestFailed, InexactCurve
from .funcs import (AddExpr, BlackboxExpr, BranchExpr, ComposeExpr, ConstExpr,
                    FunctionExpr, MulExpr, PowExpr, RationalExpr, SqrtExpr,
                    _sqrt_exact, _wrap)
from .poly import Poly, _fr


def binom(a: int, b: int) -> int:
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def D_table(s: int, l: int) -> int:
    """Dimension of polynomials of degree <= l in s variables."""
    return binom(s + l, s)


def L_table(s: int, l: int) -> int:
    """Dimension of the degree-exactly-l homogeneous layer in s variables."""
    return binom(s + l - 1, s - 1)


@dataclass
class BPCombinatorics:
    n: int
    m: int
    k: int
    e: int
    tau: int = None
    kappa_printed: int = None
    kappa_truncated: int = None

    def kappa(self, variant: str):
        return self.kappa_printed if variant == "as_printed" else self.kappa_truncated

    def epsilon_exponent(self, variant: str = "as_printed") -> Fraction:
        return Fraction(self.kappa(variant) * self.n, self.e)


def bp_combinatorics(n: int, m: int) -> BPCombinatorics:
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    k = 0
    while D_table(n, k + 1) <= m:
        k += 1
    assert D_table(n, k) <= m < D_table(n, k + 1)
    e = sum(L_table(n, l) * l for l in range(k + 1)) + (k + 1) * (m - D_table(n, k))
    return BPCombinatorics(n=n, m=m, k=k, e=e)


def bp_for_degree(n: int, m_ambient: int, d: int) -> BPCombinatorics:
    """Combinatorics for the degree-d hypersurface cover: tau is the monomial
    count in the ambient space, and the exponent table is computed at m = tau."""
    tau = D_table(m_ambient, d)
    base = bp_combinatorics(n, tau)
    base.tau = tau
    base.kappa_printed = sum(L_table(n, l) * l for l in range(tau + 1))
    base.kappa_truncated = sum(L_table(n, l) * l for l in range(base.k + 1))
    return base


# -- interpolation determinant bound ------------------------------------------

def _all_derivative_max(funcs, order: int, lo: float, hi: float,
                        cfg: Config) -> float:
    xs = np.linspace(lo, hi, cfg.mk_samples)
    worst = 0.0
    for f in funcs:
        chain = _wrap(f).derivative_chain(order, cfg)
        for g in chain:
            worst = max(worst, float(np.max(np.abs(g.eval_array(xs)))))
    return worst


def _all_partial_max_2d(polys, order: int, box, cfg: Config) -> float:
    (x0, x1), (y0, y1) = box
    n = int(math.sqrt(cfg.mk_samples)) + 1
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    X, Y = np.meshgrid(xs, ys)
    worst = 0.0
    for p in polys:
        stack = {(0, 0): p}
        for total in range(order + 1):
            for ox in range(total + 1):
                oy = total - ox
                q = stack.get((ox, oy))
                if q is None:
                    src = stack[(ox - 1, oy)] if ox else stack[(ox, oy - 1)]
                    q = src.dx() if ox else src.dy()
                    stack[(ox, oy)] = q
                acc = np.zeros_like(X)
                for (i, j), c in q.coeffs.items():
                    acc += float(c) * X ** i * Y ** j
                worst = max(worst, float(np.max(np.abs(acc))))
    return worst


def vandermonde_bound_check(phi, points, r: float, center=None,
                            n: int = 1, cfg: Config = DEFAULT):
    """Interpolation determinant |det(phi_i(z_j))| against the combinatorial
    bound m! [D_n(k) M_k]^m r^e.  The bound holds for any smooth map and any
    points inside a radius-r ball; a failure indicates an arithmetic bug."""
    m = len(phi)
    if len(points) != m:
        raise ValueError("need exactly m points for an m-component map")
    comb = bp_combinatorics(n, m)
    # M_k is the C^k norm over the whole unit cube, not just the ball
    if n == 1:
        Mk = _all_derivative_max(phi, comb.k, -1.0, 1.0, cfg)
        rows = [[float(_wrap(f).eval(float(z))) for z in points] for f in phi]
    else:
        Mk = _all_partial_max_2d(phi, comb.k, ((-1.0, 1.0), (-1.0, 1.0)), cfg)
        rows = [[float(f(float(z[0]), float(z[1]))) for z in points]
                for f in phi]
    Mk = max(Mk, 1e-300) * cfg.mk_safety
    delta = abs(float(np.linalg.det(np.array(rows, dtype=float))))
    bound = math.factorial(m) * (D_table(n, comb.k) * Mk) ** m * r ** comb.e
    return {"delta": delta, "bound": bound, "pass": delta <= bound,
            "k": comb.k, "e": comb.e, "Mk": Mk}


# -- exact point enumeration --------------------------------------------------

def _eval_exact(f: FunctionExpr, x: Fraction):
    """('rational', value) or ('irrational', None); raises InexactCurve when
    rationality cannot be decided exactly."""
    if isinstance(f, ConstExpr):
        return ("rational", f.c)
    if isinstance(f, RationalExpr):
        return ("rational", f.eval(x))
    if isinstance(f, SqrtExpr):
        kind, v = _eval_exact(f.inner, x)
        if kind == "irrational":
            return ("irrational", None)     # sqrt of an irrational is irrational
        r = _sqrt_exact(v)
        return ("rational", r) if r is not None else ("irrational", None)
    if isinstance(f, PowExpr):
        kind, v = _eval_exact(f.f, x)
        if kind == "rational":
            return ("rational", v ** f.n)
        raise InexactCurve("integer power of an irrational is undecidable here")
    if isinstance(f, MulExpr):
        ka, va = _eval_exact(f.f, x)
        kb, vb = _eval_exact(f.g, x)
        if ka == kb == "rational":
            return ("rational", va * vb)
        if ka == "rational" and va == 0 or kb == "rational" and vb == 0:
            return ("rational", Fraction(0))
        if "rational" in (ka, kb):
            return ("irrational", None)     # nonzero rational times irrational
        raise InexactCurve("product of two irrational values is undecidable")
    if isinstance(f, AddExpr):
        total = Fraction(0)
        irr = 0
        for t in f.terms:
            kind, v = _eval_exact(t, x)
            if kind == "rational":
                total += v
            else:
                irr += 1
        if irr == 0:
            return ("rational", total)
        if irr == 1:
            return ("irrational", None)
        raise InexactCurve("sum of several irrational terms is undecidable")
    raise InexactCurve(f"cannot evaluate {type(f).__name__} exactly")


def enumerate_points(f: FunctionExpr, interval, t: int,
                     cfg: Config = DEFAULT):
    """All (x, f(x)) with x in the interval and t*x, t*f(x) both integers.

    Exact arithmetic, no tolerance: curves that cannot be evaluated exactly
    raise InexactCurve rather than guessing near-integrality."""
    f = _wrap(f)
    lo, hi = _fr(interval[0]), _fr(interval[1])
    a0 = math.ceil(lo * t)
    a1 = math.floor(hi * t)
    if a1 - a0 + 1 > cfg.enumerate_cap:
        raise ValueError("candidate count exceeds enumerate_cap")
    out = []
    for a in range(a0, a1 + 1):
        x = Fraction(a, t)
        kind, y = _eval_exact(f, x)
        if kind == "rational" and (t * y).denominator == 1:
            out.append((x, y))
    return out


def brute_force_points(f: FunctionExpr, interval, t: int):
    """Independent oracle: double loop over numerator candidates for x and y,
    accepting (a/t, b/t) iff f(a/t) == b/t exactly."""
    f = _wrap(f)
    lo, hi = _fr(interval[0]), _fr(interval[1])
    out = []
    for a in range(math.ceil(lo * t), math.floor(hi * t) + 1):
        x = Fraction(a, t)
        try:
            kind, y = _eval_exact(f, x)
        except InexactCurve:
            raise
        if kind != "rational":
            continue
        num = y * t
        for b in range(math.floor(num) - 1, math.ceil(num) + 2):
            if Fraction(b, t) == y:
                out.append((x, y))
                break
    return out


# -- hypersurface cover -------------------------------------------------------

def _monomials(m: int, d: int):
    """Exponent tuples of total degree <= d in m variables, ordered."""
    out = []
    for total in range(d + 1):
        for combo in combinations_with_replacement(range(m), total):
            alpha = [0] * m
            for v in combo:
                alpha[v] += 1
            out.append(tuple(alpha))
    return out


def _exact_rank(rows) -> int:
    """Rank over Q by exact Gaussian elimination."""
    mat = [list(map(Fraction, r)) for r in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    row = 0
    for col in range(cols):
        piv = None
        for r in range(row, len(mat)):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        inv = 1 / mat[row][col]
        for r in range(row + 1, len(mat)):
            if mat[r][col] != 0:
                fct = mat[r][col] * inv
                for c2 in range(col, cols):
                    mat[r][c2] -= fct * mat[row][c2]
        row += 1
        rank += 1
        if row == len(mat):
            break
    return rank


def on_hypersurface(points, d: int, m: int = None) -> bool:
    """True iff all points lie on one algebraic hypersurface of degree <= d:
    the Veronese matrix of the points has rank < tau = D_m(d)."""
    if not points:
        return True
    m = m if m is not None else len(points[0])
    tau = D_table(m, d)
    monos = _monomials(m, d)
    rows = []
    for p in points:
        p = [_fr(c) for c in p]
        row = []
        for alpha in monos:
            v = Fraction(1)
            for c, a in zip(p, alpha):
                v *= c ** a
            row.append(v)
        rows.append(row)
    return _exact_rank(rows) < tau


def hypersurface_cover(f: FunctionExpr, interval, t: int, d: int,
                       cfg: Config = DEFAULT):
    """Cover the parameter interval by balls sized so each ball's dilation-t
    integral points lie on a single degree-d curve; verify per ball by the
    exact rank test."""
    f = _wrap(f)
    lo, hi = float(interval[0]), float(interval[1])
    comb = bp_for_degree(1, 2, d)
    tau, ktil, etil = comb.tau, comb.k, comb.e
    kappa = comb.kappa(cfg.kappa_variant)

    # M_k of the Veronese composition (x, f(x)) -> monomials of degree <= d
    rat = f.as_rational()
    comps = []
    for (i, j) in _monomials(2, d):
        if rat is not None:
            num = Poly([0, 1]) ** i * rat[0] ** j
            den = rat[1] ** j
            comps.append(RationalExpr(num, den))
        else:
            comps.append(MulExpr(PowExpr(RationalExpr(Poly([0, 1])), i),
                                 PowExpr(f, j)))
    Mk = _all_derivative_max(comps, ktil, lo, hi, cfg) * cfg.mk_safety
    Mk = max(Mk, 1.0)

    # solve tau! [D_1(ktil) Mk]^tau rtil^etil < t^(-kappa)
    log_rtil = (-kappa * math.log(t)
                - math.lgamma(tau + 1)
                - tau * math.log(D_table(1, ktil) * Mk)) / etil
    rtil = math.exp(log_rtil) * (1 - 1e-12)
    ball_count = max(1, math.ceil((hi - lo) / rtil)) if rtil > 0 else None
    if ball_count is None or ball_count > 10 ** 9:
        raise ValueError(f"ball count {ball_count} unreasonably large")

    points = enumerate_points(f, interval, t, cfg)
    balls = {}
    for (x, y) in points:
        idx = min(int((float(x) - lo) / rtil), ball_count - 1)
        balls.setdefault(idx, []).append((x, y))
    per_ball = {}
    for idx, pts in sorted(balls.items()):
        ok = on_hypersurface(pts, d, 2)
        per_ball[idx] = {"points": len(pts), "pass": ok}
        if not ok:
            raise CoverTestFailed(
                f"ball {idx} holds {len(pts)} points not on one degree-{d} curve")
    eps_exp = comb.epsilon_exponent(cfg.kappa_variant)
    return {"rtil": rtil, "ball_count": ball_count,
            "occupied_balls": len(balls), "points": len(points),
            "per_ball": per_ball,
            "hypersurface_count": len(balls),
            "bound_exponent": float(eps_exp),
            "epsilon_printed": comb.epsilon_exponent("as_printed"),
            "epsilon_truncated": comb.epsilon_exponent("truncated_at_k"),
            "tau": tau, "k": ktil, "e": etil, "kappa": kappa, "Mk": Mk}
