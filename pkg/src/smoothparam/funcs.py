"""Function classes every pipeline consumes: exact rational closed forms,
radical/composition trees, algebraic branches of P(x, y) = 0 tracked by
continuation, and blackboxes with declared zero-count bounds.

Symbolic differentiation is closed on the tree; rational subtrees are kept
collapsed to num/den pairs so high-order derivatives stay cheap and exact."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .bivar import BivarPoly, BivarRational, resultant_y
from .config import DEFAULT, Config
from .errors import (BranchJump, DegenerateInY, EvaluationAtSingularity,
                     OrderOverflow, PathNearSingularity, ZeroCountMismatch)
from .poly import Poly, _fr, complex_roots, isolate_roots


def _is_exact(x):
    return isinstance(x, (Fraction, int))


def _sqrt_exact(v: Fraction):
    """Rational square root if it exists, else None."""
    if v < 0:
        raise ValueError("sqrt of negative value")
    n, d = v.numerator, v.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class FunctionExpr:
    """Base class.  Subclasses implement eval/eval_complex/deriv."""

    domain = None  # optional (lo, hi)

    def deriv(self) -> "FunctionExpr":
        raise NotImplementedError

    def eval(self, x):
        raise NotImplementedError

    def eval_complex(self, z):
        raise NotImplementedError

    def eval_array(self, xs: np.ndarray) -> np.ndarray:
        return np.array([float(self.eval(float(x))) for x in xs])

    def size(self) -> int:
        return 1

    def as_rational(self):
        """(num, den) Poly pair when the expression is globally rational."""
        return None

    def precompose_poly(self, h: Poly) -> "FunctionExpr":
        """self(h(t)) as a new expression."""
        rat = self.as_rational()
        if rat is not None:
            num, den = rat
            return RationalExpr(num.compose(h), den.compose(h))
        return ComposeExpr(self, RationalExpr(h, Poly([1])))

    def with_domain(self, lo, hi):
        self.domain = (lo, hi)
        return self

    # derivative chain with caching
    def derivative_chain(self, order: int, cfg: Config = DEFAULT):
        chain = getattr(self, "_chain", [self])
        while len(chain) <= order:
            nxt = chain[-1].deriv()
            if nxt.size() > cfg.expr_size_cap:
                raise OrderOverflow(
                    f"expression size {nxt.size()} exceeds cap at order {len(chain)}")
            chain.append(nxt)
        self._chain = chain
        return chain[: order + 1]


class RationalExpr(FunctionExpr):
    """num(x)/den(x) with exact rational coefficients."""

    def __init__(self, num: Poly, den: Poly = None):
        self.num = num
        self.den = den if den is not None else Poly([1])
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")

    @staticmethod
    def from_poly(p) -> "RationalExpr":
        return RationalExpr(p if isinstance(p, Poly) else Poly(p))

    def __repr__(self):
        return f"RationalExpr({self.num!r}, {self.den!r})"

    def is_poly(self):
        return self.den.degree == 0

    def as_rational(self):
        return (self.num, self.den)

    def size(self):
        return self.num.degree + self.den.degree + 2

    def deriv(self):
        if self.is_poly():
            return RationalExpr(self.num.deriv() * (1 / self.den.coeffs[0]))
        n = self.num.deriv() * self.den - self.num * self.den.deriv()
        d = self.den * self.den
        g = n.gcd(d)
        if g.degree > 0:
            n, d = n // g, d // g
        return RationalExpr(n, d)

    def eval(self, x):
        if _is_exact(x):
            dv = self.den(_fr(x))
            if dv == 0:
                raise EvaluationAtSingularity(f"pole at {x}")
            return self.num(_fr(x)) / dv
        dv = self.den(float(x))
        if dv == 0:
            raise EvaluationAtSingularity(f"pole at {x}")
        return self.num(float(x)) / dv

    def eval_complex(self, z):
        z = complex(z)
        dv = complex(self.den(z))
        if dv == 0:
            raise EvaluationAtSingularity(f"pole at {z}")
        return complex(self.num(z)) / dv

    def eval_array(self, xs):
        return self.num.eval_array(xs) / self.den.eval_array(xs)

    def real_poles(self, lo, hi):
        if self.den.degree <= 0:
            return []
        from .poly import roots_in_interval
        return roots_in_interval(self.den, lo, hi)


class SqrtExpr(FunctionExpr):
    def __init__(self, inner: FunctionExpr):
        self.inner = inner

    def size(self):
        return self.inner.size() + 1

    def deriv(self):
        # (sqrt f)' = f' / (2 sqrt f)
        return MulExpr(self.inner.deriv(),
                       PowExpr(self, -1)) * Fraction(1, 2)

    def __mul__(self, c):
        return MulExpr(self, ConstExpr(c))

    def eval(self, x):
        v = self.inner.eval(x)
        if _is_exact(v):
            r = _sqrt_exact(_fr(v))
            if r is not None:
                return r
            return math.sqrt(float(v))
        return math.sqrt(v)

    def eval_complex(self, z):
        return complex(self.inner.eval_complex(z)) ** 0.5

    def eval_array(self, xs):
        return np.sqrt(self.inner.eval_array(xs))


class ConstExpr(FunctionExpr):
    def __init__(self, c):
        self.c = _fr(c)

    def deriv(self):
        return ConstExpr(0)

    def as_rational(self):
        return (Poly([self.c]), Poly([1]))

    def eval(self, x):
        return self.c if _is_exact(x) else float(self.c)

    def eval_complex(self, z):
        return complex(float(self.c))

    def eval_array(self, xs):
        return np.full_like(xs, float(self.c))


def _wrap(f):
    if isinstance(f, FunctionExpr):
        return f
    if isinstance(f, Poly):
        return RationalExpr(f)
    return ConstExpr(f)


class AddExpr(FunctionExpr):
    def __init__(self, *terms):
        self.terms = [_wrap(t) for t in terms]

    def size(self):
        return 1 + sum(t.size() for t in self.terms)

    def deriv(self):
        return simplify(AddExpr(*[t.deriv() for t in self.terms]))

    def eval(self, x):
        return sum(t.eval(x) for t in self.terms)

    def eval_complex(self, z):
        return sum(t.eval_complex(z) for t in self.terms)

    def eval_array(self, xs):
        acc = np.zeros_like(xs)
        for t in self.terms:
            acc = acc + t.eval_array(xs)
        return acc


class MulExpr(FunctionExpr):
    def __init__(self, f, g):
        self.f, self.g = _wrap(f), _wrap(g)

    def __mul__(self, c):
        return MulExpr(self, ConstExpr(c))

    def size(self):
        return 1 + self.f.size() + self.g.size()

    def deriv(self):
        return simplify(AddExpr(MulExpr(self.f.deriv(), self.g),
                                MulExpr(self.f, self.g.deriv())))

    def eval(self, x):
        return self.f.eval(x) * self.g.eval(x)

    def eval_complex(self, z):
        return self.f.eval_complex(z) * self.g.eval_complex(z)

    def eval_array(self, xs):
        return self.f.eval_array(xs) * self.g.eval_array(xs)


class PowExpr(FunctionExpr):
    """f ** n for integer n (negative allowed)."""

    def __init__(self, f, n: int):
        self.f, self.n = _wrap(f), int(n)

    def size(self):
        return 1 + self.f.size()

    def deriv(self):
        return simplify(MulExpr(MulExpr(ConstExpr(self.n), PowExpr(self.f, self.n - 1)),
                                self.f.deriv()))

    def eval(self, x):
        v = self.f.eval(x)
        if self.n < 0 and v == 0:
            raise EvaluationAtSingularity("zero base with negative power")
        if _is_exact(v):
            return _fr(v) ** self.n
        return float(v) ** self.n

    def eval_complex(self, z):
        return complex(self.f.eval_complex(z)) ** self.n

    def eval_array(self, xs):
        return self.f.eval_array(xs) ** self.n


class ComposeExpr(FunctionExpr):
    def __init__(self, outer, inner):
        self.outer, self.inner = _wrap(outer), _wrap(inner)

    def size(self):
        return 1 + self.outer.size() + self.inner.size()

    def deriv(self):
        return simplify(MulExpr(ComposeExpr(self.outer.deriv(), self.inner),
                                self.inner.deriv()))

    def eval(self, x):
        return self.outer.eval(self.inner.eval(x))

    def eval_complex(self, z):
        return self.outer.eval_complex(self.inner.eval_complex(z))

    def eval_array(self, xs):
        return self.outer.eval_array(self.inner.eval_array(xs))


def simplify(e: FunctionExpr) -> FunctionExpr:
    """Collapse rational subtrees into a single num/den pair."""
    if isinstance(e, AddExpr):
        terms = [simplify(t) for t in e.terms]
        rats = [t for t in terms if t.as_rational() is not None]
        rest = [t for t in terms if t.as_rational() is None]
        if rats:
            num, den = Poly([]), Poly([1])
            for t in rats:
                tn, td = t.as_rational()
                num, den = num * td + tn * den, den * td
            combined = RationalExpr(num, den)
            if not rest:
                return combined
            terms = rest + ([] if (num.is_zero()) else [combined])
            if len(terms) == 1:
                return terms[0]
        return AddExpr(*terms)
    if isinstance(e, MulExpr):
        f, g = simplify(e.f), simplify(e.g)
        rf, rg = f.as_rational(), g.as_rational()
        if rf is not None and rg is not None:
            return RationalExpr(rf[0] * rg[0], rf[1] * rg[1])
        if rf is not None and rf[0].is_zero():
            return ConstExpr(0)
        if rg is not None and rg[0].is_zero():
            return ConstExpr(0)
        return MulExpr(f, g)
    if isinstance(e, ComposeExpr):
        outer, inner = simplify(e.outer), simplify(e.inner)
        ro, ri = outer.as_rational(), inner.as_rational()
        if ro is not None and ri is not None and ri[1].degree == 0:
            h = ri[0] * (1 / ri[1].coeffs[0])
            return RationalExpr(ro[0].compose(h), ro[1].compose(h))
        return ComposeExpr(outer, inner)
    return e


def scale_shift(f: FunctionExpr, a, b) -> FunctionExpr:
    """a * f + b, staying rational when f is."""
    a, b = _fr(a), _fr(b)
    rat = f.as_rational()
    if rat is not None:
        num, den = rat
        return RationalExpr(num * a + den * b, den)
    return simplify(AddExpr(MulExpr(ConstExpr(a), f), ConstExpr(b)))


# -- algebraic branches -------------------------------------------------------

class SingularityData:
    """Complex singular points of an algebraic function with real projections."""

    def __init__(self, points, radii, sources, valency=None):
        self.points = list(points)          # complex
        self.radii = list(radii)            # error radii
        self.sources = list(sources)        # strings
        self.real_projections = [z.real for z in self.points]
        self.valency = valency              # optional (p1, p2, n) metadata

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"SingularityData({self.points})"


def singular_locus(P: BivarPoly) -> SingularityData:
    """Roots of Res_y(P, dP/dy) plus roots of the leading y-coefficient."""
    if P.degy <= 0:
        raise DegenerateInY("P has degree 0 in y")
    points, radii, sources = [], [], []
    res = resultant_y(P, P.dy())
    if not res.is_zero():
        for z, r in complex_roots(res):
            points.append(z)
            radii.append(r)
            sources.append("discriminant root")
    lead = P.leading_coeff_in_y()
    if lead.degree > 0:
        for z, r in complex_roots(lead):
            points.append(z)
            radii.append(r)
            sources.append("leading-coefficient root")
    elif lead.is_zero():  # pragma: no cover - cannot happen with degy set
        pass
    # dedupe nearby points
    keep = []
    for i, z in enumerate(points):
        dup = False
        for j in keep:
            if abs(points[j] - z) <= max(radii[i], radii[j], 1e-10):
                dup = True
                break
        if not dup:
            keep.append(i)
    return SingularityData([points[i] for i in keep],
                           [radii[i] for i in keep],
                           [sources[i] for i in keep])


class BranchTracker:
    """Continuation bookkeeping for one branch of P(x, y) = 0, seeded at a
    point on the curve.  Real-axis values are cached so repeated grid
    evaluations walk from the nearest known point."""

    def __init__(self, P: BivarPoly, seed, cfg: Config = DEFAULT):
        self.P = P
        self.seed = (complex(seed[0]), complex(seed[1]))
        self.cfg = cfg
        self.singularities = singular_locus(P)
        r = abs(complex(P.eval_complex(*self.seed)))
        if r > cfg.continuation_residual:
            raise ValueError(f"seed not on curve, residual {r:.3g}")
        self._real_cache = {self.seed[0].real: self.seed[1]}

    def _roots_at(self, z: complex):
        cs = self.P.y_poly_coeffs_complex(z)
        cs = np.trim_zeros(cs, trim="b")
        if len(cs) <= 1:
            return []
        return list(np.roots(cs[::-1]))

    def _min_sing_dist(self, z: complex):
        if not self.singularities.points:
            return math.inf
        return min(abs(z - s) for s in self.singularities.points)

    def _newton(self, z, w0):
        cs = self.P.y_poly_coeffs_complex(z)
        dcs = cs[1:] * np.arange(1, len(cs))
        w = w0
        for _ in range(50):
            pv = np.polyval(cs[::-1], w)
            dv = np.polyval(dcs[::-1], w) if len(dcs) else 0
            if dv == 0:
                return None
            step = pv / dv
            w = w - step
            if abs(step) <= 1e-15 * max(1.0, abs(w)):
                break
        if abs(np.polyval(cs[::-1], w)) > self.cfg.continuation_residual:
            return None
        return w

    def _advance(self, z0, w0, z1):
        """Track from (z0, w0) to x = z1; returns w1."""
        cfg = self.cfg
        z, w = z0, w0
        remaining = z1 - z
        while abs(remaining) > 0:
            d = self._min_sing_dist(z)
            step_len = min(abs(remaining), max(d / 2, cfg.continuation_step_floor))
            step = remaining / abs(remaining) * step_len
            ok = False
            while not ok:
                zn = z + step
                if self._min_sing_dist(zn) < 10 * cfg.continuation_step_floor:
                    raise PathNearSingularity(f"path within floor of singularity at {zn}")
                wn = self._newton(zn, w)
                if wn is not None:
                    # guard against converging to a different sheet
                    others = [r for r in self._roots_at(zn) if abs(r - wn) > 1e-12]
                    near = min((abs(r - wn) for r in others), default=math.inf)
                    if abs(wn - w) <= 0.5 * near or abs(wn - w) <= abs(step):
                        ok = True
                    else:
                        wn = None
                if not ok:
                    if abs(step) / 2 < cfg.continuation_step_floor:
                        raise BranchJump(
                            f"corrector lost the branch near x = {zn}")
                    step /= 2
            z, w = z + step, wn
            remaining = z1 - z
        return w

    def eval_real(self, x):
        xf = float(x)
        if xf in self._real_cache:
            return self._real_cache[xf]
        near = min(self._real_cache, key=lambda t: abs(t - xf))
        w = self._advance(complex(near), self._real_cache[near], complex(xf))
        if len(self._real_cache) < 100_000:
            self._real_cache[xf] = w
        return w

    def eval_path(self, path):
        """Values of the branch along an explicit complex path (list of points).
        The path must start reachable from the seed."""
        out = []
        z0, w0 = self.seed
        z, w = z0, w0
        for p in path:
            w = self._advance(z, w, complex(p))
            z = complex(p)
            out.append(w)
        return out


class BranchExpr(FunctionExpr):
    """One real branch of P(x, y) = 0, optionally composed with the implicit
    derivative calculus: value = rat(x, g(x))."""

    def __init__(self, P: BivarPoly, seed, rat: BivarRational = None,
                 tracker: BranchTracker = None, cfg: Config = DEFAULT):
        self.P = P
        self.seed = seed
        self.rat = rat  # None means the branch value itself
        self.tracker = tracker or BranchTracker(P, seed, cfg)

    def size(self):
        if self.rat is None:
            return 4
        return 2 + len(self.rat.num.coeffs) + len(self.rat.den.coeffs)

    def deriv(self):
        base = self.rat or BivarRational.from_poly(BivarPoly({(0, 1): 1}))
        return BranchExpr(self.P, self.seed, base.implicit_deriv(self.P),
                          tracker=self.tracker)

    def eval(self, x):
        w = self.tracker.eval_real(x)
        if abs(w.imag) > 1e-8:
            raise EvaluationAtSingularity(
                f"branch left the real line at x = {x} (w = {w})")
        if self.rat is None:
            return w.real
        return self.rat(float(x), w.real)

    def eval_complex(self, z):
        w = self.tracker._advance(*self.tracker.seed, complex(z))
        if self.rat is None:
            return w
        return self.rat.eval_complex(complex(z), w)

    def eval_array(self, xs):
        order = np.argsort(xs)
        out = np.empty_like(xs, dtype=float)
        for i in order:
            out[i] = self.eval(float(xs[i]))
        return out


class BlackboxExpr(FunctionExpr):
    """Opaque evaluator with a declared zero-count bound N for itself and its
    derivatives up to `max_order` (unverifiable; carried as metadata)."""

    def __init__(self, fn, zero_count: int, max_order: int = 3,
                 deriv_fns=None, declared_singularities=None, valency=None,
                 _level=0):
        self.fn = fn
        self.zero_count = zero_count
        self.max_order = max_order
        self.deriv_fns = deriv_fns or []
        self.declared_singularities = declared_singularities or []
        self.valency = valency
        self._level = _level

    def size(self):
        return 2

    def deriv(self):
        if self._level < len(self.deriv_fns):
            nxt = BlackboxExpr(self.deriv_fns[self._level], self.zero_count,
                               self.max_order, self.deriv_fns,
                               self.declared_singularities, self.valency,
                               _level=self._level + 1)
            return nxt
        base = self.fn if self._level == 0 else self.fn
        h = 1e-5
        f = self.fn
        return BlackboxExpr(lambda x: (f(x + h) - f(x - h)) / (2 * h),
                            self.zero_count, self.max_order,
                            declared_singularities=self.declared_singularities,
                            valency=self.valency, _level=self._level + 1)

    def eval(self, x):
        return self.fn(float(x))

    def eval_complex(self, z):
        return self.fn(complex(z))

    def eval_array(self, xs):
        return np.array([self.fn(float(x)) for x in xs])


# -- the poly_core operations -------------------------------------------------

def evaluate_derivatives(f: FunctionExpr, x, order: int, cfg: Config = DEFAULT):
    """[f(x), f'(x), ..., f^(order)(x)].  Exact for rational f at rational x."""
    chain = f.derivative_chain(order, cfg)
    return [g.eval(x) for g in chain]


def isolate_real_zeros(f: FunctionExpr, interval, cfg: Config = DEFAULT):
    """Disjoint isolating intervals for the real zeros of f on the interval.

    Sturm-exact for rational f; sampled sign-change bisection otherwise, with
    the declared zero count as a completeness check for blackboxes."""
    lo, hi = interval
    rat = f.as_rational()
    if rat is not None:
        num, den = rat
        if num.is_zero():
            raise ValueError("identically zero function")
        pole_set = set()
        if den.degree > 0:
            pole_set = {(a, b) for a, b in isolate_roots(den, lo, hi)}
        zeros = isolate_roots(num, _fr(lo), _fr(hi))
        return [z for z in zeros if z not in pole_set]
    # sampled bisection
    n = max(16, int(cfg.bisect_samples_per_unit * (float(hi) - float(lo))))
    xs = np.linspace(float(lo), float(hi), n + 1)
    vals = f.eval_array(xs)
    out = []
    for i in range(n):
        a, b, va, vb = xs[i], xs[i + 1], vals[i], vals[i + 1]
        if va == 0:
            out.append((a, a))
            continue
        if va * vb < 0:
            for _ in range(60):
                m = 0.5 * (a + b)
                vm = float(f.eval(m))
                if vm == 0:
                    a = b = m
                    break
                if va * vm < 0:
                    b, vb = m, vm
                else:
                    a, va = m, vm
            out.append((a, b))
    if vals[-1] == 0:
        out.append((xs[-1], xs[-1]))
    if isinstance(f, BlackboxExpr) and len(out) > f.zero_count:
        raise ZeroCountMismatch(
            f"found {len(out)} sign changes, declared bound {f.zero_count}")
    return out


def branch_continuation(P: BivarPoly, seed, path, cfg: Config = DEFAULT):
    """Values of the algebraic branch through `seed` along `path`."""
    return BranchTracker(P, seed, cfg).eval_path(path)


def hyperbola_branch(eps) -> RationalExpr:
    """g(x) = -eps^2 / x, the running example branch of x*y = eps^2."""
    e = _fr(eps)
    return RationalExpr(Poly([-e * e]), Poly([0, 1]))
