"""Exact univariate polynomials over the rationals, plus Sturm-sequence root
isolation.  Everything downstream (charts, resultants, point enumeration)
leans on this module for the cases where the bounds demand exactness."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _fr(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to Fraction")


class Poly:
    """Dense univariate polynomial with Fraction coefficients, low degree first."""

    __slots__ = ("coeffs", "_np")

    def __init__(self, coeffs: Iterable):
        cs = [_fr(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._np = None

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def const(c) -> "Poly":
        return Poly([c])

    @staticmethod
    def x() -> "Poly":
        return Poly([0, 1])

    @staticmethod
    def affine(a, b) -> "Poly":
        """a*x + b"""
        return Poly([b, a])

    # -- basic queries --------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [_ZERO] * (n - len(self.coeffs))
        b = list(other.coeffs) + [_ZERO] * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _fr(other)
            return Poly([a * c for a in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        return self * _fr(c)

    def divmod(self, other: "Poly"):
        """Exact polynomial division with remainder over Q."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        q = [_ZERO] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        d = other.degree
        lead = other.leading()
        while len(r) - 1 >= d and any(c != 0 for c in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            f = r[-1] / lead
            q[k] = f
            for i, c in enumerate(other.coeffs):
                r[k + i] -= f * c
            r.pop()
        return Poly(q), Poly(r)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a * (1 / a.leading())

    # -- calculus -------------------------------------------------------------

    def deriv(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def derivs(self, order: int) -> list:
        out = [self]
        for _ in range(order):
            out.append(out[-1].deriv())
        return out

    def antideriv(self) -> "Poly":
        return Poly([_ZERO] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    # -- evaluation -----------------------------------------------------------

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            return self.eval_array(x)
        acc = _ZERO if isinstance(x, (Fraction, int)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def as_float_coeffs(self) -> np.ndarray:
        if self._np is None:
            self._np = np.array([float(c) for c in self.coeffs], dtype=float)
        return self._np

    def eval_array(self, xs: np.ndarray):
        cs = self.as_float_coeffs()
        if len(cs) == 0:
            return np.zeros_like(xs)
        acc = np.full_like(xs, cs[-1])
        for c in cs[-2::-1]:
            acc = acc * xs + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(x)), exact."""
        acc = Poly([])
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def shift_scale_arg(self, a, b) -> "Poly":
        """p(a*x + b)"""
        return self.compose(Poly.affine(a, b))

    def max_abs_on_grid(self, lo: float, hi: float, n: int) -> float:
        xs = np.linspace(lo, hi, n)
        return float(np.max(np.abs(self.eval_array(xs)))) if self.coeffs else 0.0


def _int_scaled(p: Poly, N: int):
    """Integer data for gcd-free grid evaluation: D_j = L*c_j*N^(n-j) with L
    the common denominator, so p(i/N) = Horner(D, i) / (L * N^n)."""
    n = p.degree
    if n < 0:
        return [0], 1
    L = 1
    for c in p.coeffs:
        L = L * c.denominator // math_gcd(L, c.denominator)
    D = []
    pw = 1
    scaled = [int(c * L) for c in p.coeffs]
    for j in range(n, -1, -1):
        D.append(scaled[j] * pw)
        if j > 0:
            pw *= N
    D.reverse()
    return D, L * N ** n


def math_gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _horner_int(D, i):
    acc = D[-1]
    for c in D[-2::-1]:
        acc = acc * i + c
    return acc


def max_abs_on_rational_grid(p: Poly, N: int) -> Fraction:
    """max |p(i/N)| over i = 0..N, exact, via integer Horner."""
    D, scale = _int_scaled(p, N)
    best = 0
    for i in range(N + 1):
        v = abs(_horner_int(D, i))
        if v > best:
            best = v
    return Fraction(best, scale)


def max_abs_ratio_on_grid(num: Poly, den: Poly, N: int) -> Fraction:
    """max |num(i/N) / den(i/N)| over i = 0..N (grid points where den
    vanishes are skipped), exact."""
    Dn, sn = _int_scaled(num, N)
    Dd, sd = _int_scaled(den, N)
    bn, bd = 0, 1        # running best as a nonnegative integer ratio
    for i in range(N + 1):
        b = _horner_int(Dd, i)
        if b == 0:
            continue
        a = abs(_horner_int(Dn, i))
        b = abs(b)
        # compare (a*sd)/(b*sn) against bn/bd by cross-multiplication
        if a * sd * bd > bn * b * sn:
            bn, bd = a * sd, b * sn
    return Fraction(bn, bd)


# -- Sturm sequences ----------------------------------------------------------

def sturm_chain(p: Poly) -> list:
    """Canonical Sturm chain of a squarefree-or-not polynomial."""
    if p.is_zero():
        return [p]
    chain = [p, p.deriv()]
    while chain[-1].degree > 0:
        rem = chain[-2] % chain[-1]
        if rem.is_zero():
            break
        chain.append(-rem)
    return [q for q in chain if not q.is_zero()]


def _sign_variations(chain: Sequence[Poly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = q(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Poly, lo, hi) -> int:
    """Number of distinct real roots of p in (lo, hi], exact Sturm count."""
    lo, hi = _fr(lo), _fr(hi)
    sf = squarefree_part(p)
    chain = sturm_chain(sf)
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def squarefree_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return p
    g = p.gcd(p.deriv())
    if g.degree <= 0:
        return p
    return p // g


def isolate_roots(p: Poly, lo, hi, refine_to: Fraction = Fraction(1, 2**40)):
    """Disjoint isolating intervals, one per distinct real root of p in [lo, hi].

    Endpoint roots are reported as degenerate [r, r] intervals.  Intervals are
    bisected down to width <= refine_to so callers can use midpoints as
    subdivision points.
    """
    lo, hi = _fr(lo), _fr(hi)
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if p.degree <= 0 or hi <= lo:
        return []
    sf = squarefree_part(p)
    chain = sturm_chain(sf)
    out = []

    def var(x):
        return _sign_variations(chain, x)

    def count(a, b):
        # roots in the half-open interval (a, b]
        return var(a) - var(b)

    def nudge_right(x, limit):
        # smallest convenient eps with no root in (x, x+eps]
        eps = (limit - x) / 1024
        while count(x, x + eps) > 0:
            eps /= 2
        return x + eps

    def nudge_left(x, limit):
        eps = (x - limit) / 1024
        while count(x - eps, x) > (1 if sf(x) == 0 else 0):
            eps /= 2
        return x - eps

    a0, b0 = lo, hi
    if sf(lo) == 0:
        out.append((lo, lo))
        a0 = nudge_right(lo, hi)
    if sf(hi) == 0:
        out.append((hi, hi))
        b0 = nudge_left(hi, lo)
    if b0 <= a0:
        out.sort()
        return out

    # invariant: stacked intervals have non-root endpoints
    stack = [(a0, b0)]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n <= 0:
            continue
        if n == 1:
            out.append(_refine_interval(sf, a, b, refine_to))
            continue
        m = (a + b) / 2
        if sf(m) == 0:
            out.append((m, m))
            stack.append((a, nudge_left(m, a)))
            stack.append((nudge_right(m, b), b))
        else:
            stack.append((a, m))
            stack.append((m, b))
    out.sort()
    return out


def _refine_interval(sf: Poly, a: Fraction, b: Fraction, width: Fraction):
    fa = sf(a)
    while b - a > width:
        m = (a + b) / 2
        fm = sf(m)
        if fm == 0:
            return (m, m)
        if (fa > 0) != (fm > 0):
            b = m
        else:
            a, fa = m, fm
    return (a, b)


def roots_in_interval(p: Poly, lo, hi, refine_to=Fraction(1, 2**40)):
    """Rational midpoints of the isolating intervals (exact for endpoint hits)."""
    return [(a + b) / 2 for a, b in isolate_roots(p, lo, hi, refine_to)]


# -- numeric root finding (complex) -------------------------------------------

def complex_roots(p: Poly):
    """All complex roots via the companion matrix, Newton-polished, with a
    residual-based error radius per root."""
    cs = p.as_float_coeffs()
    if len(cs) <= 1:
        return []
    rts = np.roots(cs[::-1])
    dp = p.deriv()
    out = []
    for z in rts:
        z = complex(z)
        for _ in range(8):
            d = complex(dp(z))
            if d == 0:
                break
            step = complex(p(z)) / d
            if abs(step) < 1e-16 * max(1.0, abs(z)):
                z -= step
                break
            z -= step
        resid = abs(complex(p(z)))
        d = abs(complex(dp(z)))
        radius = p.degree * resid / d if d > 1e-300 else 1e-6
        radius = max(radius, 1e-14 * max(1.0, abs(z)))
        out.append((z, radius))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out


def lagrange_interpolate(points) -> Poly:
    """Exact Lagrange interpolation through rational (x, y) pairs."""
    result = Poly([])
    pts = [(_fr(x), _fr(y)) for x, y in points]
    for i, (xi, yi) in enumerate(pts):
        term = Poly.const(yi)
        for j, (xj, _) in enumerate(pts):
            if i == j:
                continue
            term = term * Poly.affine(Fraction(1, 1) / (xi - xj), -xj / (xi - xj))
        result = result + term
    return result
