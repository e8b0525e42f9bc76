"""Curve models over F_p: hyperelliptic y^2 = f(x) and smooth plane curves,
their rational points, divisors, function elements and valuations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import (
    Poly,
    _check_modulus,
    hensel_root,
    ser_inv,
    is_square,
    is_squarefree,
    roots_in_field,
    ser_mul,
    ser_sqrt,
    series_expand,
    sqrt_mod,
)

__all__ = [
    "PointRef",
    "Divisor",
    "FunctionElem",
    "CurveModel",
    "HyperellipticCurve",
    "PlaneCurve",
    "make_hyperelliptic",
    "make_plane",
    "canonical_divisor",
    "g12_divisor",
    "valuation",
    "divisor_of",
    "enumerate_points",
    "random_divisor",
    "rng_for",
]


def rng_for(seed: int, *counter: int) -> np.random.Generator:
    """Counter-based stream: the same (seed, counter) always yields the same draws."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(counter)))


@dataclass(frozen=True, order=True)
class PointRef:
    """A rational point. kind 'a' carries affine (x, y) for hyperelliptic
    models or normalized projective (X, Y, Z) for plane models; kind 'i'
    is a hyperelliptic infinity branch with coords (index,)."""

    kind: str
    coords: tuple[int, ...]

    def __repr__(self) -> str:
        if self.kind == "i":
            return f"inf{self.coords[0]}" if self.coords[0] else "inf"
        return "(" + ",".join(map(str, self.coords)) + ")"


class Divisor:
    """Finite integer combination of rational points."""

    __slots__ = ("items", "_hash")

    def __init__(self, mapping: Mapping[PointRef, int] | Iterable[tuple[PointRef, int]] = ()):
        acc: dict[PointRef, int] = {}
        it = mapping.items() if isinstance(mapping, Mapping) else mapping
        for P, n in it:
            acc[P] = acc.get(P, 0) + int(n)
        self.items: tuple[tuple[PointRef, int], ...] = tuple(
            sorted((P, n) for P, n in acc.items() if n))
        self._hash = hash(self.items)

    @classmethod
    def point(cls, P: PointRef, n: int = 1) -> Divisor:
        return cls({P: n})

    @classmethod
    def sum_points(cls, pts: Iterable[PointRef]) -> Divisor:
        return cls((P, 1) for P in pts)

    @property
    def degree(self) -> int:
        return sum(n for _, n in self.items)

    @property
    def support(self) -> list[PointRef]:
        return [P for P, _ in self.items]

    def coef(self, P: PointRef) -> int:
        for Q, n in self.items:
            if Q == P:
                return n
        return 0

    def as_dict(self) -> dict[PointRef, int]:
        return dict(self.items)

    def positive(self) -> Divisor:
        return Divisor((P, n) for P, n in self.items if n > 0)

    def negative(self) -> Divisor:
        return Divisor((P, -n) for P, n in self.items if n < 0)

    def is_effective(self) -> bool:
        return all(n > 0 for _, n in self.items)

    def is_zero(self) -> bool:
        return not self.items

    def __add__(self, other: Divisor) -> Divisor:
        return Divisor(self.items + other.items)

    def __neg__(self) -> Divisor:
        return Divisor((P, -n) for P, n in self.items)

    def __sub__(self, other: Divisor) -> Divisor:
        return self + (-other)

    def __mul__(self, k: int) -> Divisor:
        return Divisor((P, k * n) for P, n in self.items)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self.items == other.items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if not self.items:
            return "0"
        return " + ".join(f"{n}*{P!r}" if n != 1 else repr(P) for P, n in self.items)


Mono = tuple[int, ...]


class FunctionElem:
    """Quotient of two polynomials in the model's coordinates.

    Hyperelliptic models use variables (x, y) with numerator a0(x) + a1(x) y
    and denominator d(x). Plane models use homogeneous forms in (X, Y, Z) of
    equal degree.
    """

    __slots__ = ("num", "den", "p")

    def __init__(self, num: Mapping[Mono, int], den: Mapping[Mono, int], p: int):
        self.num = {m: c % p for m, c in num.items() if c % p}
        self.den = {m: c % p for m, c in den.items() if c % p}
        self.p = p
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def from_polys(cls, nums: Sequence[Poly], den: Poly) -> FunctionElem:
        """(sum_i nums[i](x) y^i) / den(x)."""
        p = den.p
        num = {(k, i): c for i, a in enumerate(nums) for k, c in enumerate(a.c) if c}
        return cls(num, {(k, 0): c for k, c in enumerate(den.c) if c}, p)

    @classmethod
    def constant(cls, c: int, p: int, nvars: int = 2) -> FunctionElem:
        z = (0,) * nvars
        return cls({z: c}, {z: 1}, p)

    def is_zero(self) -> bool:
        return not self.num

    def numerator_polys(self) -> list[Poly]:
        """Coefficients a_i(x) of y^i (two-variable elements only)."""
        deg_y = max((m[1] for m in self.num), default=0)
        out = []
        for j in range(deg_y + 1):
            top = max((m[0] for m in self.num if m[1] == j), default=-1)
            out.append(Poly([self.num.get((i, j), 0) for i in range(top + 1)], self.p))
        return out

    def denominator_poly(self) -> Poly:
        top = max(m[0] for m in self.den)
        return Poly([self.den.get((i, 0), 0) for i in range(top + 1)], self.p)

    def __repr__(self) -> str:
        return f"FunctionElem(num={self.num}, den={self.den})"


def _pmul(a: Mapping[Mono, int], b: Mapping[Mono, int], p: int) -> dict[Mono, int]:
    out: dict[Mono, int] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(u + v for u, v in zip(m1, m2))
            out[m] = (out.get(m, 0) + c1 * c2) % p
    return {m: c for m, c in out.items() if c}


def _padd(a: Mapping[Mono, int], b: Mapping[Mono, int], p: int, sb: int = 1) -> dict[Mono, int]:
    out = dict(a)
    for m, c in b.items():
        out[m] = (out.get(m, 0) + sb * c) % p
    return {m: c for m, c in out.items() if c}


# Laurent series: (v, coeffs) meaning t^v * (coeffs[0] + coeffs[1] t + ...),
# known to relative precision len(coeffs).

def _strip(v: int, c: list[int]) -> tuple[int, list[int]] | None:
    k = 0
    while k < len(c) and c[k] == 0:
        k += 1
    if k == len(c):
        return None
    return v + k, c[k:]


class CurveModel:
    """Common interface; concrete models provide local coordinates."""

    p: int
    genus: int
    kind: str
    nvars: int

    def points(self) -> list[PointRef]:
        raise NotImplementedError

    def coord_series(self, P: PointRef, R: int) -> tuple[tuple[int, ...], tuple[list[int], ...]]:
        """Valuations and unit parts of the coordinate functions at P."""
        raise NotImplementedError

    def _power_table(self, P: PointRef, R: int):
        key = (P, R)
        cache = self.__dict__.setdefault("_ptab", {})
        if key not in cache:
            if len(cache) > 4096:
                cache.clear()
            vals, units = self.coord_series(P, R)
            cache[key] = (vals, units, [[[1] + [0] * (R - 1)] for _ in units])
        return cache[key]

    def monomial_series(self, P: PointRef, mono: Mono, R: int) -> tuple[int, list[int]]:
        vals, units, tabs = self._power_table(P, R)
        p = self.p
        acc = None
        v = 0
        for k, e in enumerate(mono):
            if e == 0:
                continue
            tab = tabs[k]
            while len(tab) <= e:
                tab.append(ser_mul(tab[-1], units[k], R, p))
            acc = tab[e] if acc is None else ser_mul(acc, tab[e], R, p)
            v += vals[k] * e
        if acc is None:
            acc = [1] + [0] * (R - 1)
        return v, acc

    def poly_series(self, P: PointRef, poly: Mapping[Mono, int], R: int
                    ) -> tuple[int, list[int]] | None:
        """Series of a polynomial at P, exact up to absolute order vmin + R where
        vmin is the least monomial valuation; stripped of leading zeros, None
        if it vanishes to that order."""
        p = self.p
        terms = [(self.monomial_series(P, m, R), c) for m, c in poly.items()]
        if not terms:
            return None
        vmin = min(t[0][0] for t in terms)
        acc = [0] * R
        for (v, s), c in terms:
            off = v - vmin
            for i in range(R - off):
                if s[i]:
                    acc[off + i] += c * s[i]
        return _strip(vmin, [a % p for a in acc])

    def function_series(self, h: FunctionElem, P: PointRef, R: int
                        ) -> tuple[int, list[int]] | None:
        """Laurent expansion of h at P to relative precision R."""
        if h.is_zero():
            return None
        p = self.p
        Rn = R
        while True:
            n = self.poly_series(P, h.num, Rn)
            d = self.poly_series(P, h.den, Rn)
            if n is not None and d is not None and len(n[1]) >= R and len(d[1]) >= R:
                break
            Rn *= 2
            if Rn > 1 << 13:
                raise ValueError("series expansion did not stabilize (zero function?)")
        vn, cn = n
        vd, cd = d
        q = ser_mul(cn, ser_inv(cd, R, p), R, p)
        return vn - vd, q

    def valuation(self, h: FunctionElem, P: PointRef) -> int:
        if h.is_zero():
            raise ValueError("valuation of the zero function")
        s = self.function_series(h, P, 1)
        return s[0]

    def multiply(self, a: FunctionElem, b: FunctionElem) -> FunctionElem:
        return FunctionElem(_pmul(a.num, b.num, self.p), _pmul(a.den, b.den, self.p), self.p)

    def add(self, a: FunctionElem, b: FunctionElem, sb: int = 1) -> FunctionElem:
        p = self.p
        num = _padd(_pmul(a.num, b.den, p), _pmul(b.num, a.den, p), p, sb)
        return FunctionElem(num, _pmul(a.den, b.den, p), p)

    def scale(self, a: FunctionElem, c: int) -> FunctionElem:
        return FunctionElem({m: c * v for m, v in a.num.items()}, a.den, self.p)

    def evaluate(self, h: FunctionElem, P: PointRef) -> int | None:
        """Value of h at P, or None at a pole."""
        if h.is_zero():
            return 0
        v, c = self.function_series(h, P, 1)
        if v < 0:
            return None
        return c[0] if v == 0 else 0

    def divisor_of(self, h: FunctionElem) -> Divisor:
        if h.is_zero():
            raise ValueError("divisor of the zero function")
        div = Divisor((P, self.valuation(h, P)) for P in self._candidate_points(h))
        if div.degree != 0 or not self._all_rational(h, div):
            raise ValueError("function has zeros or poles at non-rational points; "
                             "enlarge p or change the function")
        return div

    def _candidate_points(self, h: FunctionElem) -> list[PointRef]:
        return self.points()

    def _all_rational(self, h: FunctionElem, div: Divisor) -> bool:
        return True

    def conj(self, P: PointRef) -> PointRef:
        raise NotImplementedError("no hyperelliptic involution on this model")

    def is_hyperelliptic_model(self) -> bool:
        return False


class HyperellipticCurve(CurveModel):
    """y^2 = f(x), f squarefree of degree 2g+1 (one point at infinity) or
    2g+2 (two points at infinity, leading coefficient a square)."""

    kind = "hyperelliptic"
    nvars = 2

    def __init__(self, f: Poly):
        p = f.p
        _check_modulus(p)
        if f.degree < 3:
            raise ValueError("deg f must be at least 3")
        if not is_squarefree(f):
            raise ValueError("f is not squarefree")
        self.f = f
        self.p = p
        self.genus = (f.degree - 1) // 2
        self.odd = f.degree % 2 == 1
        if not self.odd:
            lam = sqrt_mod(f.lc, p)
            if lam is None:
                raise ValueError("even-degree model with non-square leading coefficient: "
                                 "points at infinity are not rational")
            self._lam = lam

    def __repr__(self) -> str:
        return f"HyperellipticCurve(f={list(self.f.c)}, p={self.p})"

    def is_hyperelliptic_model(self) -> bool:
        return True

    @property
    def infinity(self) -> list[PointRef]:
        return [PointRef("i", (0,))] if self.odd else [PointRef("i", (0,)), PointRef("i", (1,))]

    @cached_property
    def _points(self) -> list[PointRef]:
        p, f = self.p, self.f
        pts = []
        for x in range(p):
            v = f(x)
            if v == 0:
                pts.append(PointRef("a", (x, 0)))
            else:
                r = sqrt_mod(v, p)
                if r is not None:
                    pts.extend(sorted([PointRef("a", (x, r)), PointRef("a", (x, p - r))]))
        return pts + self.infinity

    def points(self) -> list[PointRef]:
        return list(self._points)

    def affine_point(self, x: int, y: int) -> PointRef:
        x, y = x % self.p, y % self.p
        if (y * y - self.f(x)) % self.p:
            raise ValueError(f"({x},{y}) is not on the curve")
        return PointRef("a", (x, y))

    def conj(self, P: PointRef) -> PointRef:
        if P.kind == "i":
            return P if self.odd else PointRef("i", (1 - P.coords[0],))
        x, y = P.coords
        return PointRef("a", (x, (-y) % self.p))

    def is_weierstrass(self, P: PointRef) -> bool:
        return self.conj(P) == P

    def weierstrass_points(self) -> list[PointRef]:
        return [P for P in self.points() if self.is_weierstrass(P)]

    def fiber(self, x: int | None) -> Divisor:
        """Divisor of the x-map over x (None for infinity)."""
        if x is None:
            return Divisor((P, 2 if self.odd else 1) for P in self.infinity)
        v = self.f(x)
        if v == 0:
            return Divisor.point(PointRef("a", (x % self.p, 0)), 2)
        r = sqrt_mod(v, self.p)
        if r is None:
            raise ValueError("fiber is not rational")
        return Divisor.sum_points([PointRef("a", (x % self.p, r)),
                                   PointRef("a", (x % self.p, (-r) % self.p))])

    def x_valuation(self, P: PointRef, c: int | None = None) -> int:
        """v_P(x - c) for c given, v_P(x) at infinity."""
        if P.kind == "i":
            return -2 if self.odd else -1
        if c is None or P.coords[0] != c % self.p:
            return 0
        return 2 if P.coords[1] == 0 else 1

    def coord_series(self, P: PointRef, R: int):
        p, f, g = self.p, self.f, self.genus
        if P.kind == "i":
            a = f.lc
            n = f.degree
            if self.odd:
                ainv = pow(a, -1, p)
                inner = [0] * (2 * n + 2)
                for k in range(n + 1):
                    inner[2 * k] = f[n - k] * pow(ainv, k + 1, p) % p
                Y = [pow(a, g + 1, p) * c % p for c in ser_sqrt(inner, R, p, 1)]
                return (-2, -(2 * g + 1)), ([a] + [0] * (R - 1), Y)
            ainv = pow(a, -1, p)
            inner = [f[n - k] * ainv % p for k in range(n + 1)]
            lam = self._lam if P.coords[0] == 0 else (-self._lam) % p
            Y = [lam * c % p for c in ser_sqrt(inner, R, p, 1)]
            return (-1, -(g + 1)), ([1] + [0] * (R - 1), Y)
        x0, y0 = P.coords
        if y0 != 0:
            shifted = f.compose(Poly((x0, 1), p))
            Y = ser_sqrt(list(shifted.c), R, p, y0)
            X = ([x0, 1] + [0] * R)[:R]
            return (0, 0), (X, Y)
        # Weierstrass point: y is a uniformizer; solve f(x0 + z) = t^2
        shifted = f.compose(Poly((x0, 1), p))
        F = [[c] + [0] * (R - 1) for c in shifted.c]
        F[0] = ([0, 0, p - 1] + [0] * R)[:R]
        z = hensel_root(F, 0, R, p)
        X = [(x0 + z[0]) % p] + z[1:]
        Y = ([0, 1] + [0] * R)[:R]
        return (0, 0), (X, Y)

    def reduce(self, h: FunctionElem) -> FunctionElem:
        """Rewrite y^2 as f(x) in the numerator."""
        p = self.p
        num: dict[Mono, int] = {}
        fpow = {0: {0: 1}}
        for (i, j), c in h.num.items():
            q, r = divmod(j, 2)
            if q not in fpow:
                fq = self.f ** q
                fpow[q] = {k: v for k, v in enumerate(fq.c) if v}
            for k, v in fpow[q].items():
                m = (i + k, r)
                num[m] = (num.get(m, 0) + c * v) % p
        return FunctionElem(num, h.den, p)

    def multiply(self, a: FunctionElem, b: FunctionElem) -> FunctionElem:
        return self.reduce(super().multiply(a, b))

    def _candidate_points(self, h: FunctionElem) -> list[PointRef]:
        p = self.p
        cand = set(self.infinity)
        for poly in (self._norm(h.num), self._norm(h.den)):
            for r, _ in roots_in_field(poly) if poly.degree > 0 else []:
                for P in self.points():
                    if P.kind == "a" and P.coords[0] == r:
                        cand.add(P)
        return sorted(cand)

    def _norm(self, num: Mapping[Mono, int]) -> Poly:
        """N(a + b y) = a^2 - f b^2 as a polynomial in x."""
        h = self.reduce(FunctionElem(num, {(0, 0): 1}, self.p))
        parts = h.numerator_polys() + [Poly((), self.p)]
        a, b = parts[0], parts[1]
        return a * a - self.f * b * b

    def _all_rational(self, h: FunctionElem, div: Divisor) -> bool:
        # affine zeros of numerator and denominator, counted via norms
        for poly in (h.num, h.den):
            nrm = self._norm(poly)
            if nrm.is_zero():
                return False
            fn = FunctionElem(poly, {(0, 0): 1}, self.p)
            tot = sum(self.valuation(fn, P) for P in self.points() if P.kind == "a")
            if tot != nrm.degree:
                return False
        return True


def _homog_eval(q: Mapping[Mono, int], pt: Sequence[int], p: int) -> int:
    return sum(c * pow(pt[0], a, p) * pow(pt[1], b, p) * pow(pt[2], e, p)
               for (a, b, e), c in q.items()) % p


def _normalize(pt: Sequence[int], p: int) -> tuple[int, int, int]:
    for k in (2, 1, 0):
        if pt[k] % p:
            inv = pow(pt[k], -1, p)
            return tuple(v * inv % p for v in pt)  # type: ignore[return-value]
    raise ValueError("zero vector is not a projective point")


class PlaneCurve(CurveModel):
    """Smooth projective plane curve given by a form q(X, Y, Z) of degree d."""

    kind = "plane"
    nvars = 3

    def __init__(self, q: Mapping[Mono, int], p: int, check: bool = True):
        _check_modulus(p)
        q = {tuple(m): c % p for m, c in q.items() if c % p}
        degs = {sum(m) for m in q}
        if len(degs) != 1:
            raise ValueError("q must be homogeneous")
        self.d = degs.pop()
        if self.d < 3:
            raise ValueError("degree must be at least 3")
        self.q = q
        self.p = p
        self.genus = (self.d - 1) * (self.d - 2) // 2
        self.partials = [self._partial(k) for k in range(3)]
        self.nf_var = next((k for k in (1, 0, 2)
                            if q.get(tuple(self.d if i == k else 0 for i in range(3)))), None)
        if self.nf_var is None:
            raise ValueError("no coordinate vertex off the curve; change coordinates")
        if check:
            self._check_smooth()

    @classmethod
    def from_affine(cls, q: Mapping[tuple[int, int], int], p: int, check: bool = True
                    ) -> PlaneCurve:
        d = max(i + j for (i, j) in q)
        return cls({(i, j, d - i - j): c for (i, j), c in q.items()}, p, check)

    def __repr__(self) -> str:
        return f"PlaneCurve(d={self.d}, p={self.p})"

    def _partial(self, k: int) -> dict[Mono, int]:
        out = {}
        for m, c in self.q.items():
            if m[k] and m[k] * c % self.p:
                mm = list(m)
                mm[k] -= 1
                out[tuple(mm)] = m[k] * c % self.p
        return out

    def _check_smooth(self) -> None:
        p = self.p
        for P in self.points():
            if all(_homog_eval(dq, P.coords, p) == 0 for dq in self.partials):
                raise ValueError(f"curve is singular at {P}")
        if not self._smooth_over_closure():
            raise ValueError("curve has a singular point over the algebraic closure")

    def _smooth_over_closure(self) -> bool:
        import sympy

        X, Y, Z = sympy.symbols("X Y Z")
        form = sum(c * X**a * Y**b * Z**e for (a, b, e), c in self.q.items())
        for fixed, (u, v) in ((Z, (X, Y)), (Y, (X, Z)), (X, (Y, Z))):
            aff = sympy.expand(form.subs(fixed, 1))
            eqs = [aff, sympy.diff(aff, u), sympy.diff(aff, v)]
            # Euler's relation fails when p divides d, so keep the third partial too
            eqs.append(sympy.expand(sympy.diff(form, fixed).subs(fixed, 1)))
            eqs = [e for e in eqs if e != 0]
            G = sympy.groebner(eqs, u, v, modulus=self.p, order="grevlex")
            if list(G.exprs) != [1]:
                return False
        return True

    @cached_property
    def _points(self) -> list[PointRef]:
        p, q = self.p, self.q
        pts = []
        # affine chart Z = 1, evaluated as a polynomial in y for each x
        by_y: dict[int, dict[int, int]] = {}
        for (a, b, _), c in q.items():
            by_y.setdefault(b, {})[a] = c
        for x in range(p):
            coeffs = [0] * (self.d + 1)
            for b, dct in by_y.items():
                coeffs[b] = sum(c * pow(x, a, p) for a, c in dct.items()) % p
            poly = Poly(coeffs, p)
            if poly.is_zero():
                ys = range(p)
            else:
                ys = [r for r, _ in roots_in_field(poly)] if poly.degree > 0 else []
            for y in ys:
                pts.append(PointRef("a", (x, y, 1)))
        for x in range(p):
            if _homog_eval(q, (x, 1, 0), p) == 0:
                pts.append(PointRef("a", (x, 1, 0)))
        if _homog_eval(q, (1, 0, 0), p) == 0:
            pts.append(PointRef("a", (1, 0, 0)))
        return sorted(pts)

    def points(self) -> list[PointRef]:
        return list(self._points)

    def point(self, X: int, Y: int, Z: int = 1) -> PointRef:
        pt = _normalize((X, Y, Z), self.p)
        if _homog_eval(self.q, pt, self.p):
            raise ValueError(f"{pt} is not on the curve")
        return PointRef("a", pt)

    def coord_series(self, P: PointRef, R: int):
        p = self.p
        X0, Y0, Z0 = P.coords
        if Z0:
            fixed, (iu, iv) = 2, (0, 1)
        elif Y0:
            fixed, (iu, iv) = 1, (0, 2)
        else:
            fixed, (iu, iv) = 0, (1, 2)
        aff: dict[tuple[int, int], int] = {}
        for m, c in self.q.items():
            key = (m[iu], m[iv])
            aff[key] = (aff.get(key, 0) + c) % p
        us, vs, _ = series_expand(aff, (P.coords[iu], P.coords[iv]), R, p)
        out: list[list[int]] = [None, None, None]  # type: ignore[list-item]
        out[fixed] = [1] + [0] * (R - 1)
        out[iu], out[iv] = us, vs
        return (0, 0, 0), tuple(out)

    def line_restriction(self, P: Sequence[int], Q: Sequence[int]) -> Poly:
        """q(P + t Q) as a polynomial in t."""
        p = self.p
        coords = [Poly((P[k], Q[k]), p) for k in range(3)]
        pw = [[Poly((1,), p)] for _ in range(3)]
        for k in range(3):
            for _ in range(self.d):
                pw[k].append(pw[k][-1] * coords[k])
        acc = Poly((), p)
        for (a, b, e), c in self.q.items():
            acc = acc + (pw[0][a] * pw[1][b] * pw[2][e]).scale(c)
        return acc

    def lines_through(self, P: PointRef) -> _LazyLines:
        """Lines through P in a fixed order, computed on demand."""
        cache = self.__dict__.setdefault("_lines", {})
        if P not in cache:
            cache[P] = _LazyLines(self._gen_lines(P))
        return cache[P]

    def _gen_lines(self, P: PointRef):
        p = self.p
        A = P.coords
        k = max(i for i in range(3) if A[i])
        others = [i for i in range(3) if i != k]
        U = tuple(int(i == others[0]) for i in range(3))
        V = tuple(int(i == others[1]) for i in range(3))
        dirs = [tuple((U[i] + lam * V[i]) % p for i in range(3)) for lam in range(p)] + [V]
        for Q in dirs:
            r = self.line_restriction(A, Q)
            rational: dict[PointRef, int] = {}
            rest = r
            for t, m in roots_in_field(r):
                pt = _normalize([(A[i] + t * Q[i]) % p for i in range(3)], p)
                rational[PointRef("a", pt)] = m
                rest = rest // (Poly((-t, 1), p) ** m)
            if r.degree < self.d:
                rational[PointRef("a", _normalize(Q, p))] = self.d - r.degree
            yield Line(_normalize(_cross(A, Q), p), A, Q, rational, rest.monic())

    def _candidate_points(self, h: FunctionElem) -> list[PointRef]:
        return self.points()

    def _all_rational(self, h: FunctionElem, div: Divisor) -> bool:
        for form in (h.num, h.den):
            deg = sum(next(iter(form)))
            fn = FunctionElem(form, {(0, 0, deg): 1}, self.p) if deg else None
            if fn is None:
                continue
            # zeros of a degree-n form on C number n*d with multiplicity
            tot = 0
            for P in self.points():
                s = self.poly_series(P, form, 1)
                if s is None:
                    return False
                tot += s[0]
            if tot != deg * self.d:
                return False
        return True


@dataclass
class Line:
    """A line through `base` with direction `direction`; `rational` maps the
    rational intersection points with the curve to their multiplicities and
    `residual` is the monic factor of q restricted to the line carrying the
    non-rational intersections."""

    form: tuple[int, int, int]
    base: tuple[int, ...]
    direction: tuple[int, ...]
    rational: dict[PointRef, int]
    residual: Poly = field(repr=False)

    @property
    def split(self) -> bool:
        return self.residual.degree == 0

    @property
    def transversal(self) -> bool:
        return self.split and all(m == 1 for m in self.rational.values())

    @property
    def usable(self) -> bool:
        return self.split or is_squarefree(self.residual)


class _LazyLines:
    """Sequence view over a generator, materialized as far as it is read."""

    def __init__(self, gen):
        self._gen = gen
        self._items: list[Line] = []

    def __iter__(self):
        i = 0
        while True:
            if i < len(self._items):
                yield self._items[i]
            else:
                try:
                    self._items.append(next(self._gen))
                except StopIteration:
                    return
                continue
            i += 1


def make_hyperelliptic(f: Poly) -> HyperellipticCurve:
    return HyperellipticCurve(f)


def make_plane(q: Mapping[Mono, int], p: int) -> PlaneCurve:
    """q is either homogeneous in (X, Y, Z) (3-tuples) or affine in (x, y)."""
    if next(iter(q)).__len__() == 2:
        return PlaneCurve.from_affine(q, p)  # type: ignore[arg-type]
    return PlaneCurve(q, p)


def enumerate_points(X: CurveModel) -> list[PointRef]:
    return X.points()


def valuation(X: CurveModel, h: FunctionElem, P: PointRef) -> int:
    return X.valuation(h, P)


def divisor_of(X: CurveModel, h: FunctionElem) -> Divisor:
    return X.divisor_of(h)


def full_split_line(X: PlaneCurve, start: int = 0) -> tuple[tuple[int, int, int], list[PointRef]]:
    """A line meeting X in d distinct rational points, as (coefficients, points)."""
    p = X.p
    pts = X.points()
    seen = set()
    for i in range(start, len(pts)):
        for j in range(i + 1, len(pts)):
            A, B = pts[i].coords, pts[j].coords
            line = _normalize(_cross(A, B), p)
            if line in seen:
                continue
            seen.add(line)
            on = [P for P in pts if sum(a * b for a, b in zip(line, P.coords)) % p == 0]
            if len(on) == X.d:
                return line, on
    raise ValueError("no line meets the curve in d distinct rational points; use a larger p")


def line_section(X: PlaneCurve) -> Divisor:
    """A line section supported on rational points, transversal if possible."""
    try:
        return Divisor.sum_points(full_split_line(X)[1])
    except ValueError:
        pass
    for P in X.points():
        for ln in X.lines_through(P):
            if ln.split:
                return Divisor(ln.rational)
    raise ValueError("no line section is supported on rational points; use a larger p")


def _cross(A: Sequence[int], B: Sequence[int]) -> tuple[int, int, int]:
    return (A[1] * B[2] - A[2] * B[1], A[2] * B[0] - A[0] * B[2], A[0] * B[1] - A[1] * B[0])


def canonical_divisor(X: CurveModel) -> Divisor:
    """A fixed divisor in the canonical class."""
    cache = X.__dict__.get("_K")
    if cache is not None:
        return cache
    if isinstance(X, HyperellipticCurve):
        g = X.genus
        if X.odd:
            K = Divisor.point(X.infinity[0], 2 * g - 2)
        else:
            K = Divisor((P, g - 1) for P in X.infinity)
    elif isinstance(X, PlaneCurve):
        K = line_section(X) * (X.d - 3)
    else:
        raise TypeError("unknown model")
    X.__dict__["_K"] = K
    return K


def g12_divisor(X: CurveModel, base: int | None = None) -> Divisor:
    """Fiber of the degree-2 x-map (over infinity by default)."""
    if not isinstance(X, HyperellipticCurve):
        raise ValueError("g^1_2 requires a hyperelliptic or elliptic model")
    return X.fiber(base)


def random_divisor(X: CurveModel, degree: int, seed: int | np.random.Generator,
                   effective: bool = True, distinct: bool = False,
                   spread: int = 3) -> Divisor:
    """Sum of uniformly chosen rational points; with effective=False a random
    negative part of degree up to `spread` is added and compensated."""
    rng = seed if isinstance(seed, np.random.Generator) else rng_for(seed)
    pts = X.points()
    neg = 0 if effective else int(rng.integers(0, spread + 1))
    pos = degree + neg
    if pos < 0:
        neg -= pos
        pos = 0
    if distinct:
        if pos > len(pts):
            raise ValueError("not enough rational points for a reduced divisor")
        chosen = [pts[i] for i in rng.choice(len(pts), size=pos, replace=False)]
    else:
        chosen = [pts[i] for i in rng.integers(0, len(pts), size=pos)]
    D = Divisor.sum_points(chosen)
    if neg:
        D = D - Divisor.sum_points(pts[i] for i in rng.integers(0, len(pts), size=neg))
    return D
