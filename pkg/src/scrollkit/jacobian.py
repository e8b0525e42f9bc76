"""Degree-0 class arithmetic on odd-degree hyperelliptic models (Mumford
representation, Cantor composition and reduction)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import isqrt

from .algebra import Poly, factors_of_degree, poly_gcd, poly_xgcd, roots_in_field, sqrt_mod
from .curve import CurveModel, Divisor, HyperellipticCurve, PointRef

__all__ = [
    "JacClass",
    "Jacobian",
    "JacobianBudgetError",
    "class_of",
    "add",
    "double",
    "two_torsion",
    "square_roots",
    "is_equivalent",
    "EquivalenceMismatch",
]

DEFAULT_BUDGET = 10**6


class JacobianBudgetError(RuntimeError):
    pass


class EquivalenceMismatch(AssertionError):
    """Cantor and Riemann-Roch disagree on a linear equivalence."""


@dataclass(frozen=True)
class JacClass:
    """Reduced Mumford pair (u, v): u monic, deg v < deg u, u | v^2 - f."""

    u: Poly
    v: Poly

    def __repr__(self) -> str:
        return f"JacClass(u={list(self.u.c)}, v={list(self.v.c)})"


def _require_odd(X: CurveModel) -> HyperellipticCurve:
    if not isinstance(X, HyperellipticCurve) or not X.odd:
        raise ValueError("Jacobian arithmetic needs an odd-degree hyperelliptic model")
    return X


class Jacobian:
    """Group law on Pic^0 of y^2 = f(x), deg f = 2g + 1."""

    def __init__(self, X: CurveModel):
        self.X = _require_odd(X)
        self.f = self.X.f
        self.g = self.X.genus
        self.p = self.X.p
        self.identity = JacClass(Poly((1,), self.p), Poly((), self.p))
        self._elements: list[JacClass] | None = None
        self._halves: dict[JacClass, list[JacClass]] | None = None

    @classmethod
    def of(cls, X: CurveModel) -> Jacobian:
        J = X.__dict__.get("_jac")
        if J is None:
            J = cls(X)
            X.__dict__["_jac"] = J
        return J

    # -- group law ---------------------------------------------------------

    def _reduce(self, u: Poly, v: Poly) -> JacClass:
        f, g = self.f, self.g
        v = v % u
        while u.degree > g:
            u2 = (f - v * v) // u
            v = (-v) % u2
            u = u2.monic()
            v = v % u
        return JacClass(u.monic(), v % u)

    def add(self, a: JacClass, b: JacClass) -> JacClass:
        if a.u.degree == 0:
            return b
        if b.u.degree == 0:
            return a
        u1, v1, u2, v2 = a.u, a.v, b.u, b.v
        d0, e1, e2 = poly_xgcd(u1, u2)
        s = v1 + v2
        if s.is_zero():
            d, c1, c2 = d0, Poly((1,), self.p), Poly((), self.p)
        else:
            d, c1, c2 = poly_xgcd(d0, s)
        s1, s2, s3 = c1 * e1, c1 * e2, c2
        u = (u1 * u2) // (d * d)
        v = (s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + self.f)) // d
        return self._reduce(u, v % u)

    def neg(self, a: JacClass) -> JacClass:
        return JacClass(a.u, (-a.v) % a.u if a.u.degree > 0 else a.v)

    def double(self, a: JacClass) -> JacClass:
        return self.add(a, a)

    def mul(self, n: int, a: JacClass) -> JacClass:
        if n < 0:
            return self.mul(-n, self.neg(a))
        out, base = self.identity, a
        while n:
            if n & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            n >>= 1
        return out

    def sub(self, a: JacClass, b: JacClass) -> JacClass:
        return self.add(a, self.neg(b))

    def point_class(self, P: PointRef) -> JacClass:
        """Class of P - inf."""
        if P.kind == "i":
            return self.identity
        x0, y0 = P.coords
        return JacClass(Poly((-x0, 1), self.p), Poly((y0,), self.p))

    def class_of(self, D: Divisor) -> JacClass:
        """Class of D - deg(D) inf."""
        acc = self.identity
        for P, n in D.items:
            if P.kind == "i":
                continue
            acc = self.add(acc, self.mul(n, self.point_class(P)))
        return acc

    def is_valid(self, c: JacClass) -> bool:
        u, v = c.u, c.v
        return (u.lc == 1 and u.degree <= self.g and v.degree < max(u.degree, 1)
                and ((v * v - self.f) % u).is_zero())

    # -- rational representatives ------------------------------------------

    def _split_divisor(self, c: JacClass) -> Divisor | None:
        if c.u.degree == 0:
            return Divisor()
        rts = roots_in_field(c.u)
        if sum(m for _, m in rts) != c.u.degree:
            return None
        inf = self.X.infinity[0]
        D = {inf: -c.u.degree}
        for r, m in rts:
            D[PointRef("a", (r, c.v(r)))] = m
        return Divisor(D)

    def divisor_of_class(self, c: JacClass) -> Divisor:
        """A degree-0 divisor with rational support in the class c."""
        D = self._split_divisor(c)
        if D is not None:
            return D
        pts = [P for P in self.X.points() if P.kind == "a"]
        for k in range(1, self.g + 2):
            for combo in combinations(pts, k):
                shift = self.class_of(Divisor.sum_points(combo))
                D = self._split_divisor(self.sub(c, shift))
                if D is not None:
                    return D + Divisor.sum_points(combo) - Divisor.point(self.X.infinity[0], k)
        raise ValueError("class has no rational-support representative found")

    # -- enumeration -------------------------------------------------------

    def size_estimate(self) -> int:
        """Weil upper bound (sqrt(p) + 1)^(2g), rounded up."""
        return (isqrt(self.p) + 2) ** (2 * self.g)

    def _sqrt_mod_poly(self, a: Poly, u: Poly) -> Poly | None:
        """Square root of a in the field F_p[x]/(u), u irreducible (Tonelli-Shanks)."""
        p, k = self.p, u.degree
        a = a % u
        if a.is_zero():
            return a
        if k == 1:
            r = sqrt_mod(a[0], p)
            return None if r is None else Poly((r,), p)
        F = _ExtField(u)
        av = F.elem(a)
        q = p**k
        one = F.one
        if F.pow(av, (q - 1) // 2) != one:
            return None
        t, s = q - 1, 0
        while t % 2 == 0:
            t //= 2
            s += 1
        c0 = 0
        while True:
            z = F.elem(Poly((c0, 1), p) if c0 < p else Poly((c0 - p, 0, 1), p))
            if F.pow(z, (q - 1) // 2) != one:
                break
            c0 += 1
        m, c, tt, r = s, F.pow(z, t), F.pow(av, t), F.pow(av, (t + 1) // 2)
        while tt != one:
            i, t2 = 0, tt
            while t2 != one:
                t2 = F.mul(t2, t2)
                i += 1
            b = F.pow(c, 1 << (m - i - 1))
            m, c = i, F.mul(b, b)
            tt, r = F.mul(tt, c), F.mul(r, b)
        return Poly(r, p)

    def _irreducibles(self, k: int):
        p = self.p
        x = Poly.x(p)
        for idx in range(p**k):
            coeffs, n = [], idx
            for _ in range(k):
                coeffs.append(n % p)
                n //= p
            u = Poly(coeffs + [1], p)
            if k == 1:
                yield u
                continue
            if k == 2:
                if pow((coeffs[1] ** 2 - 4 * coeffs[0]) % p, (p - 1) // 2, p) == p - 1:
                    yield u
                continue
            ok = True
            xp = x
            for _ in range(k // 2):
                xp = xp.powmod(p, u)
                if poly_gcd(u, xp - x).degree > 0:
                    ok = False
                    break
            if ok:
                yield u

    def _places(self) -> list[list[JacClass]]:
        """For each place of degree <= g: its admissible multiples, as lists of
        Mumford pairs (both sheets merged per place, Weierstrass once)."""
        g = self.g
        out = []
        for k in range(1, g + 1):
            for u in self._irreducibles(k):
                fu = self.f % u
                if fu.is_zero():
                    out.append([JacClass(u, Poly((), self.p))])
                    continue
                r = self._sqrt_mod_poly(fu, u)
                if r is None:
                    continue
                opts = []
                for v in (r, (-r) % u):
                    base = JacClass(u, v)
                    cur = base
                    for e in range(1, g // k + 1):
                        opts.append(cur)
                        if e < g // k:
                            cur = self.add(cur, base)
                out.append(opts)
        return out

    def elements(self, budget: int = DEFAULT_BUDGET) -> list[JacClass]:
        """All of J(F_p) by enumerating reduced divisors."""
        if self._elements is not None:
            return self._elements
        est = self.size_estimate()
        if est > budget:
            raise JacobianBudgetError(
                f"|J(F_p)| may reach {est} > budget {budget}; use a smaller p")
        places = self._places()
        elems: list[JacClass] = []

        def rec(i: int, acc: JacClass, deg: int) -> None:
            elems.append(acc)
            for j in range(i, len(places)):
                if places[j][0].u.degree > self.g - deg:
                    break  # places are sorted by degree
                for c in places[j]:
                    if deg + c.u.degree <= self.g:
                        rec(j + 1, self.add(acc, c), deg + c.u.degree)

        rec(0, self.identity, 0)
        if len(set(elems)) != len(elems):
            raise AssertionError("enumeration produced duplicate classes")
        self._elements = elems
        return elems

    def order(self, budget: int = DEFAULT_BUDGET) -> int:
        return len(self.elements(budget))

    def two_torsion(self) -> list[JacClass]:
        rts = roots_in_field(self.f)
        if len(rts) != self.f.degree:
            raise ValueError("f is not fully split over F_p")
        ws = [r for r, _ in rts]
        out = set()
        for k in range(0, len(ws) + 1):
            for S in combinations(ws, k):
                u = Poly.from_roots(S, self.p)
                out.add(self._reduce(u, Poly((), self.p)))
        if len(out) != 2 ** (2 * self.g):
            raise AssertionError("2-torsion count mismatch")
        return sorted(out, key=_key)

    def weierstrass_classes(self, count: int) -> set[JacClass]:
        """Classes P1 + ... + Pk - k inf with k <= count distinct Weierstrass
        points, the divisor P1 + ... + Pk rational; always includes 0."""
        lin = factors_of_degree(self.f, 1)
        quad = factors_of_degree(self.f, 2) if count >= 2 else []
        out = {self.identity}
        # inf is a Weierstrass point, so sums of up to `count` points with inf
        # dropped cover every affine subset of size <= count
        for k in range(1, count + 1):
            for sub in combinations(lin + quad, k):
                u = Poly((1,), self.p)
                for w in sub:
                    u = u * w
                if u.degree <= count:
                    out.add(self._reduce(u, Poly((), self.p)))
        return out

    def square_roots(self, c: JacClass, budget: int = DEFAULT_BUDGET) -> list[JacClass]:
        """All x with 2x = c, by exhaustive enumeration of J(F_p)."""
        if self._halves is None:
            halves: dict[JacClass, list[JacClass]] = {}
            for x in self.elements(budget):
                halves.setdefault(self.double(x), []).append(x)
            kernel = len(halves.get(self.identity, []))
            if any(len(v) != kernel for v in halves.values()):
                raise AssertionError("fibers of doubling have unequal sizes")
            self._halves = halves
        return sorted(self._halves.get(c, []), key=_key)


class _ExtField:
    """F_p[x]/(u) on plain coefficient tuples."""

    def __init__(self, u: Poly):
        self.p = u.p
        self.k = u.degree
        self.tail = [(-c) % self.p for c in u.c[:-1]]  # x^k = sum tail[i] x^i
        self.one = (1,) + (0,) * (self.k - 1)

    def elem(self, a: Poly) -> tuple[int, ...]:
        return tuple(a[i] for i in range(self.k))

    def mul(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                for i, tcoef in enumerate(self.tail):
                    prod[d - k + i] += c * tcoef
        return tuple(v % p for v in prod[:k])

    def pow(self, a, e: int):
        out, base = self.one, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out


def _key(c: JacClass):
    return (c.u.degree, c.u.c, c.v.c)


def class_of(X: CurveModel, D: Divisor) -> JacClass:
    return Jacobian.of(X).class_of(D)


def add(X: CurveModel, a: JacClass, b: JacClass) -> JacClass:
    return Jacobian.of(X).add(a, b)


def double(X: CurveModel, a: JacClass) -> JacClass:
    return Jacobian.of(X).double(a)


def two_torsion(X: CurveModel) -> list[JacClass]:
    return Jacobian.of(X).two_torsion()


def square_roots(X: CurveModel, c: JacClass, budget: int = DEFAULT_BUDGET) -> list[JacClass]:
    return Jacobian.of(X).square_roots(c, budget)


def is_equivalent(X: CurveModel, D1: Divisor, D2: Divisor) -> bool:
    """Linear equivalence; on odd hyperelliptic models Cantor and h0 must agree."""
    from .riemann_roch import h0

    if D1.degree != D2.degree:
        raise ValueError("divisors of different degree")
    via_rr = h0(X, D1 - D2) == 1
    if isinstance(X, HyperellipticCurve) and X.odd:
        J = Jacobian.of(X)
        via_cantor = J.class_of(D1 - D2) == J.identity
        if via_cantor != via_rr:
            raise EquivalenceMismatch(f"Cantor={via_cantor}, h0={via_rr} for {D1} vs {D2}")
    return via_rr


def is_equivalent_cantor(X: CurveModel, D1: Divisor, D2: Divisor) -> bool:
    J = Jacobian.of(X)
    return J.class_of(D1 - D2) == J.identity


def is_equivalent_rr(X: CurveModel, D1: Divisor, D2: Divisor) -> bool:
    from .riemann_roch import h0

    return h0(X, D1 - D2) == 1
