"""Double covers C: y^2 = g(x^2) -> X: v^2 = g(u), (x, y) -> (x^2, y), with
branch data, the pushforward twist and curve-side elementary transforms."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations_with_replacement

from .algebra import Poly, is_squarefree, sqrt_mod
from .curve import (
    Divisor,
    HyperellipticCurve,
    PointRef,
    canonical_divisor,
    g12_divisor,
    rng_for,
)
from .jacobian import Jacobian, is_equivalent
from .riemann_roch import h0, h1

__all__ = [
    "DoubleCover",
    "CoverReport",
    "make_cover",
    "random_cover_poly",
    "pullback",
    "pushforward",
    "branch_and_ramification",
    "pushforward_twist",
    "projection_identity",
    "verify_segre",
    "involution_genus_check",
    "h1_diagram_check",
    "ProjectionState",
    "start_state",
    "twist",
    "project",
    "unproject",
    "report",
    "random_liftable",
]


@dataclass(frozen=True)
class DoubleCover:
    g: Poly
    C: HyperellipticCurve
    X: HyperellipticCurve

    @property
    def p(self) -> int:
        return self.g.p

    def image(self, P: PointRef) -> PointRef:
        """gamma(P) for P on C."""
        if P.kind == "i":
            return self.X.infinity[0] if self.X.odd else P
        x, y = P.coords
        return PointRef("a", (x * x % self.p, y))


def _square_poly(g: Poly) -> Poly:
    out = [0] * (2 * len(g.c))
    for i, c in enumerate(g.c):
        out[2 * i] = c
    return Poly(out, g.p)


def make_cover(g: Poly) -> DoubleCover:
    """Build both curves; needs g and g(x^2) squarefree, lc(g) a square."""
    if g.degree < 3:
        raise ValueError("deg g must be at least 3")
    if not is_squarefree(g):
        raise ValueError("g is not squarefree")
    gx2 = _square_poly(g)
    if not is_squarefree(gx2):
        raise ValueError("g(x^2) is not squarefree (g(0) = 0?)")
    C = HyperellipticCurve(gx2)
    X = HyperellipticCurve(g)
    cov = DoubleCover(g, C, X)
    degB = 2 if g.degree % 2 else 4
    if 2 * C.genus - 2 != 2 * (2 * X.genus - 2) + degB:
        raise AssertionError("Hurwitz identity fails")
    return cov


def random_cover_poly(degree: int, p: int, seed: int, tries: int = 10_000) -> Poly:
    """Random g with lc(g) and g(0) nonzero squares, g and g(x^2) squarefree."""
    rng = rng_for(seed, 3)
    for _ in range(tries):
        c = [int(v) for v in rng.integers(0, p, size=degree + 1)]
        c[-1] = int(rng.integers(1, p)) ** 2 % p
        if c[0] == 0 or sqrt_mod(c[0], p) is None:
            continue
        g = Poly(c, p)
        if is_squarefree(g) and is_squarefree(_square_poly(g)):
            return g
    raise RuntimeError("no admissible polynomial found")


def pullback(cov: DoubleCover, D: Divisor) -> Divisor:
    """gamma^* D; every point of D must have rational preimages."""
    p = cov.p
    out: dict[PointRef, int] = {}

    def put(Q, m):
        out[Q] = out.get(Q, 0) + m

    for P, m in D.items:
        if P.kind == "i":
            if cov.X.odd:
                for Q in cov.C.infinity:
                    put(Q, m)
            else:
                # 1/u = (1/x)^2, so each branch at infinity is ramified
                put(P, 2 * m)
            continue
        u, v = P.coords
        if u == 0:
            put(PointRef("a", (0, v)), 2 * m)
            continue
        x = sqrt_mod(u, p)
        if x is None:
            raise ValueError(f"{P} has no rational preimage")
        put(PointRef("a", (x, v)), m)
        put(PointRef("a", ((-x) % p, v)), m)
    return Divisor(out)


def pushforward(cov: DoubleCover, D: Divisor) -> Divisor:
    out: dict[PointRef, int] = {}
    for P, m in D.items:
        Q = cov.image(P)
        out[Q] = out.get(Q, 0) + m
    return Divisor(out)


@dataclass(frozen=True)
class CoverReport:
    branch: Divisor
    ramification: Divisor
    twist: Divisor | None = None
    candidates: int = 0
    battery: tuple[Divisor, ...] = field(default=())


def branch_and_ramification(cov: DoubleCover) -> CoverReport:
    """Fixed points of x -> -x on C and their images."""
    p, C = cov.p, cov.C
    s = sqrt_mod(cov.g(0), p)
    if s is None:
        raise ValueError("branch points over u = 0 are not rational (g(0) not a square)")
    R = {PointRef("a", (0, s)): 1, PointRef("a", (0, (-s) % p)): 1}
    if not cov.X.odd:
        # y / x^n is invariant when n is even, so both points at infinity are fixed
        for Q in C.infinity:
            R[Q] = 1
    R = Divisor(R)
    # x -> -x fixes exactly these points
    for P in C.points():
        if P.kind == "a":
            x, y = P.coords
            fixed = (-x) % p == x
        else:
            fixed = not cov.X.odd
        if fixed != (R.coef(P) == 1):
            raise AssertionError(f"fixed-point analysis disagrees at {P}")
    B = pushforward(cov, R)
    if pullback(cov, B) != R * 2:
        raise AssertionError("gamma^* B differs from 2R")
    # C is an even model, so the equivalence goes through h0 of the difference
    diff = canonical_divisor(C) - pullback(cov, canonical_divisor(cov.X)) - R
    if diff.degree != 0 or h0(C, diff) != 1:
        raise AssertionError("K_C is not equivalent to gamma^* K_X + R")
    return CoverReport(B, R)


def projection_identity(cov: DoubleCover, E: Divisor, m: Divisor) -> tuple[int, int]:
    """(h0_C(gamma^* m), h0_X(m) + h0_X(m + E))."""
    return h0(cov.C, pullback(cov, m)), h0(cov.X, m) + h0(cov.X, m + E)


def _liftable_points(cov: DoubleCover) -> list[PointRef]:
    p = cov.p
    return [P for P in cov.X.points()
            if P.kind == "i" or P.coords[0] == 0 or sqrt_mod(P.coords[0], p) is not None]


def _battery(cov: DoubleCover, size: int, seed: int, start: int = 0) -> list[Divisor]:
    pts = _liftable_points(cov)
    top = 2 * cov.X.genus + 2
    out = []
    for t in range(start, start + size):
        rng = rng_for(seed, 4, t)
        deg = t % (top + 1)
        neg = int(rng.integers(0, 3))
        pos = [pts[i] for i in rng.integers(0, len(pts), size=deg + neg)]
        negs = [pts[i] for i in rng.integers(0, len(pts), size=neg)]
        out.append(Divisor.sum_points(pos) - Divisor.sum_points(negs))
    return out


def _liftable_in_class(cov: DoubleCover, J: Jacobian, target) -> Divisor | None:
    """A divisor supported on liftable points with the given degree-0 class,
    written as (effective of degree <= g) - multiple of infinity."""
    inf = cov.X.infinity[0]
    pts = [P for P in _liftable_points(cov) if P != inf]
    D = J.divisor_of_class(target)
    if all(P in pts or P == inf for P in D.support):
        return D
    for k in range(1, cov.X.genus + 1):
        for combo in combinations_with_replacement(pts, k):
            cand = Divisor.sum_points(combo) - Divisor.point(inf, k)
            if J.class_of(cand) == target:
                return cand
    return None


def pushforward_twist(cov: DoubleCover, seed: int = 0, battery: int = 8,
                      max_battery: int = 64) -> CoverReport:
    """E with gamma_* O_C = O + O(E): the half of -B that satisfies the
    projection formula on a battery of test divisors."""
    rep = branch_and_ramification(cov)
    X = cov.X
    if not X.odd:
        raise ValueError("twist selection needs an odd model of X")
    J = Jacobian.of(X)
    inf = X.infinity[0]
    dE = -rep.branch.degree // 2
    cands = []
    for half in J.square_roots(J.class_of(-rep.branch)):
        cands.append(J.divisor_of_class(half) + Divisor.point(inf, dE))
    tests = _battery(cov, battery, seed)
    K = canonical_divisor(X)
    # m ~ K - E' gives h0(m + E') = g, while any other half gives g - 1
    for Ec in cands:
        m = _liftable_in_class(cov, J, J.class_of(K - Ec - Divisor.point(inf, K.degree - Ec.degree)))
        if m is not None:
            tests.append(m + Divisor.point(inf, K.degree - Ec.degree))
    alive = list(cands)
    while True:
        alive = [E for E in alive
                 if all(a == b for a, b in (projection_identity(cov, E, m) for m in tests))]
        if len(alive) <= 1 or len(tests) >= max_battery:
            break
        tests += _battery(cov, battery, seed, start=len(tests))
    if len(alive) != 1:
        raise AssertionError(f"{len(alive)} twist candidates survive the battery")
    E = alive[0]
    if not is_equivalent(X, E * -2, rep.branch):
        raise AssertionError("-2E is not equivalent to the branch divisor")
    return replace(rep, twist=E, candidates=len(cands), battery=tuple(tests))


def verify_segre(cov: DoubleCover, E: Divisor, tests: list[Divisor]) -> dict:
    """h0 and h1 of gamma^* m against the two summands on X, plus the
    canonical configuration b = K_X - E."""
    X, C = cov.X, cov.C
    h0_ok = h1_ok = True
    for m in tests:
        pm = pullback(cov, m)
        h0_ok &= h0(C, pm) == h0(X, m) + h0(X, m + E)
        h1_ok &= h1(C, pm) == h1(X, m) + h1(X, m + E)
    b = canonical_divisor(X) - E
    pi = C.genus
    spec_scroll = h1(X, b) + h1(X, b + E)
    spec_curve = h1(C, canonical_divisor(C))
    return {
        "h0": h0_ok,
        "h1": h1_ok,
        "pi_is_deg_b_plus_1": pi == b.degree + 1,
        "speciality_scroll": spec_scroll,
        "speciality_curve": spec_curve,
        "ok": h0_ok and h1_ok and pi == b.degree + 1 and spec_scroll == spec_curve == 1,
    }


def involution_genus_check(cov: DoubleCover) -> bool:
    pi, g = cov.C.genus, cov.X.genus
    if 2 * g not in (pi - 1, pi, pi + 1):
        raise AssertionError(f"genus {g} quotient of a genus {pi} hyperelliptic curve")
    return True


def h1_diagram_check(cov: DoubleCover) -> bool:
    """gamma^*(g12 of X) ~ 2 * (x-fiber class of C), on every rational u-fiber."""
    X, C, p = cov.X, cov.C, cov.p
    twice = g12_divisor(C) * 2
    for u in range(p):
        try:
            fib = g12_divisor(X, u)
            pb = pullback(cov, fib)
        except ValueError:
            continue
        if pb.degree != 4 or h0(C, pb - twice) != 1:
            return False
    return True


# --- curve-side elementary transforms -----------------------------------------

@dataclass(frozen=True)
class ProjectionState:
    cover: DoubleCover
    a: Divisor


def start_state(cov: DoubleCover) -> ProjectionState:
    return ProjectionState(cov, canonical_divisor(cov.C))


def twist(state: ProjectionState, m: Divisor) -> ProjectionState:
    return ProjectionState(state.cover, state.a + pullback(state.cover, m))


def project(state: ProjectionState, x: PointRef) -> ProjectionState:
    return ProjectionState(state.cover, state.a - Divisor.point(x))


def unproject(state: ProjectionState, x: PointRef) -> ProjectionState:
    return ProjectionState(state.cover, state.a + Divisor.point(x))


def report(state: ProjectionState) -> dict:
    C = state.cover.C
    return {"h0": h0(C, state.a), "speciality": h1(C, state.a)}


def random_liftable(cov: DoubleCover, degree: int, seed: int, counter: int) -> Divisor:
    """Random effective divisor on X supported on points with rational preimages."""
    pts = _liftable_points(cov)
    rng = rng_for(seed, 5, counter)
    return Divisor.sum_points(pts[i] for i in rng.integers(0, len(pts), size=degree))
