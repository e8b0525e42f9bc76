"""Riemann-Roch spaces L(D), h0/h1, base points and linear-system probes."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import ceil

from .algebra import Poly, rank_and_nullspace
from .curve import (
    CurveModel,
    Divisor,
    FunctionElem,
    HyperellipticCurve,
    PlaneCurve,
    Line,
    PointRef,
    _pmul,
    canonical_divisor,
    g12_divisor,
)

__all__ = [
    "RRBasis",
    "RiemannRochError",
    "rr_space",
    "h0",
    "h1",
    "check_riemann_roch",
    "is_base_point",
    "base_points",
    "base_locus",
    "is_smooth_system",
    "separates",
    "SeparationVerdict",
    "phi_b_profile",
    "checked_canonical",
]


class RiemannRochError(AssertionError):
    """The computed dimensions violate the Riemann-Roch identity."""


@dataclass(frozen=True)
class RRBasis:
    divisor: Divisor
    basis: tuple[FunctionElem, ...]

    @property
    def h0(self) -> int:
        return len(self.basis)


def _cache(X: CurveModel) -> dict:
    return X.__dict__.setdefault("_rr", {})


def rr_space(X: CurveModel, D: Divisor, verify: bool = True) -> RRBasis:
    """Basis of L(D) = {h : div(h) + D >= 0}.

    With verify, h0(D) - h0(K - D) = deg D - g + 1 is checked, which also
    certifies the ansatz degree bounds.
    """
    cache = _cache(X)
    B = cache.get(D)
    if B is None:
        if D.degree < 0:
            B = RRBasis(D, ())
        elif isinstance(X, HyperellipticCurve):
            B = _rr_hyperelliptic(X, D)
        elif isinstance(X, PlaneCurve):
            B = _rr_plane(X, D)
        else:
            raise TypeError("unsupported model")
        cache[D] = B
    if verify and not cache.get(("ok", D)):
        K = canonical_divisor(X)
        dual = rr_space(X, K - D, verify=False)
        if B.h0 - dual.h0 != D.degree - X.genus + 1:
            raise RiemannRochError(
                f"h0({D})={B.h0}, h0(K-D)={dual.h0}, deg={D.degree}, g={X.genus}")
        cache[("ok", D)] = cache[("ok", K - D)] = True
    return B


def h0(X: CurveModel, D: Divisor) -> int:
    return rr_space(X, D).h0


def h1(X: CurveModel, D: Divisor) -> int:
    return h0(X, canonical_divisor(X) - D)


def check_riemann_roch(X: CurveModel, D: Divisor) -> tuple[int, int, bool]:
    a = rr_space(X, D, verify=False).h0
    b = rr_space(X, canonical_divisor(X) - D, verify=False).h0
    return a, b, a - b == D.degree - X.genus + 1


def checked_canonical(X: CurveModel) -> Divisor:
    """Canonical divisor with its degree and h0 asserted."""
    K = canonical_divisor(X)
    if K.degree != 2 * X.genus - 2 or h0(X, K) != X.genus:
        raise RiemannRochError("canonical divisor has wrong degree or h0")
    return K


def _nullspace_rows(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    if ncols == 0:
        return []
    return rank_and_nullspace(rows, p, ncols=ncols)[1] if rows else \
        [[int(i == j) for i in range(ncols)] for j in range(ncols)]


def _series_rows(X: CurveModel, P: PointRef, monos: list, k: int) -> list[list[int]]:
    """Rows forcing v_P(sum c_m m) >= k for monomials of valuation >= vlow."""
    data = []
    lo = None
    for m in monos:
        v, _ = X.monomial_series(P, m, 1)
        lo = v if lo is None else min(lo, v)
    if lo is None or lo >= k:
        return []
    for m in monos:
        v, s = X.monomial_series(P, m, max(1, k - v))
        data.append((v, s))
    rows = []
    for j in range(lo, k):
        row = []
        for v, s in data:
            i = j - v
            row.append(s[i] if 0 <= i < len(s) else 0)
        rows.append(row)
    return rows


def _rr_hyperelliptic(X: HyperellipticCurve, D: Divisor) -> RRBasis:
    p, g = X.p, X.genus
    Dd = D.as_dict()
    mult: dict[int, int] = {}
    for P, n in Dd.items():
        if P.kind == "a" and n > 0:
            e = 2 if P.coords[1] == 0 else 1
            c = P.coords[0]
            mult[c] = max(mult.get(c, 0), ceil(n / e))
    d = Poly((1,), p)
    for c, m in sorted(mult.items()):
        d = d * Poly((-c, 1), p) ** m
    deg_d = d.degree
    if X.odd:
        M = Dd.get(X.infinity[0], 0) + 2 * deg_d
        amax = M // 2 if M >= 0 else -1
        bmax = (M - (2 * g + 1)) // 2 if M >= 2 * g + 1 else -1
        inf_conditions = []
    else:
        Ms = [Dd.get(P, 0) + deg_d for P in X.infinity]
        Mx = max(Ms)
        amax = Mx if Mx >= 0 else -1
        bmax = Mx - (g + 1) if Mx >= g + 1 else -1
        inf_conditions = [(P, -Mi) for P, Mi in zip(X.infinity, Ms)]
    monos = [(i, 0) for i in range(amax + 1)] + [(i, 1) for i in range(bmax + 1)]
    if not monos:
        return RRBasis(D, ())
    pts = set()
    for c in mult:
        pts.update(X.fiber(c).support)
    pts.update(P for P, n in Dd.items() if P.kind == "a" and n < 0)
    rows: list[list[int]] = []
    for P in sorted(pts):
        c = P.coords[0]
        vd = mult.get(c, 0) * (2 if P.coords[1] == 0 else 1)
        k = vd - Dd.get(P, 0)
        if k > 0:
            rows.extend(_series_rows(X, P, monos, k))
    for P, k in inf_conditions:
        rows.extend(_series_rows(X, P, monos, k))
    basis = []
    for vec in _nullspace_rows(rows, len(monos), p):
        num = {m: c for m, c in zip(monos, vec) if c}
        basis.append(FunctionElem(num, {(i, 0): c for i, c in enumerate(d.c) if c}, p))
    return RRBasis(D, tuple(basis))


# --- plane models ---------------------------------------------------------

def _choose_lines(X: PlaneCurve, D: Divisor) -> list[tuple[Line, int]]:
    chosen: dict[tuple[int, int, int], list] = {}
    vH: dict[PointRef, int] = defaultdict(int)
    for P, n in D.positive().items:
        lines = X.lines_through(P)
        while vH[P] < n:
            pick = next((ln for ln in lines if ln.split), None)
            if pick is None:
                pick = next((ln for ln in lines if ln.form not in chosen and ln.usable), None)
                if pick is None:
                    raise ValueError(f"not enough usable lines through {P}; use a larger p")
            entry = chosen.setdefault(pick.form, [pick, 0])
            entry[1] += 1
            for R, m in pick.rational.items():
                vH[R] += m
    return [(ln, e) for ln, e in chosen.values()]


def _forms_of_degree(n: int, d: int, nf_var: int) -> list[tuple[int, int, int]]:
    out = []
    for a in range(n, -1, -1):
        for b in range(n - a, -1, -1):
            m = (a, b, n - a - b)
            if n < d or m[nf_var] < d:
                out.append(m)
    return out


def _rr_plane(X: PlaneCurve, D: Divisor) -> RRBasis:
    p = X.p
    lines = _choose_lines(X, D)
    n = sum(e for _, e in lines)
    H: dict = {(0, 0, 0): 1}
    vH: dict[PointRef, int] = defaultdict(int)
    for ln, e in lines:
        lin = {(1, 0, 0): ln.form[0], (0, 1, 0): ln.form[1], (0, 0, 1): ln.form[2]}
        for _ in range(e):
            H = _pmul(H, lin, p)
        for R, m in ln.rational.items():
            vH[R] += m * e
    monos = _forms_of_degree(n, X.d, X.nf_var)
    Dd = D.as_dict()
    rows: list[list[int]] = []
    for R in sorted(set(vH) | set(Dd)):
        k = vH.get(R, 0) - Dd.get(R, 0)
        if k > 0:
            rows.extend(_series_rows(X, R, monos, k))
    for ln, e in lines:
        if ln.split:
            continue
        res = ln.residual
        coords = [Poly((ln.base[i], ln.direction[i]), p) % res for i in range(3)]
        pw = [[Poly((1,), p)] for _ in range(3)]
        for i in range(3):
            for _ in range(n):
                pw[i].append(pw[i][-1] * coords[i] % res)
        cols = []
        for a, b, c in monos:
            val = pw[0][a] * pw[1][b] % res * pw[2][c] % res
            cols.append([val[j] for j in range(res.degree)])
        rows.extend([[col[j] for col in cols] for j in range(res.degree)])
    basis = []
    for vec in _nullspace_rows(rows, len(monos), p):
        num = {m: c for m, c in zip(monos, vec) if c}
        basis.append(FunctionElem(num, H, p))
    return RRBasis(D, tuple(basis))


# --- linear-system probes -------------------------------------------------

def is_base_point(X: CurveModel, D: Divisor, P: PointRef) -> bool:
    h = h0(X, D)
    if h == 0:
        raise ValueError("empty linear system")
    return h0(X, D - Divisor.point(P)) == h


def _base_candidates(X: CurveModel, D: Divisor) -> list[PointRef]:
    """Rational points where a fixed nonzero section of L(D) vanishes on D."""
    h = rr_space(X, D).basis[0]
    cand = set(D.support) | set(X._candidate_points(h))
    return [P for P in sorted(cand) if X.valuation(h, P) + D.coef(P) > 0]


def base_points(X: CurveModel, D: Divisor) -> list[PointRef]:
    """Rational base points of |D|."""
    if h0(X, D) == 0:
        raise ValueError("empty linear system")
    return [P for P in _base_candidates(X, D) if is_base_point(X, D, P)]


def base_locus(X: CurveModel, D: Divisor) -> Divisor:
    """Rational part of the base locus, with multiplicities."""
    h = h0(X, D)
    out = {}
    for P in base_points(X, D):
        m = 1
        while h0(X, D - Divisor.point(P, m + 1)) == h:
            m += 1
        out[P] = m
    return Divisor(out)


def is_smooth_system(X: CurveModel, A: Divisor) -> bool:
    """|A| nonempty and no rational base point P stays a base point of |A - P|."""
    h = h0(X, A)
    if h == 0:
        return False
    if A.degree == 0:
        return True
    for P in base_points(X, A):
        hp = h0(X, A - Divisor.point(P))
        if hp == h and h0(X, A - Divisor.point(P, 2)) == hp:
            return False
    return True


@dataclass(frozen=True)
class SeparationVerdict:
    separates: bool
    failures: tuple[tuple[PointRef, PointRef], ...]
    scope: str = "rational-points-only"

    def __bool__(self) -> bool:
        return self.separates


def separates(X: CurveModel, D: Divisor, stop_early: bool = True) -> SeparationVerdict:
    """h0(D - P - Q) = h0(D) - 2 for all rational P, Q (P = Q allowed)."""
    h = h0(X, D)
    pts = X.points()
    bad = []
    for i, P in enumerate(pts):
        for Q in pts[i:]:
            if h0(X, D - Divisor.point(P) - Divisor.point(Q)) != h - 2:
                bad.append((P, Q))
                if stop_early:
                    return SeparationVerdict(False, tuple(bad))
    return SeparationVerdict(not bad, tuple(bad))


def _image_point(X: CurveModel, basis, M: Divisor, P: PointRef) -> tuple[int, ...]:
    k = M.coef(P)
    vals = []
    for h in basis:
        s = X.function_series(h, P, 1)
        if s is None:
            vals.append(0)
            continue
        v, c = s
        vals.append(c[0] if v == -k else 0)
    lead = next(i for i, v in enumerate(vals) if v)
    inv = pow(vals[lead], -1, X.p)
    return tuple(v * inv % X.p for v in vals)


def phi_b_profile(X: CurveModel, b: Divisor) -> dict:
    """Probe of the map given by |b|: mapping degree via the Hilbert function
    of the image, very ampleness and the largest rational fiber."""
    from .multmap import map_degree

    if not isinstance(X, HyperellipticCurve):
        raise ValueError("phi_b_profile expects a hyperelliptic or elliptic model")
    hb = h0(X, b)
    if hb < 2:
        raise ValueError("|b| must have dimension at least 1")
    B = base_locus(X, b)
    M = b - B
    N = hb - 1
    md = map_degree(X, b)
    degree, e = md["map_degree"], md["image_degree"]
    basis = rr_space(X, M).basis
    fibers: dict[tuple[int, ...], list[PointRef]] = defaultdict(list)
    for P in X.points():
        fibers[_image_point(X, basis, M, P)].append(P)
    max_fiber = max(len(v) for v in fibers.values())
    very_ample = bool(B.is_zero() and N >= 2 and separates(X, b))
    return {
        "birational": degree == 1,
        "map_degree": degree,
        "image_degree": e,
        "very_ample": very_ample,
        "max_singularity": max_fiber,
        "scope": "rational-points-only",
    }
