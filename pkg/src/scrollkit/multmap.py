"""Coranks of multiplication maps H0(D1) x ... x H0(Dk) -> H0(D1 + ... + Dk)
and the hypothesis checkers built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import rank, ser_mul, solve_left
from .curve import CurveModel, Divisor, FunctionElem, PointRef
from .riemann_roch import base_locus, base_points, h0, h1, rr_space

__all__ = [
    "MultMapReport",
    "MembershipError",
    "Verdict",
    "corank",
    "product_rank",
    "map_degree",
    "green_hypothesis",
    "pencil_trick_kernel_check",
    "lange_hypothesis",
    "is_projectively_normal",
    "NormalityReport",
    "corank_additivity_check",
]


class MembershipError(AssertionError):
    """A product of sections fell outside the target Riemann-Roch space."""


@dataclass(frozen=True)
class MultMapReport:
    factors: tuple[Divisor, ...]
    domain_dim: int
    target_dim: int
    rank: int
    degenerate: bool = False
    eval_points: int = 0
    eval_complete: bool = False

    @property
    def corank(self) -> int:
        return self.target_dim - self.rank

    def __post_init__(self) -> None:
        if not 0 <= self.rank <= min(self.domain_dim, self.target_dim):
            raise AssertionError(f"rank {self.rank} out of range")


@dataclass(frozen=True)
class Verdict:
    holds: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds


def _base_point(X: CurveModel, divisors: Sequence[Divisor]) -> PointRef:
    used = set()
    for D in divisors:
        used.update(D.support)
    for P in X.points():
        if P not in used:
            return P
    return X.points()[0]


def _series_at(X: CurveModel, h: FunctionElem, P: PointRef, shift: int, n: int) -> list[int]:
    """Coefficients of t^(j - shift), j < n, for h in L(D) with D(P) = shift."""
    s = X.function_series(h, P, n)
    out = [0] * n
    if s is None:
        return out
    v, c = s
    if v < -shift:
        raise MembershipError(f"pole of order {-v} at {P} exceeds {shift}")
    off = v + shift
    for i in range(n - off):
        out[off + i] = c[i]
    return out


def _eval_points(X: CurveModel, divisors: Sequence[Divisor], need: int) -> list[PointRef]:
    used = set()
    for D in divisors:
        used.update(D.support)
    return [P for P in X.points() if P not in used][:need]


def product_rank(X: CurveModel, factors: Sequence[Sequence[FunctionElem]],
                 divisors: Sequence[Divisor], symmetric: Sequence[int] | None = None,
                 check: bool = True) -> tuple[int, int, bool]:
    """Rank of the span of products f1*...*fk, fi drawn from factors[i], inside
    L(sum divisors). factors[i] must lie in L(divisors[i]).

    symmetric[i] = j < i marks factor i as a copy of factor j; index tuples are
    then taken nondecreasing along the copy. Returns (rank, eval points used,
    whether the evaluation check is a proof)."""
    p = X.p
    E = sum(divisors, Divisor())
    target = rr_space(X, E).basis
    if not target or any(len(f) == 0 for f in factors):
        return 0, 0, False
    n = max(E.degree + 1, 1)
    P0 = _base_point(X, divisors)
    fac_series = [[_series_at(X, h, P0, D.coef(P0), n) for h in fs]
                  for fs, D in zip(factors, divisors)]
    tgt_series = [_series_at(X, h, P0, E.coef(P0), n) for h in target]

    pts = _eval_points(X, divisors, E.degree + 1) if check else []
    fac_vals = [[[X.evaluate(h, Q) for Q in pts] for h in fs] for fs in factors]
    tgt_vals = [[X.evaluate(h, Q) for Q in pts] for h in target]

    products: list[list[int]] = []
    prod_vals: list[list[int]] = []
    k = len(factors)
    sym = list(symmetric) if symmetric is not None else [-1] * k
    chosen = [0] * k

    def rec(i: int, ser: list[int], vals: list[int]) -> None:
        if i == k:
            products.append(ser)
            prod_vals.append(vals)
            return
        start = chosen[sym[i]] if sym[i] >= 0 else 0
        for j in range(start, len(factors[i])):
            chosen[i] = j
            s2 = ser_mul(ser, fac_series[i][j], n, p)
            v2 = [a * b % p for a, b in zip(vals, fac_vals[i][j])]
            rec(i + 1, s2, v2)

    rec(0, [1] + [0] * (n - 1), [1] * len(pts))
    coords = solve_left(tgt_series, products, p)
    if coords is None:
        raise MembershipError("product outside the target space")
    for c, pv in zip(coords, prod_vals):
        for q, val in enumerate(pv):
            if sum(ci * tv[q] for ci, tv in zip(c, tgt_vals)) % p != val:
                raise MembershipError("series coordinates disagree with pointwise values")
    return rank(coords, p), len(pts), len(pts) > E.degree


def corank(X: CurveModel, divisors: Sequence[Divisor], check: bool = True) -> MultMapReport:
    """Corank of the multiplication map on complete linear systems."""
    divisors = tuple(divisors)
    if not divisors:
        raise ValueError("need at least one factor")
    bases = [rr_space(X, D).basis for D in divisors]
    E = sum(divisors, Divisor())
    target_dim = h0(X, E)
    domain = 1
    for b in bases:
        domain *= len(b)
    if domain == 0:
        return MultMapReport(divisors, 0, target_dim, 0, degenerate=True)
    sym = []
    for i, D in enumerate(divisors):
        sym.append(next((j for j in range(i - 1, -1, -1) if divisors[j] == D), -1))
    r, npts, complete = product_rank(X, bases, divisors, sym, check)
    return MultMapReport(divisors, domain, target_dim, r, eval_points=npts,
                         eval_complete=complete)


def map_degree(X: CurveModel, D: Divisor) -> dict:
    """Degree of the map given by |D| and of its image, from the Hilbert
    function of the image curve (stable from k = deg - N + 1 on)."""
    hD = h0(X, D)
    if hD < 2:
        raise ValueError("|D| must have dimension at least 1")
    B = base_locus(X, D)
    M = D - B
    d0 = M.degree
    N = hD - 1
    if N == 1:
        return {"map_degree": d0, "image_degree": 1, "moving_degree": d0}
    k = max(1, d0 - N + 1)
    r1 = corank(X, [M] * k).rank if k > 1 else hD
    r2 = corank(X, [M] * (k + 1)).rank
    e = r2 - r1
    if e <= 0 or d0 % e:
        raise AssertionError(f"Hilbert function difference {e} does not divide {d0}")
    return {"map_degree": d0 // e, "image_degree": e, "moving_degree": d0}


def _is_bpf(X: CurveModel, D: Divisor) -> bool:
    return h0(X, D) > 0 and not base_points(X, D)


def green_hypothesis(X: CurveModel, a: Divisor, b: Divisor) -> Verdict:
    """h1(a - b) <= h0(b) - 2 with b effective and base-point-free."""
    if not b.is_effective():
        return Verdict(False, "b is not effective")
    if not _is_bpf(X, b):
        return Verdict(False, "b has base points")
    lhs, rhs = h1(X, a - b), h0(X, b) - 2
    return Verdict(lhs <= rhs, f"h1(a-b)={lhs}, h0(b)-2={rhs}")


def _pencil_base(X: CurveModel, L: Divisor, s1: FunctionElem, s2: FunctionElem) -> Divisor:
    out = {}
    for P in X.points():
        m = min(X.valuation(s, P) for s in (s1, s2)) + L.coef(P)
        if m > 0:
            out[P] = m
    return Divisor(out)


def pencil_trick_kernel_check(X: CurveModel, L: Divisor, F: Divisor,
                              sections: tuple[FunctionElem, FunctionElem] | None = None
                              ) -> dict:
    """Kernel of V x H0(F) -> H0(F + L) for a pencil V in H0(L), against
    h0(F - L + B) with B the base locus of the pencil (rational points)."""
    basis = rr_space(X, L).basis
    if len(basis) < 2:
        raise ValueError("L must have at least two sections")
    s1, s2 = sections if sections is not None else basis[:2]
    B = _pencil_base(X, L, s1, s2)
    fbasis = rr_space(X, F).basis
    r, _, _ = product_rank(X, [[s1, s2], fbasis], [L, F])
    kernel = 2 * len(fbasis) - r
    expected = h0(X, F - L + B)
    return {"kernel": kernel, "expected": expected, "base_locus": B,
            "ok": kernel == expected}


def lange_hypothesis(X: CurveModel, b1: Divisor, b2: Divisor, a: Divisor) -> Verdict:
    """The three conditions under which s(b1, b2) = 0 follows from a smaller corank."""
    if not a.is_effective():
        raise ValueError("a must be effective")
    d = a.degree
    if h0(X, b1 - a) != h0(X, b1) - d:
        return Verdict(False, "condition 1: a does not impose independent conditions on b1")
    hb2 = h0(X, b2)
    for P in a.support:
        if h0(X, b2 - Divisor.point(P)) != hb2 - 1:
            return Verdict(False, f"condition 2: {P} is a base point of b2")
    c = corank(X, [b1 - a, b2]).corank
    if c:
        return Verdict(False, f"condition 3: s(b1-a, b2) = {c}")
    return Verdict(True, "all three conditions hold")


@dataclass(frozen=True)
class NormalityReport:
    coranks: dict[int, int]
    base_point_free: bool
    birational: bool | None
    extended: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def applicable(self) -> bool:
        return self.base_point_free and bool(self.birational)

    @property
    def normal(self) -> bool:
        return all(c == 0 for c in self.coranks.values()) and self.extended


def is_projectively_normal(X: CurveModel, D: Divisor, k_max: int = 4) -> NormalityReport:
    """Coranks s(D,...,D) for 2 <= k <= k_max, extended to every k through
    s(mD, D) = 0 (directly or by the Green bound) and corank additivity."""
    notes = []
    bpf = _is_bpf(X, D)
    if not bpf:
        notes.append("|D| has base points")
    birational = None
    if bpf and h0(X, D) >= 2:
        birational = map_degree(X, D)["map_degree"] == 1
        if not birational:
            notes.append("|D| is not birational")
    coranks = {k: corank(X, [D] * k).corank for k in range(2, k_max + 1)}
    extended = False
    if all(c == 0 for c in coranks.values()) and D.degree > 0:
        # s(D^k) = s(kD - D, D) once the lower products are onto; beyond the
        # range where h1((m-1)D) can be nonzero the Green bound is automatic
        extended = True
        m = k_max
        while (m - 1) * D.degree <= 2 * X.genus - 2:
            if not green_hypothesis(X, D * m, D) and corank(X, [D * m, D]).corank:
                extended = False
                notes.append(f"s({m}D, D) != 0")
                break
            m += 1
        if extended and h0(X, D) < 2:
            extended = False
            notes.append("h0(D) < 2")
    return NormalityReport(coranks, bpf, birational, extended, tuple(notes))


def corank_additivity_check(X: CurveModel, F1: Divisor, F2: Divisor,
                            rest: Sequence[Divisor]) -> Verdict:
    """s(F1, F2, rest) = s(F1 + F2, rest), valid when s(F1, F2) = 0."""
    pre = corank(X, [F1, F2]).corank
    if pre:
        return Verdict(False, f"skipped: s(F1, F2) = {pre}")
    lhs = corank(X, [F1, F2, *rest]).corank
    rhs = corank(X, [F1 + F2, *rest]).corank
    return Verdict(lhs == rhs, f"{lhs} vs {rhs}")
