"""Decomposable ruled surfaces P(O + O(e)) over a curve, the scrolls cut out
by |X0 + b f|, and the classification, normality and existence routines that
reduce to linear systems on the base curve."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .algebra import rank
from .curve import (
    CurveModel,
    Divisor,
    HyperellipticCurve,
    PlaneCurve,
    PointRef,
    canonical_divisor,
    g12_divisor,
    random_divisor,
    rng_for,
)
from .jacobian import Jacobian, JacobianBudgetError, is_equivalent
from .multmap import Verdict, corank, is_projectively_normal
from .riemann_roch import base_points, h0, h1, is_smooth_system, rr_space

__all__ = [
    "RuledSurfaceModel",
    "PolarizedScroll",
    "ClassificationMismatch",
    "h0_scroll",
    "speciality",
    "is_canonical_pair",
    "defines_canonical_scroll",
    "classify_bisecant",
    "scroll_corank",
    "hypersurface_count",
    "normality_verdict",
    "fixed_space_dims",
    "existence_scan",
    "divisor_family_probe",
    "projection_speciality",
]

log = logging.getLogger(__name__)


class ClassificationMismatch(AssertionError):
    """The h0 criterion and the explicit case list disagree."""


@dataclass(frozen=True)
class RuledSurfaceModel:
    """P(O + O(e)) over X; sections X0 and X1 ~ X0 - e f."""

    X: CurveModel
    e: Divisor


@dataclass(frozen=True)
class PolarizedScroll:
    surface: RuledSurfaceModel
    b: Divisor
    canonical: bool = False

    @classmethod
    def canonical_of(cls, X: CurveModel, b: Divisor) -> PolarizedScroll:
        """The scroll with e = K - b."""
        return cls(RuledSurfaceModel(X, canonical_divisor(X) - b), b, canonical=True)

    @property
    def X(self) -> CurveModel:
        return self.surface.X

    @property
    def e(self) -> Divisor:
        return self.surface.e

    @property
    def ambient_dim(self) -> int:
        return h0(self.X, self.b) + h0(self.X, self.b + self.e) - 1

    @property
    def degree(self) -> int:
        return self.b.degree + (self.b + self.e).degree


def h0_scroll(S: RuledSurfaceModel, n: int, c: Divisor) -> int:
    """h0 of n X0 + c f, summed over the graded pieces c + i e."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum(h0(S.X, c + S.e * i) for i in range(n + 1))


def speciality(scroll: PolarizedScroll) -> int:
    X, b = scroll.X, scroll.b
    s = h1(X, b) + h1(X, b + scroll.e)
    if scroll.canonical and h1(X, b) == 0 and s != 1:
        raise AssertionError(f"canonical scroll with speciality {s}")
    return s


# --- the canonical predicate ------------------------------------------------

def is_canonical_pair(X: CurveModel, b: Divisor) -> Verdict:
    """b nonspecial of degree >= 2g - 2, b not ~ K, and 2(b - K) smooth.

    The class 2(b - K) is handled through its Riemann-Roch space, so no
    effective representative is needed; base points are rational only."""
    g = X.genus
    K = canonical_divisor(X)
    if b.degree < 2 * g - 2:
        return Verdict(False, f"degree {b.degree} < 2g-2")
    if b.degree == 2 * g - 2 and is_equivalent(X, b, K):
        return Verdict(False, "b ~ K")
    if h1(X, b):
        return Verdict(False, "b is special")
    A = b * 2 - K * 2
    if h0(X, A) == 0:
        return Verdict(False, "2(b-K) is not effective")
    if not is_smooth_system(X, A):
        return Verdict(False, "2(b-K) is not smooth")
    return Verdict(True, "canonical pair")


def _odd_jacobian(X: CurveModel) -> Jacobian:
    if not (isinstance(X, HyperellipticCurve) and X.odd):
        raise ValueError("case list needs an odd hyperelliptic or elliptic model")
    return Jacobian.of(X)


def _case_list(X: HyperellipticCurve, b: Divisor) -> str | None:
    """Which exceptional class b falls into, tested in the Jacobian."""
    J = _odd_jacobian(X)
    g, d = X.genus, b.degree
    c = J.class_of(b)  # class of b - deg(b) inf; K and g12 are multiples of inf
    if d == 2 * g and c == J.identity:
        return "a"
    if d == 2 * g - 1 and c in J.weierstrass_classes(1):
        return "b"
    if d == 2 * g - 2 and c != J.identity and c in J.weierstrass_classes(2):
        return "c"
    return None


def defines_canonical_scroll(X: CurveModel, b: Divisor) -> Verdict:
    """Canonical pair outside the hyperelliptic and elliptic exceptions."""
    pair = is_canonical_pair(X, b)
    if not pair:
        return Verdict(False, f"not a canonical pair: {pair.reason}")
    if X.genus == 1:
        if b.degree <= 2:
            return Verdict(False, "elliptic with deg b <= 2")
        return Verdict(True, "elliptic, deg b >= 3")
    if isinstance(X, HyperellipticCurve):
        case = _case_list(X, b)
        if case:
            return Verdict(False, f"exception ({case})")
        return Verdict(True, "hyperelliptic, no exception applies")
    return Verdict(True, "nonhyperelliptic base")


def _elliptic_branch_case(X: CurveModel, b: Divisor, branch: Divisor) -> bool:
    pts = []
    for P, m in branch.items:
        if m < 0:
            raise ValueError("branch divisor must be effective")
        pts += [P] * m
    if len(pts) != 4:
        raise ValueError("branch divisor must have degree 4")
    if not is_equivalent(X, branch, b * 2):
        raise ValueError("branch divisor is not in |2b|")
    a0 = pts[0]
    for j in (1, 2, 3):
        rest = [P for i, P in enumerate(pts) if i not in (0, j)]
        if (is_equivalent(X, Divisor.sum_points([a0, pts[j]]), b)
                and is_equivalent(X, Divisor.sum_points(rest), b)):
            return True
    return False


def classify_bisecant(X: CurveModel, b: Divisor, branch: Divisor | None = None) -> dict:
    """Whether the bisecant curve in |2X1| is hyperelliptic, by the h0 test
    and by the explicit case list; the two must agree."""
    pair = is_canonical_pair(X, b)
    if not pair:
        raise ValueError(f"not a canonical pair: {pair.reason}")
    g = X.genus
    if isinstance(X, PlaneCurve) or not isinstance(X, HyperellipticCurve):
        return {"hyperelliptic_C": False, "matched_case": "none", "criterion": None}
    if g == 1:
        d = b.degree
        if d == 2:
            if branch is None:
                return {"hyperelliptic_C": None, "matched_case": "elliptic-deg2-needs-branch",
                        "criterion": None}
            hyp = _elliptic_branch_case(X, b, branch)
            return {"hyperelliptic_C": hyp,
                    "matched_case": "elliptic-deg2" if hyp else None, "criterion": hyp}
        crit = h0(X, b - g12_divisor(X)) == h0(X, b) - 1 if d != 0 else False
        case = "elliptic-deg1" if d == 1 else None
        if crit != (case is not None):
            raise ClassificationMismatch(f"criterion {crit}, case {case} for {b}")
        return {"hyperelliptic_C": crit, "matched_case": case, "criterion": crit}
    crit = h0(X, b - g12_divisor(X)) == h0(X, b) - 1
    case = _case_list(X, b)
    if crit != (case is not None):
        raise ClassificationMismatch(f"criterion {crit}, case {case} for {b}")
    return {"hyperelliptic_C": crit, "matched_case": case, "criterion": crit}


# --- coranks and normality ---------------------------------------------------

@dataclass(frozen=True)
class ScrollCorank:
    k: int
    terms: tuple[int, ...]  # terms[i]: i copies of b + e, k - i copies of b

    @property
    def total(self) -> int:
        return sum(self.terms)

    @property
    def b_side(self) -> int:
        return self.terms[0]

    @property
    def k_side(self) -> int:
        return self.terms[-1]

    @property
    def mixed(self) -> int:
        return self.total - self.b_side - self.k_side


def scroll_corank(scroll: PolarizedScroll, k: int) -> ScrollCorank:
    """Corank of Sym^k H0(H) -> H0(kH), one term per graded piece."""
    if k < 1:
        raise ValueError("k must be positive")
    X, b, c = scroll.X, scroll.b, scroll.b + scroll.e
    terms = tuple(corank(X, [b] * (k - i) + [c] * i).corank for i in range(k + 1))
    return ScrollCorank(k, terms)


def hypersurface_count(scroll: PolarizedScroll, k: int) -> int:
    """Independent degree-k hypersurfaces through the scroll."""
    N = scroll.ambient_dim
    n = comb(N + k, k) - h0_scroll(scroll.surface, k, scroll.b * k) + scroll_corank(scroll, k).total
    if n < 0:
        raise AssertionError(f"negative hypersurface count {n} at k={k}")
    return n


@dataclass(frozen=True)
class NormalityVerdict:
    normal: bool
    table: dict[int, ScrollCorank]
    failure_side: str | None
    failure_k: int | None
    extended: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def label(self) -> str:
        return "projectively normal" if self.normal else "not projectively normal"


def normality_verdict(X: CurveModel, b: Divisor, k_max: int = 4) -> NormalityVerdict:
    """Projective normality of the canonical scroll of b, localized to the
    K side, the b side or the mixed terms."""
    ok = defines_canonical_scroll(X, b)
    if not ok:
        raise ValueError(f"b does not define a canonical scroll: {ok.reason}")
    S = PolarizedScroll.canonical_of(X, b)
    table = {k: scroll_corank(S, k) for k in range(2, k_max + 1)}
    side, at = None, None
    for k, row in table.items():
        if row.total:
            at = k
            side = "K" if row.k_side else ("b" if row.b_side else "mixed")
            break
    notes = []
    extended = True
    if at is None:
        K = canonical_divisor(X)
        for name, D in (("K", K), ("b", b)):
            if D.degree == 0:
                continue  # K ~ 0 on an elliptic base: constants only
            rep = is_projectively_normal(X, D, k_max)
            if not rep.extended:
                extended = False
                notes.append(f"{name} side not extended past k={k_max}: {rep.notes}")
        if b.degree - X.genus < 2 and X.genus > 1:
            notes.append("mixed terms beyond k_max not covered by the Green bound")
            extended = False
    normal = at is None and extended
    return NormalityVerdict(normal, table, side, at, extended, tuple(notes))


def fixed_space_dims(S: RuledSurfaceModel) -> dict:
    """Dimensions of |2X1| and of its two invariant subspaces."""
    X, e = S.X, S.e
    if e.degree == 0 and h0(X, e) == 1:
        raise ValueError("e ~ 0 is excluded")
    a, c = h0(X, -e), h0(X, e * -2)
    out = {"dim_2X1": a + c, "dim_F0": c, "dim_F1": a - 1}
    if out["dim_F1"] >= 0 and out["dim_F0"] + out["dim_F1"] + 1 != out["dim_2X1"]:
        raise AssertionError("fixed spaces are not complementary")
    return out


# --- sampling -----------------------------------------------------------------

@dataclass
class ExistenceReport:
    degree: int
    mode: str
    trials: int
    passed: int
    witnesses: list[Divisor] = field(default_factory=list)
    counterexamples: list[Divisor] = field(default_factory=list)
    constructed: list[Divisor] = field(default_factory=list)
    partial: bool = False

    @property
    def fraction(self) -> float:
        return self.passed / self.trials if self.trials else 0.0


def _class_reps(X: CurveModel, degree: int, budget: int):
    J = Jacobian.of(X)
    inf = X.infinity[0]
    for c in J.elements(budget):
        yield J.divisor_of_class(c) + Divisor.point(inf, degree)


def existence_scan(X: CurveModel, degree: int, trials: int, seed: int,
                   exhaustive: bool = False, budget: int = 10**6, keep: int = 5
                   ) -> ExistenceReport:
    """Fraction of degree-d classes that are canonical pairs, by sampling
    rational point sums or by walking all of Pic^d(F_p).

    When deg 2(b - K) < g the canonical classes are also built directly:
    halves of 2K + a for sampled effective a."""
    if trials < 1 and not exhaustive:
        raise ValueError("trials must be positive")
    g = X.genus
    rep = ExistenceReport(degree, "exhaustive" if exhaustive else "sampled", 0, 0)
    if exhaustive:
        samples = _class_reps(X, degree, budget)
    else:
        samples = (random_divisor(X, degree, rng_for(seed, 0, t)) for t in range(trials))
    try:
        for b in samples:
            rep.trials += 1
            if is_canonical_pair(X, b):
                rep.passed += 1
                if len(rep.witnesses) < keep:
                    rep.witnesses.append(b)
            elif len(rep.counterexamples) < keep:
                rep.counterexamples.append(b)
    except JacobianBudgetError:
        rep.partial = True
    a_deg = 2 * degree - 2 * (2 * g - 2)
    if 0 <= a_deg < g and isinstance(X, HyperellipticCurve) and X.odd:
        try:
            rep.constructed = _constructed_canonical(X, degree, a_deg, max(trials, 1), seed,
                                                     budget)
        except JacobianBudgetError:
            rep.partial = True
    return rep


def _constructed_canonical(X: HyperellipticCurve, degree: int, a_deg: int, trials: int,
                           seed: int, budget: int) -> list[Divisor]:
    J = Jacobian.of(X)
    K = canonical_divisor(X)
    inf = X.infinity[0]
    found: dict = {}
    for t in range(trials):
        a = random_divisor(X, a_deg, rng_for(seed, 1, t))
        for half in J.square_roots(J.class_of(K * 2 + a), budget):
            if half in found:
                continue
            b = J.divisor_of_class(half) + Divisor.point(inf, degree)
            if is_canonical_pair(X, b):
                found[half] = b
        if a_deg == 0:
            break
    return [found[c] for c in sorted(found, key=lambda c: (c.u.c, c.v.c))]


def _has_conjugate_pair(X: CurveModel, D: Divisor) -> bool:
    if not isinstance(X, HyperellipticCurve):
        return False
    supp = set(D.support)
    return any(X.conj(P) in supp and X.conj(P) != P for P in supp)


def _has_collinear_triple(X: CurveModel, D: Divisor) -> bool:
    if not isinstance(X, PlaneCurve):
        return False
    pts = [P.coords for P in D.support if P.kind == "a"]
    p = X.p
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            for k in range(j + 1, len(pts)):
                M = [pts[i], pts[j], pts[k]]
                if rank(M, p) < 3:
                    return True
    return False


def divisor_family_probe(X: CurveModel, a: int, trials: int, seed: int,
                         general: bool = False, max_tries: int = 50) -> dict:
    """Statistics of effective degree-a divisors: smoothness, base points,
    speciality. With `general`, samples are reduced and avoid hyperelliptic
    conjugate pairs and collinear triples."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    g = X.genus
    smooth = bpf = 0
    hist: dict[int, int] = {}
    rejected = 0
    for t in range(trials):
        rng = rng_for(seed, 2, t)
        for _ in range(max_tries):
            D = random_divisor(X, a, rng, distinct=general)
            if general and (_has_conjugate_pair(X, D) or _has_collinear_triple(X, D)):
                rejected += 1
                continue
            break
        else:
            raise RuntimeError("could not draw a general divisor")
        if is_smooth_system(X, D):
            smooth += 1
        if a == 0 or not base_points(X, D):
            bpf += 1
        s = h1(X, D)
        hist[s] = hist.get(s, 0) + 1
    out = {
        "a": a,
        "trials": trials,
        "smooth_fraction": smooth / trials,
        "bpf_fraction": bpf / trials,
        "speciality": dict(sorted(hist.items())),
        "rejected": rejected,
    }
    if a >= 2 * g - 1:
        assert smooth == trials and hist == {0: trials}, out
    elif general and a <= g:
        assert hist == {g - a: trials}, out
    return out


def projection_speciality(X: CurveModel, A: Sequence[PointRef]) -> dict:
    """Span of a point set on the canonical model and the speciality of the
    projected scroll, checked against geometric Riemann-Roch."""
    if isinstance(X, HyperellipticCurve):
        raise ValueError("canonical map of a hyperelliptic model is not an embedding")
    pts = list(A)
    if len(set(pts)) != len(pts):
        raise ValueError("points must be distinct")
    K = canonical_divisor(X)
    basis = rr_space(X, K).basis
    rows = []
    for P in pts:
        k = K.coef(P)
        row = []
        for h in basis:
            s = X.function_series(h, P, 1)
            row.append(s[1][0] if s is not None and s[0] == -k else 0)
        rows.append(row)
    span_dim = rank(rows, X.p) - 1
    i_new = 1 + len(pts) - (span_dim + 1)
    D = Divisor.sum_points(pts)
    hA = h0(X, D)
    if span_dim != D.degree - hA or i_new != hA:
        raise AssertionError(f"span {span_dim}, h0 {hA}, i_new {i_new} disagree")
    return {"span_dim": span_dim, "i_new": i_new}
