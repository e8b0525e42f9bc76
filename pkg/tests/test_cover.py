from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scrollkit.algebra import Poly
from scrollkit.cover import (
    branch_and_ramification,
    h1_diagram_check,
    involution_genus_check,
    make_cover,
    project,
    projection_identity,
    pullback,
    pushforward,
    pushforward_twist,
    random_cover_poly,
    random_liftable,
    report,
    start_state,
    twist,
    unproject,
    verify_segre,
)
from scrollkit.curve import Divisor, PointRef, canonical_divisor, rng_for
from scrollkit.jacobian import Jacobian, is_equivalent
from scrollkit.riemann_roch import h0

P = 31
CUBIC = Poly([1, 2, 0, 1], P)  # u^3 + 2u + 1


@pytest.fixture(scope="module")
def cubic_cover():
    return make_cover(CUBIC)


@pytest.fixture(scope="module")
def cubic_twist(cubic_cover):
    return pushforward_twist(cubic_cover, seed=1)


@pytest.fixture(scope="module")
def quintic_cover():
    return make_cover(random_cover_poly(5, P, 2))


def test_cubic_genera(cubic_cover):
    assert (cubic_cover.X.genus, cubic_cover.C.genus) == (1, 2)


def test_quintic_genera(quintic_cover):
    assert (quintic_cover.X.genus, quintic_cover.C.genus) == (2, 4)


@pytest.mark.parametrize("coeffs", [[0, 1, 0, 1], [0, 3, 1, 0, 0, 1]])
def test_zero_constant_term_rejected(coeffs):
    with pytest.raises(ValueError):
        make_cover(Poly(coeffs, P))


def test_non_squarefree_rejected():
    with pytest.raises(ValueError):
        make_cover(Poly.from_roots([1, 1, 2], P))


def test_cubic_branch_and_ramification(cubic_cover):
    rep = branch_and_ramification(cubic_cover)
    X, C = cubic_cover.X, cubic_cover.C
    assert rep.branch == Divisor.sum_points([X.affine_point(0, 1), X.affine_point(0, P - 1)])
    assert rep.ramification == Divisor.sum_points([C.affine_point(0, 1), C.affine_point(0, P - 1)])


@pytest.mark.parametrize("degree", [4, 6])
def test_even_degree_branch_includes_infinity(degree):
    cov = make_cover(random_cover_poly(degree, P, 3))
    rep = branch_and_ramification(cov)
    assert rep.branch.degree == 4
    for Q in cov.C.infinity:
        assert rep.ramification.coef(Q) == 1
    assert pullback(cov, rep.branch) == rep.ramification * 2


def test_nonsquare_constant_term_is_an_error():
    # 3 is not a square mod 31
    cov = make_cover(Poly([3, 1, 0, 1], P))
    with pytest.raises(ValueError):
        branch_and_ramification(cov)


def test_cubic_twist(cubic_cover, cubic_twist):
    E = cubic_twist.twist
    assert E.degree == -1
    assert is_equivalent(cubic_cover.X, E * -2, cubic_twist.branch)
    one, rhs = projection_identity(cubic_cover, E, Divisor())
    assert one == 1 == rhs
    assert h0(cubic_cover.X, E) == 0


def test_cubic_segre(cubic_cover, cubic_twist):
    E = cubic_twist.twist
    X = cubic_cover.X
    tests = [random_liftable(cubic_cover, d, 4, d) for d in range(5)]
    r = verify_segre(cubic_cover, E, tests)
    assert r["ok"] and r["speciality_scroll"] == r["speciality_curve"] == 1
    b = canonical_divisor(X) - E
    assert cubic_cover.C.genus == b.degree + 1 == 2


def test_degree_three_segre_count(cubic_cover, cubic_twist):
    m = random_liftable(cubic_cover, 3, 5, 0)
    lhs, rhs = projection_identity(cubic_cover, cubic_twist.twist, m)
    assert (lhs, rhs) == (5, 5)
    assert pullback(cubic_cover, m).degree == 6


def test_push_pull_degree(cubic_cover):
    m = random_liftable(cubic_cover, 4, 6, 0)
    assert pushforward(cubic_cover, pullback(cubic_cover, m)) == m * 2


@pytest.mark.parametrize("seed", [2, 7])
def test_quintic_twist_and_checks(seed):
    cov = make_cover(random_cover_poly(5, P, seed))
    rep = pushforward_twist(cov, seed=seed)
    assert rep.twist.degree == -1
    # halves of a class form a coset of J[2](F_p)
    J = Jacobian.of(cov.X)
    assert rep.candidates == len(J.square_roots(J.identity))
    assert involution_genus_check(cov)
    assert h1_diagram_check(cov)


def test_involution_genus_examples(cubic_cover, quintic_cover):
    assert involution_genus_check(cubic_cover)
    assert involution_genus_check(quintic_cover)


def test_h1_diagram_degree(cubic_cover):
    from scrollkit.curve import g12_divisor

    fib = g12_divisor(cubic_cover.X, 0)
    pb = pullback(cubic_cover, fib)
    assert pb.degree == 4
    assert pb == Divisor({cubic_cover.C.affine_point(0, 1): 2,
                          cubic_cover.C.affine_point(0, P - 1): 2})
    assert h1_diagram_check(cubic_cover)


def test_project_unproject_round_trip(cubic_cover):
    s0 = start_state(cubic_cover)
    x = cubic_cover.C.points()[3]
    s1 = unproject(project(s0, x), x)
    assert s1 == s0 and report(s1) == report(s0) == {"h0": 2, "speciality": 1}


def test_projection_speciality_is_h0(quintic_cover):
    C = quintic_cover.C
    pts = [Q for Q in C.points() if Q.kind == "a"]
    rng = rng_for(8)
    for r in range(1, 5):
        A = [pts[i] for i in rng.choice(len(pts), size=r, replace=False)]
        s = start_state(quintic_cover)
        for Q in A:
            s = project(s, Q)
        assert report(s)["speciality"] == h0(C, Divisor.sum_points(A))


def test_twist_identity(cubic_cover, cubic_twist):
    X = cubic_cover.X
    K = canonical_divisor(X)
    b = K - cubic_twist.twist
    for t in range(6):
        m = random_liftable(cubic_cover, t % 4, 9, t)
        s = twist(start_state(cubic_cover), m)
        assert report(s)["h0"] == h0(X, b + m) + h0(X, K + m)


@given(st.integers(0, 10 ** 6), st.integers(0, 5), st.integers(0, 2))
@settings(max_examples=25, deadline=None)
def test_projection_formula(cubic_cover, cubic_twist, seed, deg, neg):
    pos = random_liftable(cubic_cover, deg + neg, seed, 0)
    m = pos - random_liftable(cubic_cover, neg, seed, 1)
    lhs, rhs = projection_identity(cubic_cover, cubic_twist.twist, m)
    assert lhs == rhs


def test_projection_formula_quintic(quintic_cover):
    rep = pushforward_twist(quintic_cover, seed=3)
    for t in range(20):
        m = random_liftable(quintic_cover, t % 7, 10, t)
        lhs, rhs = projection_identity(quintic_cover, rep.twist, m)
        assert lhs == rhs


def test_image_of_infinity(cubic_cover):
    C, X = cubic_cover.C, cubic_cover.X
    for Q in C.infinity:
        assert cubic_cover.image(Q) == X.infinity[0]
    assert cubic_cover.image(PointRef("a", (2, 5))) == PointRef("a", (4, 5))
