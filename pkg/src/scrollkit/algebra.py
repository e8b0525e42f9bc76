"""Prime-field arithmetic, univariate polynomials, truncated power series and
dense linear algebra over F_p."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldElem",
    "Poly",
    "is_prime",
    "sqrt_mod",
    "is_square",
    "poly_gcd",
    "is_squarefree",
    "roots_in_field",
    "factors_of_degree",
    "rank_and_nullspace",
    "solve_left",
    "ser_mul",
    "ser_inv",
    "ser_sqrt",
    "ser_pow",
    "hensel_root",
    "series_expand",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _check_modulus(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise ValueError(f"modulus must be an odd prime, got {p}")
    if p >= 1 << 31:
        raise ValueError("modulus too large for the dense int64 kernels")


@dataclass(frozen=True)
class FieldElem:
    """Residue class modulo an odd prime."""

    value: int
    p: int

    def __post_init__(self) -> None:
        _check_modulus(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other: FieldElem | int) -> int:
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise ValueError("field mismatch")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElem(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def inverse(self) -> FieldElem:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElem(self._coerce(other), self.p).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElem(pow(self.value, e, self.p), self.p)

    def is_square(self) -> bool:
        return is_square(self.value, self.p)

    def __int__(self) -> int:
        return self.value


def is_square(a: int, p: int) -> bool:
    a %= p
    return a == 0 or pow(a, (p - 1) // 2, p) == 1


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a mod p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class Poly:
    """Univariate polynomial over F_p, coefficients stored low degree first."""

    __slots__ = ("c", "p", "_hash")

    def __init__(self, coeffs: Iterable[int], p: int):
        c = [int(a) % p for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c: tuple[int, ...] = tuple(c)
        self.p = p
        self._hash = None

    @classmethod
    def x(cls, p: int) -> Poly:
        return cls((0, 1), p)

    @classmethod
    def const(cls, a: int, p: int) -> Poly:
        return cls((a,), p)

    @classmethod
    def from_roots(cls, roots: Iterable[int], p: int) -> Poly:
        out = cls((1,), p)
        for r in roots:
            out = out * cls((-r, 1), p)
        return out

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def __getitem__(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Poly((other,), self.p)
        return isinstance(other, Poly) and self.p == other.p and self.c == other.c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.c, self.p))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({list(self.c)}, p={self.p})"

    def _lift(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.p != self.p:
                raise ValueError("field mismatch")
            return other
        return Poly((int(other),), self.p)

    def __add__(self, other) -> Poly:
        o = self._lift(other)
        n = max(len(self.c), len(o.c))
        return Poly([self[i] + o[i] for i in range(n)], self.p)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly([-a for a in self.c], self.p)

    def __sub__(self, other) -> Poly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Poly:
        return self._lift(other) - self

    def __mul__(self, other) -> Poly:
        o = self._lift(other)
        if not self.c or not o.c:
            return Poly((), self.p)
        p = self.p
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] += a * b
        return Poly([v % p for v in out], p)

    __rmul__ = __mul__

    def scale(self, a: int) -> Poly:
        return Poly([a * v for v in self.c], self.p)

    def __pow__(self, e: int) -> Poly:
        out, base = Poly((1,), self.p), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other) -> tuple[Poly, Poly]:
        b = self._lift(other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.c)
        db = b.degree
        inv = pow(b.lc, -1, p)
        if len(r) - 1 < db:
            return Poly((), p), self
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            coef = r[k] * inv % p
            if coef:
                q[k - db] = coef
                for j in range(db + 1):
                    r[k - db + j] = (r[k - db + j] - coef * b.c[j]) % p
        return Poly(q, p), Poly(r[:db], p)

    def __floordiv__(self, other) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other) -> Poly:
        return divmod(self, other)[1]

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scale(pow(self.lc, -1, self.p))

    def derivative(self) -> Poly:
        return Poly([i * a for i, a in enumerate(self.c)][1:], self.p)

    def __call__(self, a: int) -> int:
        acc = 0
        for coef in reversed(self.c):
            acc = (acc * a + coef) % self.p
        return acc

    def compose(self, other: Poly) -> Poly:
        acc = Poly((), self.p)
        for coef in reversed(self.c):
            acc = acc * other + coef
        return acc

    def powmod(self, e: int, m: Poly) -> Poly:
        out, base = Poly((1,), self.p), self % m
        while e:
            if e & 1:
                out = out * base % m
            base = base * base % m
            e >>= 1
        return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; raises if both inputs vanish."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """(d, s, t) with s*a + t*b = d monic."""
    p = a.p
    r0, r1 = a, b
    s0, s1 = Poly((1,), p), Poly((), p)
    t0, t1 = Poly((), p), Poly((1,), p)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = pow(r0.lc, -1, p)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def is_squarefree(f: Poly) -> bool:
    if f.is_zero():
        raise ValueError("zero polynomial")
    df = f.derivative()
    if df.is_zero():
        return f.degree == 0
    return poly_gcd(f, df).degree == 0


def _split_roots(h: Poly, out: list[int], salt: int = 1) -> None:
    # h is squarefree and splits into distinct linear factors
    p = h.p
    if h.degree == 0:
        return
    if h.degree == 1:
        out.append(-h.c[0] * pow(h.c[1], -1, p) % p)
        return
    shift = salt
    while True:
        w = (Poly((shift, 1), p).powmod((p - 1) // 2, h)) - 1
        d = poly_gcd(h, w) if not w.is_zero() else h
        if 0 < d.degree < h.degree:
            _split_roots(d, out, shift + 1)
            _split_roots(h // d, out, shift + 1)
            return
        shift += 1


def roots_in_field(f: Poly) -> list[tuple[int, int]]:
    """Sorted (root, multiplicity) pairs of f in F_p."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    p = f.p
    if f.degree <= 0:
        return []
    xp = Poly.x(p).powmod(p, f) - Poly.x(p)
    h = poly_gcd(f, xp) if not xp.is_zero() else f.monic()
    roots: list[int] = []
    _split_roots(h, roots)
    out = []
    for r in sorted(roots):
        m, g = 0, f
        lin = Poly((-r, 1), p)
        while True:
            q, rem = divmod(g, lin)
            if not rem.is_zero():
                break
            m += 1
            g = q
        out.append((r, m))
    return out


def factors_of_degree(f: Poly, k: int) -> list[Poly]:
    """Monic irreducible factors of degree k of a squarefree f, sorted."""
    if f.is_zero() or not is_squarefree(f):
        raise ValueError("f must be nonzero and squarefree")
    p = f.p
    x = Poly.x(p)
    rest, xq = f.monic(), x
    for j in range(1, k + 1):
        xq = xq.powmod(p, rest) if rest.degree > 0 else xq
        if rest.degree < j:
            return []
        d = poly_gcd(rest, xq - x) if not (xq - x).is_zero() else rest
        if j == k:
            return sorted(_equal_degree_split(d, k), key=lambda u: u.c)
        rest = rest // d
        xq = xq % rest if rest.degree > 0 else xq
    return []


def _equal_degree_split(h: Poly, k: int, salt: int = 0) -> list[Poly]:
    p = h.p
    if h.degree <= 0:
        return []
    if h.degree == k:
        return [h.monic()]
    e = (p**k - 1) // 2
    c = salt
    while True:
        a = Poly((c % p, 1, c // p), p)
        w = a.powmod(e, h) - 1
        d = poly_gcd(h, w) if not w.is_zero() else h
        if 0 < d.degree < h.degree:
            return _equal_degree_split(d, k, c + 1) + _equal_degree_split(h // d, k, c + 1)
        c += 1


def rank_and_nullspace(M: Sequence[Sequence[int]], p: int, ncols: int | None = None
                       ) -> tuple[int, list[list[int]]]:
    """Rank and a nullspace basis (right kernel) of M over F_p."""
    A = np.array(M, dtype=np.int64).reshape(len(M), -1) % p if len(M) else None
    n = ncols if ncols is not None else (A.shape[1] if A is not None else 0)
    if A is None or A.size == 0:
        return 0, [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    A, pivots = _rref(A, p)
    rank = len(pivots)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for fcol in free:
        v = [0] * n
        v[fcol] = 1
        for r, pc in enumerate(pivots):
            v[pc] = int(-A[r, fcol] % p)
        basis.append(v)
    return rank, basis


def _rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = A.copy()
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: Sequence[Sequence[int]], p: int) -> int:
    if not len(M):
        return 0
    A = np.array(M, dtype=np.int64) % p
    if A.size == 0:
        return 0
    return len(_rref(A, p)[1])


def solve_left(B: Sequence[Sequence[int]], targets: Sequence[Sequence[int]], p: int
               ) -> list[list[int]] | None:
    """Coordinates c_t with c_t . B = t for every target row t; None if some t
    is outside the row space. B must have independent rows."""
    nb = len(B)
    if nb == 0:
        return [[] for _ in targets] if all(not any(t) for t in targets) else None
    Bt = np.array(B, dtype=np.int64).T % p
    T = np.array(targets, dtype=np.int64).reshape(len(targets), -1).T % p
    aug = np.concatenate([Bt, T], axis=1)
    R, pivots = _rref(aug, p)
    if any(c >= nb for c in pivots):
        return None
    if len(pivots) != nb:
        raise ValueError("basis rows are dependent")
    return [[int(R[i, nb + j]) for i in range(nb)] for j in range(T.shape[1])]


# --- truncated power series: plain coefficient lists, low order first -------

def ser_mul(a: Sequence[int], b: Sequence[int], n: int, p: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return [v % p for v in out]


def ser_inv(a: Sequence[int], n: int, p: int) -> list[int]:
    if not a or a[0] % p == 0:
        raise ZeroDivisionError("series with zero constant term")
    inv0 = pow(a[0], -1, p)
    out = [0] * n
    out[0] = inv0
    for k in range(1, n):
        s = 0
        for i in range(1, min(k, len(a) - 1) + 1):
            s += a[i] * out[k - i]
        out[k] = -s * inv0 % p
    return out


def ser_pow(a: Sequence[int], e: int, n: int, p: int) -> list[int]:
    out = [1] + [0] * (n - 1)
    base = list(a[:n]) + [0] * max(0, n - len(a))
    while e:
        if e & 1:
            out = ser_mul(out, base, n, p)
        base = ser_mul(base, base, n, p)
        e >>= 1
    return out


def ser_sqrt(a: Sequence[int], n: int, p: int, root0: int | None = None) -> list[int]:
    """Square root of a series with nonzero square constant term."""
    a = list(a[:n]) + [0] * max(0, n - len(a))
    r0 = root0 if root0 is not None else sqrt_mod(a[0], p)
    if r0 is None or r0 % p == 0 or (r0 * r0 - a[0]) % p:
        raise ValueError("constant term is not a nonzero square")
    out = [0] * n
    out[0] = r0 % p
    inv2r = pow(2 * r0, -1, p)
    for k in range(1, n):
        s = a[k]
        for i in range(1, k):
            s -= out[i] * out[k - i]
        out[k] = s * inv2r % p
    return out


def hensel_root(F: Sequence[Sequence[int]], z0: int, n: int, p: int) -> list[int]:
    """Series root z(t) of sum_k F[k](t) z^k with z(0) = z0, F_z(0, z0) != 0."""
    Fs = [list(c[:n]) + [0] * max(0, n - len(c)) for c in F]

    def evaluate(z):
        val = [0] * n
        der = [0] * n
        for k in range(len(Fs) - 1, -1, -1):
            der = [(d + v) % p for d, v in zip(ser_mul(der, z, n, p), val)]
            val = [(x + y) % p for x, y in zip(ser_mul(val, z, n, p), Fs[k])]
        return val, der

    z = [z0 % p] + [0] * (n - 1)
    val, der = evaluate(z)
    if val[0] % p:
        raise ValueError("initial value is not a root")
    if der[0] % p == 0:
        raise ValueError("singular point: derivative vanishes")
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        val, der = evaluate(z)
        step = ser_mul(val, ser_inv(der, n, p), n, p)
        z = [(a - b) % p for a, b in zip(z, step)]
    return z


def _bivar_eval_x(q: dict[tuple[int, int], int], xs: Sequence[int], n: int, p: int,
                  swap: bool) -> list[list[int]]:
    """Coefficients (as series in t) of q viewed as a polynomial in the
    dependent variable, after substituting the series xs for the other one."""
    by_dep: dict[int, dict[int, int]] = {}
    for (i, j), c in q.items():
        a, b = (j, i) if swap else (i, j)
        by_dep.setdefault(b, {})[a] = c
    deg = max(by_dep) if by_dep else 0
    pw = [[1] + [0] * (n - 1)]
    maxa = max((a for d in by_dep.values() for a in d), default=0)
    for _ in range(maxa):
        pw.append(ser_mul(pw[-1], xs, n, p))
    out = []
    for b in range(deg + 1):
        acc = [0] * n
        for a, c in by_dep.get(b, {}).items():
            acc = [(u + c * v) % p for u, v in zip(acc, pw[a])]
        out.append(acc)
    return out


def series_expand(q: dict[tuple[int, int], int], point: tuple[int, int], precision: int,
                  p: int) -> tuple[list[int], list[int], bool]:
    """Local parametrization of q(x, y) = 0 at a smooth affine point.

    Returns (x(t), y(t), swapped): the independent coordinate is point + t
    (x when dq/dy != 0, otherwise y) and the other one is Hensel-lifted.
    """
    if precision < 1:
        raise ValueError("precision must be positive")
    x0, y0 = point[0] % p, point[1] % p

    def ev(poly):
        return sum(c * pow(x0, i, p) * pow(y0, j, p) for (i, j), c in poly.items()) % p

    if ev(q):
        raise ValueError("point is not on the curve")
    qx = {(i - 1, j): i * c % p for (i, j), c in q.items() if i and i * c % p}
    qy = {(i, j - 1): j * c % p for (i, j), c in q.items() if j and j * c % p}
    n = precision
    if ev(qy):
        swap, ind0, dep0 = False, x0, y0
    elif ev(qx):
        swap, ind0, dep0 = True, y0, x0
    else:
        raise ValueError("singular point: both partial derivatives vanish")
    ind = [ind0, 1][:n] + [0] * max(0, n - 2)
    F = _bivar_eval_x(q, ind, n, p, swap)
    dep = hensel_root(F, dep0, n, p)
    return (dep, ind, True) if swap else (ind, dep, False)
