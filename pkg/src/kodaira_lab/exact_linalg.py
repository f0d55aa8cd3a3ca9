"""Exact rational linear algebra, integer Smith normal form and Sturm counts.

Matrices are plain lists of rows.  Rational matrices hold
:class:`fractions.Fraction` entries, integer matrices hold Python ``int``;
nothing here ever touches floating point.

Polynomials are coefficient lists, lowest degree first, so ``[1, 0, 1]``
is ``1 + t**2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Matrix = list[list[Fraction]]
IntMatrix = list[list[int]]
Vector = list[Fraction]


# ---------------------------------------------------------------------------
# construction helpers


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; reject floats."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use 'p/q' strings")
    return Fraction(value)


def rat_matrix(rows: Iterable[Iterable]) -> Matrix:
    out = [[to_fraction(v) for v in row] for row in rows]
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if a and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch {shape(a)} x {shape(b)}")
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m]


def matpow(m: Matrix, e: int) -> Matrix:
    out = identity(len(m))
    for _ in range(e):
        out = matmul(out, m)
    return out


def is_zero_matrix(m: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in m for x in row)


def trace(m: Sequence[Sequence]) -> Fraction:
    return sum((Fraction(m[i][i]) for i in range(len(m))), Fraction(0))


# ---------------------------------------------------------------------------
# elimination


def rref(m: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    a = [[Fraction(x) for x in row] for row in m]
    nrows, ncols = shape(a)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    """Rank over Q."""
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def primitive(v: Sequence[Fraction]) -> Vector:
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    v = [Fraction(x) for x in v]
    nz = [x for x in v if x != 0]
    if not nz:
        return v
    den = lcm(*(x.denominator for x in nz))
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if nz[0] < 0:
        g = -g
    return [Fraction(x, g) for x in ints]


def kernel_basis(m: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of the right null space, each vector primitive integral.

    ``ncols`` is only needed when ``m`` has no rows.
    """
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    a, pivots = rref(m)
    n = len(a[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(a, pivots):
            v[pc] = -row[f]
        basis.append(primitive(v))
    return basis


def solve(m: Sequence[Sequence], b: Sequence) -> Vector | None:
    """One solution of ``m x = b`` or ``None`` if inconsistent."""
    nrows, ncols = shape(m)
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    a, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(a, pivots):
        x[pc] = row[ncols]
    return x


def span_rank(vectors: Sequence[Sequence]) -> int:
    return rank(list(vectors)) if vectors else 0


def in_span(v: Sequence, vectors: Sequence[Sequence]) -> bool:
    if not vectors:
        return all(x == 0 for x in v)
    return span_rank(list(vectors) + [list(v)]) == span_rank(vectors)


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    a, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in a]


def det(m: Sequence[Sequence]) -> Fraction:
    """Determinant by Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        result *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * result


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == D`` with ``U`` and ``V`` unimodular."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> list[int]:
        n = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(n)]


def _int_identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(a: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form by row/column reduction, pivoting on the smallest entry.

    Diagonal entries come out non-negative with ``d[i] | d[i+1]``.
    """
    D = [[int(x) for x in row] for row in a]
    m = len(D)
    n = len(D[0]) if m else 0
    U = _int_identity(m)
    V = _int_identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row_dst += f * row_src
        D[dst] = [x + f * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in D:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n)
                       if D[i][j] != 0]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    dirty |= D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    dirty |= D[t][j] != 0
            if dirty:
                continue
            # pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SnfResult(D=D, U=U, V=V)


def invariant_factors(a: Sequence[Sequence[int]]) -> list[int]:
    return smith_normal_form(a).invariant_factors


# ---------------------------------------------------------------------------
# polynomials (coefficients lowest degree first)

Poly = list[Fraction]


def poly_trim(p: Sequence) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_degree(p: Sequence) -> int:
    return len(poly_trim(p)) - 1


def poly_derivative(p: Sequence) -> Poly:
    return poly_trim([i * Fraction(c) for i, c in enumerate(p)][1:])


def poly_divmod(a: Sequence, b: Sequence) -> tuple[Poly, Poly]:
    a = poly_trim(a)
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = poly_trim(r)
    return poly_trim(q), r


def poly_gcd(a: Sequence, b: Sequence) -> Poly:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return [c / a[-1] for c in a] if a else a


def poly_mul(a: Sequence, b: Sequence) -> Poly:
    a, b = poly_trim(a), poly_trim(b)
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_eval(p: Sequence, t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


def squarefree_part(p: Sequence) -> Poly:
    p = poly_trim(p)
    if not p:
        raise ValueError("zero polynomial")
    g = poly_gcd(p, poly_derivative(p))
    return poly_divmod(p, g)[0]


def sturm_sequence(p: Sequence) -> list[Poly]:
    seq = [poly_trim(p), poly_derivative(p)]
    while seq[-1]:
        r = poly_divmod(seq[-2], seq[-1])[1]
        seq.append([-c for c in r])
    return seq[:-1]


def _sign_changes(signs: Iterable[int]) -> int:
    s = [x for x in signs if x != 0]
    return sum(1 for u, v in zip(s, s[1:]) if u != v)


def sturm_real_root_count(p: Sequence) -> int:
    """Number of distinct real roots of a nonzero rational polynomial."""
    p = poly_trim(p)
    if not p:
        raise ValueError("zero polynomial has infinitely many roots")
    seq = sturm_sequence(squarefree_part(p))

    def sign_at_inf(q, negative):
        lead = q[-1]
        s = 1 if lead > 0 else -1
        if negative and (len(q) - 1) % 2:
            s = -s
        return s

    return (_sign_changes(sign_at_inf(q, True) for q in seq)
            - _sign_changes(sign_at_inf(q, False) for q in seq))


def charpoly(m: Sequence[Sequence]) -> Poly:
    """``det(t*I - m)`` by Faddeev-LeVerrier (exact over Q)."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = zeros(n, n)
    for k in range(1, n + 1):
        mk = matmul(a, mk)
        for i in range(n):
            mk[i][i] += coeffs[n - k + 1]
        coeffs[n - k] = -trace(matmul(a, mk)) / k
    return coeffs
