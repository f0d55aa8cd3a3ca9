import random
from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kodaira_lab import exact_linalg as la

small_ints = st.integers(min_value=-6, max_value=6)


def int_matrices(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def rat_matrices():
    frac = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.integers(1, 5).flatmap(
        lambda r: st.integers(1, 5).flatmap(
            lambda c: st.lists(st.lists(frac, min_size=c, max_size=c), min_size=r, max_size=r)))


def determinantal_divisors(a):
    """d_k = gcd of all k x k minors, computed with sympy determinants."""
    m, n = len(a), len(a[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, int(sympy.Matrix([[a[i][j] for j in cols] for i in rows]).det()))
        out.append(g)
    return out


def snf_oracle(a):
    divs = determinantal_divisors(a)
    factors, prev = [], 1
    for d in divs:
        if d == 0:
            factors.append(0)
        else:
            factors.append(d // prev)
            prev = d
    return factors


def test_to_fraction_rejects_floats():
    with pytest.raises(TypeError):
        la.to_fraction(0.5)
    assert la.to_fraction("3/6") == Fraction(1, 2)


def test_rank_examples():
    assert la.rank(la.identity(2)) == 2
    assert la.rank(la.zeros(3, 4)) == 0
    assert la.rank([[1, 2], [2, 4]]) == 1


def test_kernel_examples():
    assert la.kernel_basis(la.identity(3)) == []
    assert len(la.kernel_basis(la.zeros(2, 3))) == 3
    assert la.kernel_basis([[1, 1]]) == [[1, -1]]


def test_snf_examples():
    assert la.smith_normal_form([[2, 0], [0, 3]]).invariant_factors == [1, 6]
    assert la.smith_normal_form([[2, 4], [6, 8]]).invariant_factors == [2, 4]
    assert la.smith_normal_form([[0, 0, 0], [0, 0, 0]]).invariant_factors == [0, 0]


def test_sturm_examples():
    assert la.sturm_real_root_count([1, 0, 1]) == 0
    assert la.sturm_real_root_count([-1, 0, 1]) == 2
    assert la.sturm_real_root_count([0, 0, 1, 0, 1]) == 1
    with pytest.raises(ValueError):
        la.sturm_real_root_count([0, 0])


@settings(max_examples=60, deadline=None)
@given(rat_matrices())
def test_rank_matches_sympy(m):
    assert la.rank(m) == sympy.Matrix(m).rank()


@settings(max_examples=60, deadline=None)
@given(rat_matrices())
def test_kernel_is_exact_and_full(m):
    basis = la.kernel_basis(m)
    assert len(basis) == len(m[0]) - la.rank(m)
    for v in basis:
        assert all(x == 0 for x in la.matvec(m, v))
        assert all(Fraction(x).denominator == 1 for x in v)
    assert la.span_rank(basis) == len(basis) if basis else True


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: int_matrices(n, n)))
def test_det_and_charpoly_match_sympy(m):
    assert la.det(m) == sympy.Matrix(m).det()
    t = sympy.Symbol("t")
    expected = sympy.Poly(sympy.Matrix(m).charpoly(t).as_expr(), t).all_coeffs()[::-1]
    assert la.charpoly(m) == [Fraction(int(c)) for c in expected]


def test_snf_random_4x6_reconstruction():
    rng = random.Random(20240611)
    for _ in range(200):
        a = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(4)]
        res = la.smith_normal_form(a)
        assert la.matmul(la.matmul(res.U, a), res.V) == res.D
        assert abs(la.det(res.U)) == 1 and abs(la.det(res.V)) == 1
        diag = res.invariant_factors
        assert all(d >= 0 for d in diag)
        assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1) if diag[i])
        assert all(res.D[i][j] == 0 for i in range(4) for j in range(6) if i != j)
        assert sum(1 for d in diag if d) == la.rank(a)


def test_snf_matches_determinantal_divisors():
    rng = random.Random(7)
    for _ in range(25):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        a = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        assert la.smith_normal_form(a).invariant_factors == snf_oracle(a)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(min_value=-8, max_value=8, max_denominator=3), min_size=1, max_size=5,
                unique=True))
def test_sturm_counts_distinct_linear_factors(roots):
    p = [Fraction(1)]
    for r in roots:
        p = la.poly_mul(p, [-r, 1])
    assert la.sturm_real_root_count(p) == len(roots)
    # repeated roots are counted once
    assert la.sturm_real_root_count(la.poly_mul(p, p)) == len(roots)


def test_squarefree_part():
    p = la.poly_mul([0, 0, 1], [1, 0, 1])  # t^2 (t^2 + 1)
    assert la.squarefree_part(p) == [0, 1, 0, 1]
    with pytest.raises(ValueError):
        la.squarefree_part([0])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: int_matrices(n, n)))
def test_inverse_when_invertible(m):
    if la.det(m) == 0:
        return
    assert la.matmul(m, la.inverse(m)) == la.identity(len(m))
