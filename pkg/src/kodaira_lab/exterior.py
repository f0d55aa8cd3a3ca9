"""Exterior algebra on a finite set of degree-one generators.

A monomial is a strictly increasing tuple of generator indices; a form is a
dict ``{monomial: Fraction}`` with zero coefficients dropped.  Monomials of
a fixed degree are ordered lexicographically, which fixes the coordinate
vectors used by the matrix code.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from .exact_linalg import Matrix, det

Monomial = tuple[int, ...]
Form = dict[Monomial, Fraction]


@lru_cache(maxsize=None)
def monomials(n: int, p: int) -> tuple[Monomial, ...]:
    return tuple(combinations(range(n), p))


@lru_cache(maxsize=None)
def monomial_index(n: int, p: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials(n, p))}


def sort_sign(seq: Sequence[int]) -> tuple[int, Monomial]:
    """Sign of the permutation sorting ``seq``; 0 if an index repeats."""
    if len(set(seq)) != len(seq):
        return 0, ()
    s = list(seq)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(s)):
        j = i
        while j > 0 and s[j - 1] > s[j]:
            s[j - 1], s[j] = s[j], s[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(s)


def wedge(f: Mapping[Monomial, Fraction], g: Mapping[Monomial, Fraction]) -> Form:
    out: Form = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            sign, m = sort_sign(m1 + m2)
            if sign:
                out[m] = out.get(m, Fraction(0)) + sign * c1 * c2
    return {m: c for m, c in out.items() if c != 0}


def add_forms(*forms: Mapping[Monomial, Fraction], coeffs: Sequence | None = None) -> Form:
    out: Form = {}
    coeffs = coeffs if coeffs is not None else [1] * len(forms)
    for f, a in zip(forms, coeffs):
        for m, c in f.items():
            out[m] = out.get(m, Fraction(0)) + a * c
    return {m: c for m, c in out.items() if c != 0}


def form_to_vector(f: Mapping[Monomial, Fraction], n: int, p: int) -> list[Fraction]:
    idx = monomial_index(n, p)
    v = [Fraction(0)] * len(idx)
    for m, c in f.items():
        if len(m) != p:
            raise ValueError(f"monomial {m} is not of degree {p}")
        v[idx[m]] += c
    return v


def vector_to_form(v: Sequence, n: int, p: int) -> Form:
    return {m: Fraction(c) for m, c in zip(monomials(n, p), v) if c != 0}


def exterior_power(a: Sequence[Sequence], p: int) -> Matrix:
    """Matrix of the algebra map induced on degree ``p`` by ``a`` on degree 1.

    ``a`` acts on coordinate columns: column ``j`` is the image of generator
    ``j``.  Entry ``(I, J)`` is the ``I x J`` minor.
    """
    n = len(a)
    basis = monomials(n, p)
    if p == 0:
        return [[Fraction(1)]]
    return [[det([[a[i][j] for j in cols] for i in rows]) for cols in basis]
            for rows in basis]


def format_form(f: Mapping[Monomial, Fraction], labels: Sequence[str]) -> str:
    if not f:
        return "0"
    parts = []
    for m in sorted(f):
        c = f[m]
        name = "∧".join(labels[i] for i in m) if m else "1"
        if c == 1:
            term = name
        elif c == -1:
            term = "-" + name
        else:
            term = f"{c}*{name}" if m else str(c)
        parts.append(term)
    return " + ".join(parts).replace("+ -", "- ")
