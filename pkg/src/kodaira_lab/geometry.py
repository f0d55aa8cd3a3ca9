"""Left-invariant complex and symplectic structures on 4-dimensional Lie algebras."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from . import exact_linalg as la
from . import lie
from .exterior import Form, form_to_vector, monomials, vector_to_form, wedge


class GeometryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# complex structures


def check_complex(j: Sequence[Sequence]) -> la.Matrix:
    j = la.rat_matrix(j)
    n = len(j)
    minus_one = [[-x for x in row] for row in la.identity(n)]
    if la.matmul(j, j) != minus_one:
        raise GeometryError("J does not square to -1")
    return j


def standard_j() -> la.Matrix:
    """J X = Y, J Z = T on the basis (T, X, Y, Z); columns are images."""
    images = {0: {3: -1}, 1: {2: 1}, 2: {1: -1}, 3: {0: 1}}
    m = la.zeros(4, 4)
    for col, img in images.items():
        for row, c in img.items():
            m[row][col] = Fraction(c)
    return m


def nijenhuis(alg: lie.LieAlgebra, j: Sequence[Sequence]) -> list[list[list[Fraction]]]:
    """``N[a][b] = [Je_a, Je_b] - J[Je_a, e_b] - J[e_a, Je_b] - [e_a, e_b]``."""
    j = check_complex(j)
    if alg.dim != len(j):
        raise GeometryError("J and algebra dimensions differ")
    jt = la.transpose(j)  # row a of jt is J e_a
    e = alg.basis_vector
    out = []
    for a in range(alg.dim):
        row = []
        for b in range(alg.dim):
            t1 = alg.bracket(jt[a], jt[b])
            t2 = la.matvec(j, alg.bracket(jt[a], e(b)))
            t3 = la.matvec(j, alg.bracket(e(a), jt[b]))
            t4 = alg.bracket(e(a), e(b))
            row.append([w - x - y - z for w, x, y, z in zip(t1, t2, t3, t4)])
        out.append(row)
    return out


def is_integrable(alg: lie.LieAlgebra, j: Sequence[Sequence]) -> bool:
    return all(not any(v) for row in nijenhuis(alg, j) for v in row)


def is_abelian_cs(alg: lie.LieAlgebra, j: Sequence[Sequence]) -> bool:
    j = check_complex(j)
    jt = la.transpose(j)
    e = alg.basis_vector
    return all(alg.bracket(jt[a], jt[b]) == alg.bracket(e(a), e(b))
               for a, b in combinations(range(alg.dim), 2))


# ---------------------------------------------------------------------------
# symplectic forms


def closed_two_forms(alg: lie.LieAlgebra) -> list[Form]:
    d2 = lie.differential_matrix(alg, 2)
    lie.ce_complex(alg)  # raises on Jacobi failure
    basis = la.kernel_basis(d2, ncols=len(monomials(alg.dim, 2)))
    return [vector_to_form(v, alg.dim, 2) for v in basis]


def pfaffian(form: Form) -> Fraction:
    """Pfaffian of a 2-form in dimension 4: ``ω∧ω = 2 Pf e^0123``."""
    w = lambda i, j: form.get((i, j), Fraction(0))  # noqa: E731
    return w(0, 1) * w(2, 3) - w(0, 2) * w(1, 3) + w(0, 3) * w(1, 2)


def pfaffian_polynomial(basis: Sequence[Form]) -> dict[tuple[int, int], Fraction]:
    """Coefficients of ``Pf(sum c_i basis_i)`` as a quadratic in ``c``, keyed by ``(i, j)``, ``i <= j``."""
    m = len(basis)
    coeffs: dict[tuple[int, int], Fraction] = {}
    for i in range(m):
        for k in range(i, m):
            # polarisation: Pf is quadratic, so cross terms come from Pf(u+v)-Pf(u)-Pf(v)
            if i == k:
                c = pfaffian(basis[i])
            else:
                s = {mono: basis[i].get(mono, 0) + basis[k].get(mono, 0)
                     for mono in set(basis[i]) | set(basis[k])}
                c = pfaffian(s) - pfaffian(basis[i]) - pfaffian(basis[k])
            if c:
                coeffs[(i, k)] = c
    return coeffs


def pfaffian_vanishes_on_grid(basis: Sequence[Form]) -> bool:
    """Independent identity test: evaluate on ``{0, 1, 2}^m``.

    A polynomial of degree at most 2 in each variable that vanishes on a
    3-point grid in every variable is identically zero.
    """
    for c in product(range(3), repeat=len(basis)):
        if pfaffian(_combine(basis, c)):
            return False
    return True


def _combine(basis: Sequence[Form], coeffs: Sequence) -> Form:
    out: Form = {}
    for f, a in zip(basis, coeffs):
        for mono, c in f.items():
            out[mono] = out.get(mono, Fraction(0)) + a * c
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class SymplecticWitness:
    form: Form
    closed: bool
    top_coefficient: Fraction  # coefficient of e^0123 in ω∧ω
    closed_in: dict[str, bool]

    @property
    def verified(self) -> bool:
        return self.closed and self.top_coefficient != 0


def invariant_symplectic(alg: lie.LieAlgebra,
                         compare_with: Sequence[lie.LieAlgebra] = ()) -> SymplecticWitness | None:
    """A closed nondegenerate invariant 2-form, or ``None`` if none exists.

    Non-existence means the Pfaffian, a quadratic form on the space of
    closed 2-forms, is identically zero.  Otherwise the first nonzero point
    among basis vectors and sums of pairs is returned, certified by
    recomputing ``dω`` and ``ω∧ω``.  ``compare_with`` records whether the
    same form is closed in other algebras on the same basis.
    """
    if alg.dim != 4:
        raise GeometryError("symplectic test needs a 4-dimensional algebra")
    basis = closed_two_forms(alg)
    poly = pfaffian_polynomial(basis)
    if not poly:
        return None
    m = len(basis)
    candidates = [[int(i == a) for i in range(m)] for a in range(m)]
    candidates += [[int(i in (a, b)) for i in range(m)] for a, b in combinations(range(m), 2)]
    for c in candidates:
        omega = _combine(basis, c)
        if pfaffian(omega):
            break
    else:  # pragma: no cover - a nonzero quadratic form is nonzero at one of these
        raise AssertionError("no witness among unit and pair points")
    top = wedge(omega, omega).get((0, 1, 2, 3), Fraction(0))
    return SymplecticWitness(
        omega, not alg.d(omega), top,
        {other.name or "other": not other.d(omega) for other in compare_with})
