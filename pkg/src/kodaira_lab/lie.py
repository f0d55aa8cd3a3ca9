"""Finite-dimensional Lie algebras over Q and their Chevalley-Eilenberg cohomology.

Conventions
-----------
``brackets[(i, j)]`` (``i < j``) is the coordinate vector of ``[e_i, e_j]``.
On dual generators the differential is ``d e^k = -sum_{i<j} c^k_ij e^i∧e^j``
(so ``dω(X, Y) = -ω([X, Y])`` on 1-forms), extended to higher degrees as a
graded derivation.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Sequence

from . import exact_linalg as la
from .exterior import (Form, add_forms, form_to_vector, format_form, monomials,
                       vector_to_form, wedge)


class LieAlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    brackets: dict[tuple[int, int], tuple[Fraction, ...]] = field(hash=False)
    labels: tuple[str, ...] = ()
    dual_labels: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(self.dim)))
        if not self.dual_labels:
            object.__setattr__(self, "dual_labels",
                               tuple(f"e^{i + 1}" for i in range(self.dim)))
        clean = {}
        for (i, j), coeffs in self.brackets.items():
            if not (0 <= i < j < self.dim):
                raise LieAlgebraError(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < dim")
            if len(coeffs) != self.dim:
                raise LieAlgebraError(f"bracket ({i}, {j}) has {len(coeffs)} coefficients, expected {self.dim}")
            coeffs = tuple(la.to_fraction(c) for c in coeffs)
            if any(coeffs):
                clean[(i, j)] = coeffs
        object.__setattr__(self, "brackets", clean)
        if len(self.labels) != self.dim or len(self.dual_labels) != self.dim:
            raise LieAlgebraError("label count must equal dim")

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i < j:
            return self.brackets.get((i, j), (Fraction(0),) * self.dim)[k]
        return -self.brackets.get((j, i), (Fraction(0),) * self.dim)[k]

    def basis_bracket(self, i: int, j: int) -> list[Fraction]:
        return [self.structure_constant(i, j, k) for k in range(self.dim)]

    def bracket(self, u: Sequence, v: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for (i, j), coeffs in self.brackets.items():
            w = u[i] * v[j] - u[j] * v[i]
            if w:
                for k, c in enumerate(coeffs):
                    out[k] += w * c
        return out

    def basis_vector(self, i: int) -> list[Fraction]:
        return [Fraction(int(k == i)) for k in range(self.dim)]

    # -- dual side ---------------------------------------------------------

    @cached_property
    def generator_differentials(self) -> tuple[Form, ...]:
        out = []
        for k in range(self.dim):
            out.append({(i, j): -c[k] for (i, j), c in self.brackets.items() if c[k]})
        return tuple(out)

    def d(self, form: Form) -> Form:
        """Chevalley-Eilenberg differential of an arbitrary form."""
        terms = []
        coeffs = []
        for mono, c in form.items():
            for r, idx in enumerate(mono):
                rest = {mono[:r] + mono[r + 1:]: Fraction(1)}
                terms.append(wedge(self.generator_differentials[idx], rest))
                coeffs.append(c * (-1) ** r)
        return add_forms(*terms, coeffs=coeffs)

    def format_form(self, form: Form) -> str:
        return format_form(form, self.dual_labels)


# ---------------------------------------------------------------------------
# builtins


def _alg(dim, pairs, labels, dual_labels, name):
    brackets = {}
    for (i, j), image in pairs.items():
        v = [Fraction(0)] * dim
        for k, c in image.items():
            v[k] = Fraction(c)
        brackets[(i, j)] = tuple(v)
    return LieAlgebra(dim, brackets, tuple(labels), tuple(dual_labels), name)


def heisenberg() -> LieAlgebra:
    """h3 with [X, Y] = Z."""
    return _alg(3, {(0, 1): {2: 1}}, "XYZ", "αβγ", "h3")


def oscillator() -> LieAlgebra:
    """Oscillator algebra on (T, X, Y, Z): [T,X] = -Y, [T,Y] = X, [X,Y] = Z.

    ``ad_T`` restricted to (X, Y) is the derivative at 0 of the rotation
    ``t -> [[cos t, sin t], [-sin t, cos t]]``.
    """
    return _alg(4, {(0, 1): {2: -1}, (0, 2): {1: 1}, (1, 2): {3: 1}},
                "TXYZ", "ταβγ", "oscillator")


def r_x_h3() -> LieAlgebra:
    """Direct product R x h3 on (T, X, Y, Z)."""
    return _alg(4, {(1, 2): {3: 1}}, "TXYZ", "ταβγ", "r_x_h3")


def example_sec3(scale=1) -> LieAlgebra:
    """Almost abelian R x R^2 with de^2 = s e^13, de^3 = -s e^12.

    The rotation speed ``s`` is a rational stand-in for 2π; cohomology
    ranks do not depend on it as long as it is nonzero.
    """
    s = la.to_fraction(scale)
    return _alg(3, {(0, 1): {2: s}, (0, 2): {1: -s}},
                ("e1", "e2", "e3"), ("e^1", "e^2", "e^3"), "example_sec3")


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {}, name=f"abelian{n}")


BUILTINS = {
    "h3": heisenberg,
    "oscillator": oscillator,
    "r_x_h3": r_x_h3,
    "example_sec3": example_sec3,
}


def builtin(name: str) -> LieAlgebra:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise LieAlgebraError(
            f"unknown algebra {name!r}; builtins are {', '.join(BUILTINS)}") from None


def from_json(data: dict | str) -> LieAlgebra:
    """Parse ``{"dim": n, "labels": [...], "brackets": [{"i", "j", "coeffs"}]}``."""
    if isinstance(data, str):
        data = json.loads(data)
    n = int(data["dim"])
    brackets = {}
    for entry in data.get("brackets", []):
        i, j = int(entry["i"]), int(entry["j"])
        coeffs = [la.to_fraction(c) for c in entry["coeffs"]]
        if i > j:
            i, j, coeffs = j, i, [-c for c in coeffs]
        if (i, j) in brackets:
            raise LieAlgebraError(f"duplicate bracket ({i}, {j})")
        brackets[(i, j)] = tuple(coeffs)
    return LieAlgebra(n, brackets, tuple(data.get("labels", ())),
                      tuple(data.get("dual_labels", ())), data.get("name", ""))


def to_json(alg: LieAlgebra) -> dict:
    return {
        "dim": alg.dim,
        "labels": list(alg.labels),
        "brackets": [{"i": i, "j": j, "coeffs": [str(c) for c in coeffs]}
                     for (i, j), coeffs in sorted(alg.brackets.items())],
    }


def load(name_or_path: str) -> LieAlgebra:
    """A builtin by name, otherwise a JSON file."""
    if name_or_path in BUILTINS:
        return builtin(name_or_path)
    path = Path(name_or_path)
    if not path.exists():
        raise LieAlgebraError(
            f"{name_or_path!r} is neither a builtin ({', '.join(BUILTINS)}) nor a file")
    return from_json(path.read_text())


# ---------------------------------------------------------------------------
# structure


def validate(alg: LieAlgebra) -> list[tuple[int, int, int, list[Fraction]]]:
    """Jacobi violations ``(i, j, k, value)`` over basis triples ``i < j < k``."""
    out = []
    e = alg.basis_vector
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            for k in range(j + 1, alg.dim):
                a = alg.bracket(e(i), alg.bracket(e(j), e(k)))
                b = alg.bracket(e(j), alg.bracket(e(k), e(i)))
                c = alg.bracket(e(k), alg.bracket(e(i), e(j)))
                total = [x + y + z for x, y, z in zip(a, b, c)]
                if any(total):
                    out.append((i, j, k, total))
    return out


def adjoint(alg: LieAlgebra, v: Sequence) -> la.Matrix:
    """Matrix of ``ad_v``; column ``j`` is ``[v, e_j]``."""
    if len(v) != alg.dim:
        raise LieAlgebraError(f"vector of length {len(v)} for algebra of dim {alg.dim}")
    v = [la.to_fraction(x) for x in v]
    cols = [alg.bracket(v, alg.basis_vector(j)) for j in range(alg.dim)]
    return la.transpose(cols)


def is_unimodular(alg: LieAlgebra) -> bool:
    return all(la.trace(adjoint(alg, alg.basis_vector(i))) == 0 for i in range(alg.dim))


def _require_valid(alg):
    bad = validate(alg)
    if bad:
        i, j, k, _ = bad[0]
        raise LieAlgebraError(
            f"Jacobi identity fails on ({alg.labels[i]}, {alg.labels[j]}, {alg.labels[k]})")


@dataclass(frozen=True)
class CeComplex:
    algebra: LieAlgebra
    differentials: tuple[la.Matrix, ...]  # d_p : Λ^p -> Λ^{p+1}, p = 0..dim

    def basis(self, p: int):
        return monomials(self.algebra.dim, p)

    def ranks(self) -> list[int]:
        return [la.rank(d) if d else 0 for d in self.differentials]


def differential_matrix(alg: LieAlgebra, p: int) -> la.Matrix:
    n = alg.dim
    rows = len(monomials(n, p + 1))
    cols = []
    for mono in monomials(n, p):
        cols.append(form_to_vector(alg.d({mono: Fraction(1)}), n, p + 1))
    if rows == 0:
        return []
    return la.transpose(cols)


def ce_complex(alg: LieAlgebra) -> CeComplex:
    _require_valid(alg)
    ds = tuple(differential_matrix(alg, p) for p in range(alg.dim + 1))
    for p in range(alg.dim - 1):
        if not la.is_zero_matrix(la.matmul(ds[p + 1], ds[p])):
            raise LieAlgebraError(f"d∘d != 0 in degree {p}")
    return CeComplex(alg, ds)


@dataclass(frozen=True)
class CohomologyResult:
    algebra: LieAlgebra
    betti: tuple[int, ...]
    representatives: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def forms(self, p: int) -> list[Form]:
        return [vector_to_form(v, self.algebra.dim, p) for v in self.representatives[p]]

    def labelled(self, p: int) -> list[str]:
        return [self.algebra.format_form(f) for f in self.forms(p)]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** p * b for p, b in enumerate(self.betti))


def _image_basis(cx: CeComplex, p: int) -> list[list[Fraction]]:
    if p == 0:
        return []
    d = cx.differentials[p - 1]
    cols = la.transpose(d)
    basis: list = []
    for c in cols:
        if any(c) and not la.in_span(c, basis):
            basis.append(c)
    return basis


def _cocycles(cx: CeComplex, p: int) -> list[list[Fraction]]:
    d = cx.differentials[p]
    return la.kernel_basis(d, ncols=len(cx.basis(p)))


def complement_representatives(cocycles, coboundaries, candidates=()) -> list[list[Fraction]]:
    """Pick cocycles independent modulo coboundaries, trying ``candidates`` first."""
    span = list(coboundaries)
    target = la.span_rank(list(coboundaries) + list(cocycles)) if cocycles else len(span)
    reps = []
    closed_span = list(cocycles)
    for v in list(candidates) + list(cocycles):
        if la.span_rank(span) == target:
            break
        if not la.in_span(v, closed_span) or la.in_span(v, span):
            continue
        span.append(list(v))
        reps.append(list(v))
    return reps


def cohomology(alg: LieAlgebra) -> CohomologyResult:
    """Betti numbers and cocycle representatives in every degree.

    Representatives favour single monomials, taken in lexicographic order,
    before falling back to general kernel vectors.
    """
    cx = ce_complex(alg)
    n = alg.dim
    bettis, reps = [], []
    for p in range(n + 1):
        z = _cocycles(cx, p)
        b = _image_basis(cx, p)
        unit = [form_to_vector({m: Fraction(1)}, n, p) for m in monomials(n, p)]
        chosen = complement_representatives(z, b, unit)
        bettis.append(len(z) - len(b))
        assert len(chosen) == bettis[-1]
        reps.append(tuple(tuple(v) for v in chosen))
    return CohomologyResult(alg, tuple(bettis), tuple(reps))


def betti(alg: LieAlgebra) -> list[int]:
    cx = ce_complex(alg)
    n = alg.dim
    ranks = cx.ranks()
    out = []
    for p in range(n + 1):
        dim_p = len(monomials(n, p))
        out.append(dim_p - ranks[p] - (ranks[p - 1] if p else 0))
    return out


def cohomology_basis(alg: LieAlgebra, p: int) -> list[Form]:
    if not 0 <= p <= alg.dim:
        raise LieAlgebraError(f"degree {p} out of range 0..{alg.dim}")
    return cohomology(alg).forms(p)


# ---------------------------------------------------------------------------
# complete solvability


@dataclass(frozen=True)
class SolvabilityVerdict:
    """``witness`` is set when some ``ad_v`` has a non-real eigenvalue."""

    witness: tuple[Fraction, ...] | None
    charpoly: tuple[Fraction, ...] | None
    real_roots: int | None
    distinct_roots: int | None
    trials: int

    @property
    def conclusive(self) -> bool:
        return self.witness is not None

    @property
    def nonzero_factor(self) -> tuple[Fraction, ...] | None:
        """``charpoly`` with its power of ``λ`` removed (``ad_v v = 0``, so 0 is always a root)."""
        if self.charpoly is None:
            return None
        p = list(self.charpoly)
        while p and p[0] == 0:
            p.pop(0)
        return tuple(p)


def trial_vectors(dim: int, count: int = 12, seed: int = 0) -> list[list[Fraction]]:
    rng = random.Random(seed)
    out = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    for _ in range(count):
        out.append([Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(dim)])
    return out


def completely_solvable_witness(alg: LieAlgebra, trials: Sequence[Sequence] | None = None,
                                seed: int = 0) -> SolvabilityVerdict:
    """Search for an ``ad_v`` with fewer distinct real roots than distinct roots.

    A hit certifies the algebra is *not* completely solvable; a miss is
    inconclusive.
    """
    _require_valid(alg)
    vecs = trial_vectors(alg.dim, seed=seed) if trials is None else trials
    for v in vecs:
        p = la.charpoly(adjoint(alg, v))
        distinct = la.poly_degree(la.squarefree_part(p))
        real = la.sturm_real_root_count(p)
        if real < distinct:
            return SolvabilityVerdict(tuple(la.to_fraction(x) for x in v), tuple(p),
                                      real, distinct, len(vecs))
    return SolvabilityVerdict(None, None, None, None, len(vecs))
