"""Cohomology of the solvmanifolds G/Λ_{k,i} and their minimal models.

G/Λ_{k,0} is a Kodaira-Thurston manifold, so its cohomology is that of the
nilpotent algebra R x h3 on the forms (τ, α, β, γ).  The two quotients by
Λ_{k,π} and Λ_{k,π/2} take invariants under the finite deck group, which
acts on forms through the rotation of the (x, y)-plane.  Everything is done
on cochains, where the action is linear and commutes with d.

CDGA text format
----------------
Statements separated by ``;``::

    gen x1:1 y1:1 z1:1 t1:1; d z1 = -x1*y1; d x1 = 0

``gen`` lists ``name:degree`` pairs (odd degrees only).  ``d name = expr``
gives a differential; unlisted generators are closed.  ``expr`` is a sum of
terms ``[coeff*]monomial`` with ``coeff`` an integer or ``p/q`` and
``monomial`` a ``*``-separated product of generator names (or ``1``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from . import exact_linalg as la
from . import lie
from .exterior import (Form, add_forms, exterior_power, form_to_vector, monomials,
                       sort_sign, vector_to_form, wedge)
from .oscillator import Flavor, LatticeId, rotation


class TopologyError(ValueError):
    pass


def base_algebra() -> lie.LieAlgebra:
    return lie.r_x_h3()


def base_cohomology() -> lie.CohomologyResult:
    """H*(M_{k,0}) with representatives built from τ, α, β, γ."""
    return lie.cohomology(base_algebra())


# ---------------------------------------------------------------------------
# deck actions


@dataclass(frozen=True)
class DeckAction:
    """Generator of the deck group acting on the 1-forms (τ, α, β, γ).

    Column ``j`` of ``gen_matrix`` is the image of the ``j``-th form.
    """

    order: int
    gen_matrix: tuple[tuple[Fraction, ...], ...]

    def matrix(self) -> la.Matrix:
        return [list(r) for r in self.gen_matrix]


def deck_action(flavor: Flavor) -> DeckAction:
    """Pull back of the plane rotation by the flavor's angle generator.

    On (dx, dy) the pullback along ``(x, y) -> R (x, y)`` acts by ``R^T``;
    τ and γ are fixed because the rotation preserves t and z.
    """
    if flavor is Flavor.ZERO:
        order, q = 1, 0
    else:
        order, q = 4 // flavor.period, flavor.period
    (r00, r01), (r10, r11) = rotation(q)
    m = la.identity(4)
    m[1][1], m[1][2] = Fraction(r00), Fraction(r10)
    m[2][1], m[2][2] = Fraction(r01), Fraction(r11)
    return DeckAction(order, tuple(tuple(r) for r in m))


def trivial_action() -> DeckAction:
    return DeckAction(1, tuple(tuple(r) for r in la.identity(4)))


def commutes_with_differential(action: DeckAction, alg: lie.LieAlgebra | None = None) -> bool:
    alg = alg or base_algebra()
    a = action.matrix()
    cx = lie.ce_complex(alg)
    for p in range(alg.dim):
        lhs = la.matmul(cx.differentials[p], exterior_power(a, p))
        rhs = la.matmul(exterior_power(a, p + 1), cx.differentials[p])
        if lhs != rhs:
            return False
    return True


def _express(vec, reps, coboundaries):
    """Coordinates of ``vec`` on ``reps`` modulo ``coboundaries``."""
    cols = [list(r) for r in reps] + [list(b) for b in coboundaries]
    if not cols:
        if any(vec):
            raise TopologyError("class not in span of representatives")
        return []
    sol = la.solve(la.transpose(cols), vec)
    if sol is None:
        raise TopologyError("class not in span of representatives")
    return sol[:len(reps)]


def induced_action(action: DeckAction, p: int) -> la.Matrix:
    """Matrix of the action on H^p in the representative basis of :func:`base_cohomology`."""
    if not 0 <= p <= 4:
        raise TopologyError(f"degree {p} out of range 0..4")
    coh = base_cohomology()
    reps = coh.representatives[p]
    if not reps:
        return []
    alg = coh.algebra
    cx = lie.ce_complex(alg)
    bounds = lie._image_basis(cx, p)
    a_p = exterior_power(action.matrix(), p)
    cols = [_express(la.matvec(a_p, r), reps, bounds) for r in reps]
    return la.transpose(cols)


def averaging_projector(rho: la.Matrix, order: int) -> la.Matrix:
    n = len(rho)
    total = la.zeros(n, n)
    power = la.identity(n)
    for _ in range(order):
        total = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(total, power)]
        power = la.matmul(power, rho)
    return [[x / order for x in row] for row in total]


def invariant_betti(action: DeckAction) -> list[int]:
    out = []
    for p in range(5):
        rho = induced_action(action, p)
        out.append(la.rank(averaging_projector(rho, action.order)) if rho else 0)
    return out


def invariant_cocycles(action: DeckAction, p: int) -> list[list[Fraction]]:
    """Cochain-level representatives of the invariant part of H^p."""
    coh = base_cohomology()
    reps = coh.representatives[p]
    rho = induced_action(action, p)
    if not rho:
        return []
    proj = averaging_projector(rho, action.order)
    out = []
    for col in la.transpose(proj):
        v = [sum(c * r[i] for c, r in zip(col, reps)) for i in range(len(reps[0]))]
        if any(v) and not la.in_span(v, out):
            out.append(v)
    return out


def solvmanifold_betti(lat: LatticeId) -> list[int]:
    """Betti numbers of G/Λ; they depend only on the flavor."""
    if lat.flavor is Flavor.ZERO:
        return list(base_cohomology().betti)
    return invariant_betti(deck_action(lat.flavor))


def duality_checks(betti: Sequence[int]) -> bool:
    """Poincaré duality and vanishing Euler characteristic for a closed 4-manifold."""
    if len(betti) != 5:
        raise TopologyError("expected five Betti numbers")
    return (all(betti[p] == betti[4 - p] for p in range(5))
            and sum((-1) ** p * b for p, b in enumerate(betti)) == 0)


# ---------------------------------------------------------------------------
# odd-generator CDGAs

Polynomial = dict[tuple[int, ...], Fraction]


@dataclass(frozen=True)
class OddCDGA:
    """Free graded-commutative algebra on odd generators with a differential.

    ``diff[name]`` maps monomials (sorted generator-index tuples) to
    coefficients; missing generators are closed.
    """

    generators: tuple[tuple[str, int], ...]
    diff: Mapping[str, Polynomial] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        names = [g for g, _ in self.generators]
        if len(set(names)) != len(names):
            raise TopologyError("duplicate generator names")
        for name, deg in self.generators:
            if deg <= 0 or deg % 2 == 0:
                raise TopologyError(f"generator {name} has degree {deg}; only odd degrees are supported")
        for name, poly in self.diff.items():
            if name not in names:
                raise TopologyError(f"differential for unknown generator {name}")
            want = self.degrees[names.index(name)] + 1
            for mono in poly:
                if self.monomial_degree(mono) != want:
                    raise TopologyError(f"d{name} must have degree {want}")

    @property
    def names(self) -> list[str]:
        return [g for g, _ in self.generators]

    @property
    def degrees(self) -> list[int]:
        return [d for _, d in self.generators]

    def monomial_degree(self, mono: Sequence[int]) -> int:
        return sum(self.degrees[i] for i in mono)

    @property
    def top_degree(self) -> int:
        return sum(self.degrees)

    @cached_property
    def graded_basis(self) -> list[list[tuple[int, ...]]]:
        n = len(self.generators)
        out: list[list[tuple[int, ...]]] = [[] for _ in range(self.top_degree + 1)]
        for p in range(n + 1):
            for mono in monomials(n, p):
                out[self.monomial_degree(mono)].append(mono)
        return out

    def d(self, poly: Mapping[tuple[int, ...], Fraction]) -> Polynomial:
        # every generator is odd, so the Koszul sign is (-1)^(position)
        terms, coeffs = [], []
        for mono, c in poly.items():
            for r, idx in enumerate(mono):
                dg = self.diff.get(self.names[idx], {})
                if dg:
                    terms.append(_product({mono[:r]: Fraction(1)}, dg,
                                          {mono[r + 1:]: Fraction(1)}))
                    coeffs.append(c * (-1) ** r)
        return add_forms(*terms, coeffs=coeffs)

    def differential_matrix(self, n: int) -> la.Matrix:
        src = self.graded_basis[n] if n <= self.top_degree else []
        dst = self.graded_basis[n + 1] if n + 1 <= self.top_degree else []
        index = {m: i for i, m in enumerate(dst)}
        mat = la.zeros(len(dst), len(src))
        for j, mono in enumerate(src):
            for m, c in self.d({mono: Fraction(1)}).items():
                mat[index[m]][j] += c
        return mat


def _product(*polys: Mapping) -> Polynomial:
    out: Polynomial = {(): Fraction(1)}
    for p in polys:
        out = wedge(out, p)
    return out


def cdga_betti(m: OddCDGA) -> list[int]:
    top = m.top_degree
    mats = [m.differential_matrix(n) for n in range(top + 1)]
    for n in range(top):
        if mats[n] and mats[n + 1] and not la.is_zero_matrix(la.matmul(mats[n + 1], mats[n])):
            raise TopologyError(f"d∘d != 0 on degree {n}")
    ranks = [la.rank(mat) if mat and mat[0] else 0 for mat in mats]
    return [len(m.graded_basis[n]) - ranks[n] - (ranks[n - 1] if n else 0)
            for n in range(top + 1)]


def cdga_cohomology(m: OddCDGA) -> list[int]:
    return cdga_betti(m)


def cdga_cohomology_basis(m: OddCDGA, n: int) -> list[Polynomial]:
    basis = m.graded_basis[n]
    if not basis:
        return []
    z = la.kernel_basis(m.differential_matrix(n), ncols=len(basis))
    b = []
    if n > 0 and m.graded_basis[n - 1]:
        for col in la.transpose(m.differential_matrix(n - 1)):
            if any(col) and not la.in_span(col, b):
                b.append(col)
    unit = [[Fraction(int(i == j)) for i in range(len(basis))] for j in range(len(basis))]
    reps = lie.complement_representatives(z, b, unit)
    return [{mono: c for mono, c in zip(basis, v) if c} for v in reps]


_TERM = re.compile(r"^\s*(?:(-?\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_][\w*\s]*)?\s*$")


def _parse_expr(text: str, names: Sequence[str]) -> Polynomial:
    text = text.strip()
    if text in ("", "0"):
        return {}
    index = {n: i for i, n in enumerate(names)}
    out: Polynomial = {}
    text = re.sub(r"(\d)\s+(?=[A-Za-z_])", r"\1*", text)  # "1/2 x*y" means "1/2*x*y"
    for sign, body in re.findall(r"([+-]?)\s*([^+-]+)", text.replace(" ", "")):
        factors = body.split("*")
        coeff = Fraction(1)
        if re.fullmatch(r"\d+(/\d+)?", factors[0]):
            coeff = Fraction(factors.pop(0))
        if sign == "-":
            coeff = -coeff
        idx = []
        for f in factors:
            if f == "1":
                continue
            if f not in index:
                raise TopologyError(f"unknown generator {f!r} in {text!r}")
            idx.append(index[f])
        s, mono = sort_sign(idx)
        if s == 0:
            continue
        out[mono] = out.get(mono, Fraction(0)) + s * coeff
    return {k: v for k, v in out.items() if v}


def parse_cdga(text: str) -> OddCDGA:
    gens: list[tuple[str, int]] = []
    diffs: dict[str, str] = {}
    for stmt in (s.strip() for s in text.split(";")):
        if not stmt:
            continue
        if stmt.startswith("gen "):
            for tok in stmt[4:].split():
                name, _, deg = tok.partition(":")
                if not deg:
                    raise TopologyError(f"generator {name!r} needs a degree (name:deg)")
                gens.append((name, int(deg)))
        elif stmt.startswith("d "):
            lhs, eq, rhs = stmt[2:].partition("=")
            if not eq:
                raise TopologyError(f"bad differential statement {stmt!r}")
            diffs[lhs.strip()] = rhs
        else:
            raise TopologyError(f"unrecognised statement {stmt!r}")
    names = [g for g, _ in gens]
    for k in diffs:
        if k not in names:
            raise TopologyError(f"differential for unknown generator {k!r}")
    diff = {k: _parse_expr(v, names) for k, v in diffs.items()}
    return OddCDGA(tuple(gens), {k: v for k, v in diff.items() if v})


def kodaira_thurston_model() -> OddCDGA:
    """Λ(x1, y1, z1, t1) with dz1 = -x1 y1."""
    return parse_cdga("gen x1:1 y1:1 z1:1 t1:1; d z1 = -x1*y1")


def quotient_model() -> OddCDGA:
    """Λ(t1, w3) with d = 0."""
    return parse_cdga("gen t1:1 w3:3; d t1 = 0; d w3 = 0")


def _forms(text: str) -> Form:
    """``"α∧β∧γ"``-style (or ``alpha*beta``) expressions in τ, α, β, γ."""
    aliases = {"tau": "τ", "alpha": "α", "beta": "β", "gamma": "γ"}
    for k, v in aliases.items():
        text = text.replace(k, v)
    return _parse_expr(text.replace("∧", "*"), list("ταβγ"))


KT_ASSIGNMENT = {"t1": "τ", "x1": "α", "y1": "β", "z1": "γ"}
QUOTIENT_ASSIGNMENT = {"t1": "τ", "w3": "α*β*γ"}


@dataclass(frozen=True)
class QuasiIsoReport:
    chain_map: bool
    invariant: bool
    model_betti: tuple[int, ...]
    target_betti: tuple[int, ...]
    image_ranks: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return (self.chain_map and self.invariant and self.model_betti == self.target_betti
                and self.image_ranks == self.target_betti)


def quasi_iso_report(m: OddCDGA, lat: LatticeId,
                     assignment: Mapping[str, str | Form]) -> QuasiIsoReport:
    """Compare a model with the invariant forms of the given solvmanifold.

    ``assignment`` sends each generator to a form in τ, α, β, γ.  The algebra
    map is checked to commute with d; then in every degree the images of a
    cohomology basis of the model are reduced modulo coboundaries.
    """
    alg = base_algebra()
    images: list[Form] = []
    for name in m.names:
        if name not in assignment:
            raise TopologyError(f"no image for generator {name}")
        img = assignment[name]
        images.append(_forms(img) if isinstance(img, str) else dict(img))

    def phi(poly: Mapping[tuple[int, ...], Fraction]) -> Form:
        return add_forms(*[_product(*[images[i] for i in mono]) for mono in poly],
                         coeffs=list(poly.values()))

    for i, name in enumerate(m.names):
        if m.degrees[i] > 4 or any(len(mono) != m.degrees[i] for mono in images[i]):
            raise TopologyError(f"image of {name} has the wrong degree")
    chain = all(alg.d(images[i]) == phi(m.diff.get(name, {}))
                for i, name in enumerate(m.names))
    if not chain:
        raise TopologyError("assignment does not commute with d (image not closed)")

    action = trivial_action() if lat.flavor is Flavor.ZERO else deck_action(lat.flavor)
    a = action.matrix()
    invariant = True
    for f, deg in zip(images, m.degrees):
        v = form_to_vector(f, 4, deg)
        invariant &= la.matvec(exterior_power(a, deg), v) == v
    target = solvmanifold_betti(lat)
    model = cdga_betti(m)
    if len(model) < 5:
        model += [0] * (5 - len(model))
    cx = lie.ce_complex(alg)
    ranks = []
    for p in range(5):
        reps = cdga_cohomology_basis(m, p) if p < len(m.graded_basis) else []
        vecs = [form_to_vector(phi(r), 4, p) for r in reps]
        bounds = lie._image_basis(cx, p)
        ranks.append(la.span_rank(vecs + bounds) - la.span_rank(bounds) if vecs else 0)
    return QuasiIsoReport(chain, invariant, tuple(model), tuple(target), tuple(ranks))


def quasi_iso_check(m: OddCDGA, lat: LatticeId, assignment: Mapping[str, str | Form]) -> bool:
    return quasi_iso_report(m, lat, assignment).passed
