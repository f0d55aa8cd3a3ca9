"""Presentations of the lattices Λ_{k,i} and their abelianizations.

Text format
-----------
Statements are separated by ``;``.  The first is ``gens:`` followed by
whitespace-separated generator names; each later statement is a relator,
optionally prefixed with ``rel:``.  A relator is a sequence of syllables
``name[exponent]`` where ``name`` is letters/underscores and the exponent is
an optional signed integer; a bare ``-`` means ``-1``::

    gens: s a b c; rel: a b a- b- c-2; rel: a c a- c-

Names are case sensitive and capitals carry no special meaning.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from math import prod
from typing import Sequence

from . import oscillator as osc
from .exact_linalg import rank, smith_normal_form
from .oscillator import Flavor, LatticeId, OscElement

Word = tuple[int, ...]  # signed 1-based generator indices


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        n = len(self.generator_names)
        for w in self.relators:
            if any(x == 0 or abs(x) > n for x in w):
                raise PresentationError(f"relator {w} refers to a missing generator")

    def word_to_text(self, w: Word) -> str:
        out = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            name = self.generator_names[abs(w[i]) - 1]
            e = (j - i) * (1 if w[i] > 0 else -1)
            out.append(name if e == 1 else name + ("-" if e == -1 else str(e)))
            i = j
        return " ".join(out)

    def to_text(self) -> str:
        parts = ["gens: " + " ".join(self.generator_names)]
        parts += ["rel: " + self.word_to_text(w) for w in self.relators]
        return "; ".join(parts)


_SYLLABLE = re.compile(r"([A-Za-z_]+)([+-]?\d*)$")


def parse_word(text: str, names: Sequence[str]) -> Word:
    index = {n: i + 1 for i, n in enumerate(names)}
    out: list[int] = []
    for tok in text.split():
        m = _SYLLABLE.match(tok)
        if not m:
            raise PresentationError(f"bad syllable {tok!r}")
        name, exp = m.groups()
        if name not in index:
            raise PresentationError(f"unknown generator {name!r}")
        e = {"": 1, "+": 1, "-": -1}.get(exp)
        if e is None:
            e = int(exp)
        out.extend([index[name] if e > 0 else -index[name]] * abs(e))
    return tuple(out)


def parse_presentation(text: str) -> Presentation:
    stmts = [s.strip() for s in text.split(";") if s.strip()]
    if not stmts or not stmts[0].startswith("gens:"):
        raise PresentationError("presentation must start with 'gens:'")
    names = tuple(stmts[0][len("gens:"):].split())
    if len(set(names)) != len(names):
        raise PresentationError("duplicate generator names")
    rels = []
    for s in stmts[1:]:
        if s.startswith("rel:"):
            s = s[len("rel:"):]
        rels.append(parse_word(s, names))
    return Presentation(names, tuple(rels))


# ---------------------------------------------------------------------------
# lattices


def _comm(u: int, v: int) -> Word:
    return (u, v, -u, -v)


def builtin_presentation(lat: LatticeId) -> Presentation:
    """Generators ``s, a, b, c`` as in :func:`oscillator.generators`."""
    s, a, b, c = 1, 2, 3, 4
    rels = [_comm(a, b) + (-c,) * (2 * lat.k), _comm(a, c), _comm(b, c), _comm(s, c)]
    if lat.flavor is Flavor.ZERO:
        rels += [_comm(s, a), _comm(s, b)]
    elif lat.flavor is Flavor.PI:
        rels += [(s, a, -s, a), (s, b, -s, b)]
    else:
        rels += [(s, a, -s, b), (s, b, -s, -a)]
    return Presentation(("s", "a", "b", "c"), tuple(rels))


def evaluate(word: Word, images: Sequence[OscElement]) -> OscElement:
    out = osc.IDENTITY
    for x in word:
        g = images[abs(x) - 1]
        out = osc.mul(out, g if x > 0 else osc.inv(g))
    return out


def normal_form_word(lat: LatticeId, g: OscElement) -> Word:
    m, x, y, j = osc.normal_form(lat, g)
    word: list[int] = []
    for gen, e in zip((1, 2, 3, 4), (m, x, y, j)):
        word += [gen if e > 0 else -gen] * abs(e)
    return tuple(word)


def verify_presentation(lat: LatticeId, bound: int = 2) -> bool:
    """Relators evaluate to the identity, and box elements equal their normal-form words."""
    pres = builtin_presentation(lat)
    images = osc.generators(lat)
    if not all(evaluate(w, images) == osc.IDENTITY for w in pres.relators):
        return False
    return all(evaluate(normal_form_word(lat, g), images) == g for g in osc.box(lat, bound))


# ---------------------------------------------------------------------------
# abelianization


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...]

    def __str__(self):
        parts = ["Z"] * (self.free_rank > 0)
        if self.free_rank > 1:
            parts = [f"Z^{self.free_rank}"]
        parts += [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) or "0"

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)


def relation_matrix(p: Presentation) -> list[list[int]]:
    n = len(p.generator_names)
    rows = []
    for w in p.relators:
        row = [0] * n
        for x in w:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    return rows


def abelianization(p: Presentation) -> AbelianInvariants:
    n = len(p.generator_names)
    rows = relation_matrix(p) or [[0] * n]
    factors = smith_normal_form(rows).invariant_factors
    r = sum(1 for d in factors if d)
    assert r == rank(rows)
    return AbelianInvariants(n - r, tuple(d for d in factors if d > 1))


@dataclass(frozen=True)
class DistinctionReport:
    table: tuple[tuple[LatticeId, AbelianInvariants], ...]
    pairwise_distinct: bool
    collisions: tuple[tuple[LatticeId, LatticeId], ...]


def distinguish_all(k_max: int) -> DistinctionReport:
    """Abelianizations of Λ_{k,i} for ``k <= k_max``, checked pairwise distinct.

    Invariant-factor form is canonical, so equal tuples are exactly
    isomorphic abelian groups.
    """
    if k_max < 2:
        raise PresentationError("k_max must be >= 2")
    table = tuple((lat, abelianization(builtin_presentation(lat)))
                  for lat in (LatticeId(k, f) for k in range(1, k_max + 1) for f in Flavor))
    collisions = tuple((l1, l2) for (l1, a1), (l2, a2) in combinations(table, 2) if a1 == a2)
    return DistinctionReport(table, not collisions, collisions)


def exotic_presentation() -> Presentation:
    """The non-product lattice L on ``oscillator.EXOTIC_GENERATORS``.

    ``s = (π, 1, 1, 0)`` inverts ``a = (0, 2, 0, 0)`` and ``b = (0, 0, 2, 0)``
    only up to a central correction: ``s a s^-1 = a^-1 c^4`` and
    ``s b s^-1 = b^-1 c^-4`` with ``c = (0, 0, 0, 1/2)``.
    """
    s, a, b, c = 1, 2, 3, 4
    rels = [_comm(a, b) + (-c,) * 8, _comm(a, c), _comm(b, c), _comm(s, c),
            (s, a, -s) + (-c,) * 4 + (a,), (s, b, -s) + (c,) * 4 + (b,)]
    return Presentation(("s", "a", "b", "c"), tuple(rels))
