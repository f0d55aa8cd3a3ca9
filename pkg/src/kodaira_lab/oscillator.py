"""Exact arithmetic in the oscillator group at quarter-turn angles, and its lattices.

An element ``(q, x, y, z)`` has angle ``q * π/2``; multiplication is

    (q, h) · (q', h') = (q + q', h · α(q)(h'))

where ``α(q)`` rotates ``(x, y)`` by ``[[cos, sin], [-sin, cos]]`` and ``·`` on
the Heisenberg part is ``(x, y, z)(x', y', z') = (x+x', y+y', z+z'+(xy'-x'y)/2)``.
Because angles are quarter turns, every rotation matrix has entries in
{-1, 0, 1} and the whole group law stays inside Q.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

from .exact_linalg import to_fraction


class LatticeError(ValueError):
    pass


_ROT = ((1, 0, 0, 1), (0, 1, -1, 0), (-1, 0, 0, -1), (0, -1, 1, 0))


def rotation(q: int) -> tuple[tuple[int, int], tuple[int, int]]:
    a, b, c, d = _ROT[q % 4]
    return (a, b), (c, d)


@dataclass(frozen=True, order=True)
class OscElement:
    q: int = 0
    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    z: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.q, int):
            raise TypeError("angle must be an integer number of quarter turns")
        for f in ("x", "y", "z"):
            v = getattr(self, f)
            if type(v) is not Fraction:
                object.__setattr__(self, f, to_fraction(v))

    def __mul__(self, other: "OscElement") -> "OscElement":
        return mul(self, other)

    def __pow__(self, n: int) -> "OscElement":
        return power(self, n)

    def __iter__(self):
        return iter((self.q, self.x, self.y, self.z))

    def __str__(self):
        return f"({self.q}, {self.x}, {self.y}, {self.z})"

    def to_json(self) -> dict:
        return {"q": self.q, "x": str(self.x), "y": str(self.y), "z": str(self.z)}

    @classmethod
    def from_json(cls, data: dict) -> "OscElement":
        return cls(int(data["q"]), to_fraction(data["x"]), to_fraction(data["y"]),
                   to_fraction(data["z"]))


IDENTITY = OscElement()


def _rotate(q: int, x: Fraction, y: Fraction) -> tuple[Fraction, Fraction]:
    r = q % 4
    if r == 0:
        return x, y
    if r == 1:
        return y, -x
    if r == 2:
        return -x, -y
    return -y, x


_new = object.__new__


def _make(q: int, x: Fraction, y: Fraction, z: Fraction) -> OscElement:
    """Trusted constructor for already-validated coordinates (hot path)."""
    g = _new(OscElement)
    g.__dict__.update(q=q, x=x, y=y, z=z)
    return g


def mul(a: OscElement, b: OscElement) -> OscElement:
    if not (b.x or b.y):  # b is a rotation times a central element
        return _make(a.q + b.q, a.x, a.y, a.z + b.z if b.z else a.z)
    bx, by = _rotate(a.q, b.x, b.y)
    if not (a.x or a.y):
        return _make(a.q + b.q, bx, by, a.z + b.z if a.z else b.z)
    return _make(a.q + b.q, a.x + bx, a.y + by,
                 a.z + b.z + (a.x * by - bx * a.y) / 2)


def inv(a: OscElement) -> OscElement:
    # Heisenberg inverse is (-x, -y, -z); then rotate back by -q
    x, y = _rotate(-a.q, -a.x, -a.y)
    return _make(-a.q, x, y, -a.z)


def power(a: OscElement, n: int) -> OscElement:
    base = a if n >= 0 else inv(a)
    out = IDENTITY
    for _ in range(abs(n)):
        out = mul(out, base)
    return out


def commutator(a: OscElement, b: OscElement) -> OscElement:
    """``a b a^-1 b^-1``."""
    return mul(mul(a, b), mul(inv(a), inv(b)))


def conjugate(g: OscElement, h: OscElement) -> OscElement:
    """``g h g^-1``."""
    return mul(mul(g, h), inv(g))


# ---------------------------------------------------------------------------
# lattices


class Flavor(enum.Enum):
    ZERO = "0"
    PI = "pi"
    PI_HALF = "pi2"

    @property
    def period(self) -> int:
        """Angle generator in quarter turns."""
        return {Flavor.ZERO: 4, Flavor.PI: 2, Flavor.PI_HALF: 1}[self]

    @property
    def symbol(self) -> str:
        return {Flavor.ZERO: "0", Flavor.PI: "π", Flavor.PI_HALF: "π/2"}[self]

    @classmethod
    def parse(cls, text: str) -> "Flavor":
        aliases = {"0": cls.ZERO, "zero": cls.ZERO, "pi": cls.PI, "π": cls.PI,
                   "pi2": cls.PI_HALF, "pi/2": cls.PI_HALF, "π/2": cls.PI_HALF,
                   "pihalf": cls.PI_HALF}
        try:
            return aliases[str(text).lower()]
        except KeyError:
            raise LatticeError(f"bad flavor {text!r}; use 0, pi or pi2") from None


@dataclass(frozen=True)
class LatticeId:
    """Λ_{k,flavor}: angle in ``period * Z``, ``x, y`` in Z, ``z`` in ``Z/2k``."""

    k: int
    flavor: Flavor

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise LatticeError(f"k must be a positive integer, got {self.k!r}")
        if not isinstance(self.flavor, Flavor):
            object.__setattr__(self, "flavor", Flavor.parse(self.flavor))

    def __str__(self):
        return f"Λ_{{{self.k},{self.flavor.symbol}}}"

    @property
    def period(self) -> int:
        return self.flavor.period


def contains(lat: LatticeId, g: OscElement) -> bool:
    return (g.q % lat.period == 0 and g.x.denominator == 1 and g.y.denominator == 1
            and (2 * lat.k * g.z).denominator == 1)


def generators(lat: LatticeId) -> list[OscElement]:
    """Angle generator ``s``, then ``a``, ``b``, ``c``."""
    return [OscElement(lat.period), OscElement(0, 1), OscElement(0, 0, 1),
            OscElement(0, 0, 0, Fraction(1, 2 * lat.k))]


def element(lat: LatticeId, m: int, x: int, y: int, j: int) -> OscElement:
    """The element with coordinates ``(period*m, x, y, j/2k)``."""
    return OscElement(lat.period * m, x, y, Fraction(j, 2 * lat.k))


def box(lat: LatticeId, bound: int) -> Iterator[OscElement]:
    """Lattice points with ``|m|, |x|, |y|, |j| <= bound`` in :func:`element` coordinates."""
    r = range(-bound, bound + 1)
    for m, x, y, j in product(r, r, r, r):
        yield element(lat, m, x, y, j)


def _require_member(lat, g):
    if not contains(lat, g):
        raise LatticeError(f"{g} is not an element of {lat}")


def is_central(lat: LatticeId, g: OscElement) -> bool:
    _require_member(lat, g)
    return _commutes_with_all(g, generators(lat))


def _commutes_with_all(g: OscElement, gens: Sequence[OscElement]) -> bool:
    return all(mul(g, h) == mul(h, g) for h in gens)


def in_center_set(lat: LatticeId, g: OscElement) -> bool:
    """Membership in ``2πZ x 0 x 0 x Z/2k`` (full turns, trivial plane part)."""
    return contains(lat, g) and g.q % 4 == 0 and g.x == 0 and g.y == 0


def center_box_check(lat: LatticeId, bound: int) -> bool:
    """Centrality agrees with the expected center on every box element."""
    if bound < 1:
        raise LatticeError("bound must be >= 1")
    gens = generators(lat)
    return all(_commutes_with_all(g, gens) == in_center_set(lat, g) for g in box(lat, bound))


def commutator_box_check(k: int, bound: int) -> bool:
    """All commutators of box elements of Λ_{k,0} lie in ``0 x 0 x 0 x Z``.

    The angle generator and ``c`` are first certified central by exact
    multiplication; commutators are then unchanged by central factors, so the
    exhaustive sweep runs over pairs of plane coordinates.  Each pair still
    carries full-box angle/z coordinates, cycled deterministically, so every
    product is computed on a genuine four-coordinate element.
    """
    if bound < 1:
        raise LatticeError("bound must be >= 1")
    lat = LatticeId(k, Flavor.ZERO)
    s, a, b, c = generators(lat)
    if not (is_central(lat, s) and is_central(lat, c)):
        return False
    r = range(-bound, bound + 1)
    width = len(r)
    plane = list(product(r, r))
    attained = False
    target = OscElement(0, 0, 0, 1)
    for n1, (x1, y1) in enumerate(plane):
        g = element(lat, r[n1 % width], x1, y1, r[(n1 // width) % width])
        for n2, (x2, y2) in enumerate(plane):
            h = element(lat, r[(n2 * 3) % width], x2, y2, r[(n1 + n2) % width])
            comm = commutator(g, h)
            if comm.q or comm.x or comm.y or comm.z.denominator != 1:
                return False
            attained |= comm == target
    return attained and commutator(a, b) == target


def covering_index(sub: LatticeId, sup: LatticeId) -> int:
    """``[sup : sub]``; only the angle generator differs between flavors."""
    if sub.k != sup.k:
        raise LatticeError(f"lattices {sub} and {sup} have different k")
    if sub.period % sup.period:
        raise LatticeError(f"{sub} is not contained in {sup}")
    return sub.period // sup.period


def normality_check(sub: LatticeId, sup: LatticeId, bound: int = 2) -> bool:
    """``sub`` is normal in ``sup``.

    Conjugating each generator of ``sub`` by each generator of ``sup`` and its
    inverse is exact proof; the box sweep re-checks with arbitrary conjugators.
    """
    covering_index(sub, sup)
    sub_gens = generators(sub)
    conj = generators(sup) + [inv(g) for g in generators(sup)]
    if not all(contains(sub, conjugate(g, h)) for g in conj for h in sub_gens):
        return False
    return all(contains(sub, conjugate(g, h)) for g in box(sup, bound) for h in sub_gens)


def normal_form(lat: LatticeId, g: OscElement) -> tuple[int, int, int, int]:
    """Exponents ``(m, x, y, j)`` with ``g == s^m a^x b^y c^j``."""
    _require_member(lat, g)
    m = g.q // lat.period
    (r00, r01), (r10, r11) = rotation(-g.q)
    x = r00 * g.x + r01 * g.y
    y = r10 * g.x + r11 * g.y
    j = 2 * lat.k * (g.z - x * y / 2)
    assert x.denominator == y.denominator == j.denominator == 1
    return m, int(x), int(y), int(j)


def from_normal_form(lat: LatticeId, exps: Sequence[int]) -> OscElement:
    s, a, b, c = generators(lat)
    m, x, y, j = exps
    return mul(mul(power(s, m), power(a, x)), mul(power(b, y), power(c, j)))


# ---------------------------------------------------------------------------
# product lattices


@dataclass(frozen=True)
class CoordinateMap:
    """``(q, x, y, z) -> (angle_factor*q, M(x, y), z_factor*z)``."""

    name: str
    angle_factor: Fraction
    plane: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    z_factor: Fraction

    def inverse(self) -> "CoordinateMap":
        (m00, m01), (m10, m11) = self.plane
        d = m00 * m11 - m01 * m10
        return CoordinateMap(f"{self.name}^-1", 1 / self.angle_factor,
                             ((m11 / d, -m01 / d), (-m10 / d, m00 / d)), 1 / self.z_factor)

    def __call__(self, g: OscElement) -> OscElement:
        q = self.angle_factor * g.q
        if q.denominator != 1:
            raise LatticeError(f"{self.name} sends angle {g.q} to a non-quarter-turn angle")
        (m00, m01), (m10, m11) = self.plane
        return OscElement(int(q), m00 * g.x + m01 * g.y, m10 * g.x + m11 * g.y,
                          self.z_factor * g.z)


def homomorphism_defect(f: Callable[[OscElement], OscElement],
                        elements: Iterable[OscElement]) -> list[tuple[OscElement, OscElement]]:
    """Pairs ``(g, h)`` with ``f(gh) != f(g) f(h)``."""
    els = list(elements)
    return [(g, h) for g in els for h in els if f(mul(g, h)) != mul(f(g), f(h))]


@dataclass(frozen=True)
class ProductLattice:
    """``(π/2) l Z x q Z x r Z x (qr/2k) Z``."""

    l: int
    q: Fraction
    r: Fraction
    k: int

    def contains(self, g: OscElement) -> bool:
        zstep = self.q * self.r / (2 * self.k)
        return (g.q % self.l == 0 and (g.x / self.q).denominator == 1
                and (g.y / self.r).denominator == 1 and (g.z / zstep).denominator == 1)

    def generators(self) -> list[OscElement]:
        return [OscElement(self.l), OscElement(0, self.q), OscElement(0, 0, self.r),
                OscElement(0, 0, 0, self.q * self.r / (2 * self.k))]


@dataclass(frozen=True)
class Classification:
    lattice: LatticeId
    iso: CoordinateMap
    target: ProductLattice
    verified: bool

    def describe(self) -> str:
        return f"{self.lattice} via {self.iso.name}"


def product_lattice_map(l: int, q, r, k: int) -> tuple[LatticeId, CoordinateMap]:
    """The flavor and isomorphism onto a product lattice, by ``l mod 4``.

    For ``l ≡ 3`` the angle generator turns the other way, so the plane map
    must conjugate the quarter rotation into its inverse: a reflection
    ``(x, y) -> (q x, -q y)``, with ``z`` scaled by its determinant ``-q^2``.
    """
    q, r = to_fraction(q), to_fraction(r)
    if l == 0:
        raise LatticeError("l = 0: the quotient is R x H3/L', which is not compact")
    if l < 0:
        raise LatticeError("l must be a positive integer")
    if q <= 0 or r <= 0:
        raise LatticeError("q and r must be positive: otherwise L ∩ H3 is not a lattice in H3")
    res = l % 4
    if res in (1, 3) and q != r:
        raise LatticeError(f"l ≡ {res} (mod 4) forces q = r (closure gives r|q and q|r), "
                           f"got q={q}, r={r}")
    one, zero = Fraction(1), Fraction(0)
    if res == 0:
        return LatticeId(k, Flavor.ZERO), CoordinateMap(
            "γ₁", Fraction(l, 4), ((q, zero), (zero, r)), q * r)
    if res == 2:
        return LatticeId(k, Flavor.PI), CoordinateMap(
            "γ₂", Fraction(l, 2), ((q, zero), (zero, r)), q * r)
    if res == 1:
        return LatticeId(k, Flavor.PI_HALF), CoordinateMap(
            "γ₃", Fraction(l), ((q, zero), (zero, q)), q * q)
    return LatticeId(k, Flavor.PI_HALF), CoordinateMap(
        "γ₄", Fraction(l), ((q, zero), (zero, -q)), -q * q)


def classify_product_lattice(l: int, q, r, k: int, bound: int = 1) -> Classification:
    """Identify ``(π/2) l Z x q Z x r Z x (qr/2k) Z`` with some Λ_{k,i}.

    The returned map is checked to be a homomorphism on all pairs of
    generators and inverses (and a small box), and to send generators into
    the target set.
    """
    if not isinstance(k, int) or k < 1:
        raise LatticeError("k must be a positive integer")
    lat, iso = product_lattice_map(l, q, r, k)
    target = ProductLattice(l, to_fraction(q), to_fraction(r), k)
    gens = generators(lat)
    sample = gens + [inv(g) for g in gens] + list(box(lat, bound))
    ok = (not homomorphism_defect(iso, gens + [inv(g) for g in gens])
          and not homomorphism_defect(iso, sample)
          and all(target.contains(iso(g)) for g in sample)
          and all(contains(lat, iso.inverse()(g)) for g in target.generators()))
    return Classification(lat, iso, target, ok)


# ---------------------------------------------------------------------------
# a lattice that is not a product of subsets


def in_exotic_set(g: OscElement) -> bool:
    """Half-turn angles, with (x, y) both even on full turns and both odd otherwise; z in Z/2."""
    if g.q % 2 or g.x.denominator != 1 or g.y.denominator != 1 or (2 * g.z).denominator != 1:
        return False
    parity = 0 if g.q % 4 == 0 else 1
    return g.x % 2 == parity and g.y % 2 == parity


def exotic_box(bound: int) -> Iterator[OscElement]:
    r = range(-bound, bound + 1)
    for l, x, y, z in product(r, r, r, r):
        if l % 2 == 0:
            yield OscElement(2 * l, 2 * x, 2 * y, Fraction(z, 2))
        else:
            yield OscElement(2 * l, 2 * x + 1, 2 * y + 1, Fraction(z, 2))


EXOTIC_MAP = CoordinateMap(
    "(t,x,y,z) -> (t,(x-y)/2,(x+y)/2,z/2)", Fraction(1),
    ((Fraction(1, 2), Fraction(-1, 2)), (Fraction(1, 2), Fraction(1, 2))), Fraction(1, 2))

EXOTIC_GENERATORS = (OscElement(2, 1, 1), OscElement(0, 2), OscElement(0, 0, 2),
                     OscElement(0, 0, 0, Fraction(1, 2)))


@dataclass(frozen=True)
class ExoticReport:
    closed: bool
    homomorphism: bool
    lands_in_target: bool
    injective: bool
    surjective_on_generators: bool
    missing_generators: tuple[OscElement, ...]

    @property
    def passed(self) -> bool:
        return self.closed and self.homomorphism and self.lands_in_target and self.injective


def exotic_closure_check(bound: int) -> bool:
    """Exhaustive: products and inverses of all box points stay in L."""
    pts = list(exotic_box(bound))
    return (all(in_exotic_set(inv(g)) for g in pts)
            and all(in_exotic_set(mul(g, h)) for g in pts for h in pts))


def exotic_lattice_check(bound: int = 3) -> ExoticReport:
    """Check the non-product lattice L and its map into Λ_{2,π}.

    On the box of radius ``bound``: every point is in L and right products
    with L's generators and their inverses stay in L; all pairwise
    products are swept on the unit box.  The map is tested for the
    homomorphism property the same way (``f(gh) = f(g)f(h)`` for every box
    point ``g`` and generator ``h`` is what extends to words), and for injectivity on the box.
    The report also records which generators of Λ_{2,π} have no preimage
    in L.
    """
    target = LatticeId(2, Flavor.PI)
    pts = list(exotic_box(bound))
    gens = list(EXOTIC_GENERATORS) + [inv(g) for g in EXOTIC_GENERATORS]
    closed = (all(in_exotic_set(g) for g in pts)
              and all(in_exotic_set(mul(g, h)) for g in pts for h in gens)
              and exotic_closure_check(1))
    f = EXOTIC_MAP
    hom = (not homomorphism_defect(f, list(exotic_box(1)))
           and all(f(mul(g, h)) == mul(f(g), f(h)) for g in pts for h in gens))
    lands = all(contains(target, f(g)) for g in pts)
    images = [f(g) for g in pts]
    injective = len(set(images)) == len(images)
    # the map is linear in coordinates, so a preimage is unique if it exists
    inverse = f.inverse()
    missing = tuple(g for g in generators(target) if not in_exotic_set(inverse(g)))
    return ExoticReport(closed, hom, lands, injective, not missing, missing)
