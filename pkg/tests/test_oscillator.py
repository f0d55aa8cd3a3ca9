import json
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kodaira_lab import oscillator as osc
from kodaira_lab.oscillator import Flavor, LatticeId, OscElement

F = Fraction
LATTICES = [LatticeId(k, f) for k in (1, 2, 3) for f in Flavor]

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3)
elements = st.builds(OscElement, st.integers(-5, 5), rationals, rationals, rationals)


def sympy_mul(a, b):
    """Independent group law with real angles θ = qπ/2, evaluated by sympy."""
    th = sympy.pi * a.q / 2
    c, s = sympy.cos(th), sympy.sin(th)
    x2 = c * b.x + s * b.y
    y2 = -s * b.x + c * b.y
    x, y = a.x + x2, a.y + y2
    z = a.z + b.z + sympy.Rational(1, 2) * (a.x * y2 - x2 * a.y)
    return (a.q + b.q, sympy.nsimplify(x), sympy.nsimplify(y), sympy.nsimplify(z))


def test_rotation():
    assert osc.rotation(0) == ((1, 0), (0, 1))
    assert osc.rotation(1) == ((0, 1), (-1, 0))
    for q, r in product(range(-5, 6), repeat=2):
        m = sympy.Matrix(osc.rotation(q)) * sympy.Matrix(osc.rotation(r))
        assert m == sympy.Matrix(osc.rotation(q + r))
    assert osc.rotation(4) == osc.rotation(0)


def test_mul_examples():
    assert osc.mul(OscElement(0, 1), OscElement(0, 0, 1)) == OscElement(0, 1, 1, F(1, 2))
    assert osc.mul(OscElement(2), OscElement(0, 1)) == OscElement(2, -1, 0, 0)


@settings(max_examples=80, deadline=None)
@given(elements, elements)
def test_mul_matches_trigonometric_law(a, b):
    g = osc.mul(a, b)
    assert (g.q, g.x, g.y, g.z) == sympy_mul(a, b)


@settings(max_examples=100, deadline=None)
@given(elements, elements, elements)
def test_associativity(a, b, c):
    assert osc.mul(osc.mul(a, b), c) == osc.mul(a, osc.mul(b, c))


@settings(max_examples=100, deadline=None)
@given(elements)
def test_inverse(a):
    assert osc.mul(a, osc.inv(a)) == osc.IDENTITY == osc.mul(osc.inv(a), a)


def test_inverse_example():
    g = OscElement(1, 1)
    assert osc.inv(g) == OscElement(-1, 0, -1, 0)
    assert osc.mul(g, osc.inv(g)) == osc.IDENTITY


def test_associativity_exhaustive_small():
    vals = [F(-1), F(0), F(1, 2)]
    pts = [OscElement(q, x, y, z) for q in (0, 1, 3) for x in vals for y in vals for z in (F(0), F(1))]
    for a, b, c in product(pts[::3], pts[1::4], pts):
        assert osc.mul(osc.mul(a, b), c) == osc.mul(a, osc.mul(b, c))


def test_power():
    g = OscElement(1, 1, 2, F(1, 3))
    acc = osc.IDENTITY
    for n in range(6):
        assert osc.power(g, n) == acc
        acc = osc.mul(acc, g)
    assert osc.power(g, -2) == osc.inv(osc.mul(g, g))


def test_commutators():
    assert osc.commutator(OscElement(0, 1), OscElement(0, 0, 1)) == OscElement(0, 0, 0, 1)
    s, a = OscElement(2), OscElement(0, 1)
    direct = osc.mul(osc.mul(s, a), osc.mul(osc.inv(s), osc.inv(a)))
    assert osc.commutator(s, a) == direct == OscElement(0, -2, 0, 0)


def test_json_roundtrip():
    g = OscElement(3, F(-1, 2), 2, F(5, 7))
    assert OscElement.from_json(json.loads(json.dumps(g.to_json()))) == g
    assert g.to_json() == {"q": 3, "x": "-1/2", "y": "2", "z": "5/7"}


def test_flavor_parse_and_ids():
    assert Flavor.parse("pi2") is Flavor.PI_HALF
    assert Flavor.parse("0") is Flavor.ZERO
    with pytest.raises(osc.LatticeError):
        Flavor.parse("tau")
    with pytest.raises(osc.LatticeError):
        LatticeId(0, Flavor.ZERO)
    assert str(LatticeId(5, Flavor.PI)) == "Λ_{5,π}"


@pytest.mark.parametrize("lat", LATTICES, ids=str)
def test_lattice_closed_on_box(lat):
    pts = list(osc.box(lat, 1))
    gens = osc.generators(lat)
    for g in pts:
        assert osc.contains(lat, g)
        assert osc.contains(lat, osc.inv(g))
        for h in gens:
            assert osc.contains(lat, osc.mul(g, h))
    for g, h in product(pts[::7], pts):
        assert osc.contains(lat, osc.mul(g, h))


def test_contains():
    lat = LatticeId(1, Flavor.ZERO)
    assert osc.contains(lat, OscElement(4, 1, -2, F(1, 2)))
    assert not osc.contains(lat, OscElement(2))
    assert not osc.contains(lat, OscElement(0, F(1, 2)))
    assert not osc.contains(lat, OscElement(0, 0, 0, F(1, 4)))
    assert osc.contains(LatticeId(2, Flavor.ZERO), OscElement(0, 0, 0, F(1, 4)))
    assert osc.contains(LatticeId(1, Flavor.PI_HALF), OscElement(1))


def test_is_central():
    lat = LatticeId(1, Flavor.ZERO)
    assert osc.is_central(lat, OscElement(4, 0, 0, F(1, 2)))
    assert not osc.is_central(lat, OscElement(0, 1))
    with pytest.raises(osc.LatticeError):
        osc.is_central(lat, OscElement(1))


@pytest.mark.parametrize("lat", [LatticeId(1, Flavor.ZERO), LatticeId(1, Flavor.PI),
                                 LatticeId(2, Flavor.PI_HALF)], ids=str)
def test_center_box(lat):
    assert osc.center_box_check(lat, 4)


@pytest.mark.parametrize("k,bound", [(1, 3), (2, 3), (3, 2)])
def test_commutator_box(k, bound):
    assert osc.commutator_box_check(k, bound)


def test_commutator_reduction_matches_full_sweep():
    # the central-reduction sweep agrees with brute force over the full box
    lat = LatticeId(1, Flavor.ZERO)
    pts = list(osc.box(lat, 1))
    for g, h in product(pts, pts[::5]):
        c = osc.commutator(g, h)
        assert c.q == 0 and c.x == 0 and c.y == 0 and c.z.denominator == 1
    assert osc.commutator_box_check(1, 1)


def test_bad_bounds():
    with pytest.raises(osc.LatticeError):
        osc.center_box_check(LatticeId(1, Flavor.ZERO), 0)
    with pytest.raises(osc.LatticeError):
        osc.commutator_box_check(1, 0)


def test_covering():
    z, p, h = (LatticeId(1, f) for f in Flavor)
    assert osc.covering_index(z, p) == 2
    assert osc.covering_index(p, h) == 2
    assert osc.covering_index(z, h) == 4
    assert osc.covering_index(z, p) * osc.covering_index(p, h) == osc.covering_index(z, h)
    with pytest.raises(osc.LatticeError):
        osc.covering_index(h, z)
    with pytest.raises(osc.LatticeError):
        osc.covering_index(z, LatticeId(2, Flavor.PI))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_normality_chain(k):
    z, p, h = (LatticeId(k, f) for f in Flavor)
    assert osc.normality_check(z, p)
    assert osc.normality_check(z, h)
    assert osc.normality_check(p, h)


def test_normal_form_examples():
    lat = LatticeId(1, Flavor.ZERO)
    assert osc.normal_form(lat, OscElement(0, 1, 1, F(1, 2))) == (0, 1, 1, 0)
    assert osc.normal_form(lat, OscElement(4, 0, 0, F(3, 2))) == (1, 0, 0, 3)


@pytest.mark.parametrize("lat", LATTICES, ids=str)
def test_normal_form_roundtrip(lat):
    for g in osc.box(lat, 1):
        assert osc.from_normal_form(lat, osc.normal_form(lat, g)) == g


# --- product lattices -------------------------------------------------------------


@pytest.mark.parametrize("l,q,r,k,flavor,name", [
    (4, 1, 1, 1, Flavor.ZERO, "γ₁"),
    (8, F(1, 2), 3, 2, Flavor.ZERO, "γ₁"),
    (2, 2, 3, 5, Flavor.PI, "γ₂"),
    (6, 1, F(2, 3), 1, Flavor.PI, "γ₂"),
    (1, 1, 1, 1, Flavor.PI_HALF, "γ₃"),
    (5, F(3, 2), F(3, 2), 2, Flavor.PI_HALF, "γ₃"),
    (3, 2, 2, 3, Flavor.PI_HALF, "γ₄"),
    (7, 1, 1, 1, Flavor.PI_HALF, "γ₄"),
])
def test_classify(l, q, r, k, flavor, name):
    c = osc.classify_product_lattice(l, q, r, k)
    assert c.verified
    assert c.lattice == LatticeId(k, flavor)
    assert c.iso.name == name


def test_classify_description():
    assert osc.classify_product_lattice(2, 2, 3, 5).describe() == "Λ_{5,π} via γ₂"


@pytest.mark.parametrize("args", [(0, 1, 1, 1), (1, 1, 2, 1), (3, 2, 1, 1), (2, 0, 1, 1),
                                  (2, 1, -1, 1), (-4, 1, 1, 1), (4, 1, 1, 0)])
def test_classify_rejects(args):
    with pytest.raises(osc.LatticeError):
        osc.classify_product_lattice(*args)


def test_classify_map_is_bijective_on_generators():
    for l, q, r in [(4, 2, 3), (2, 1, 5), (1, 2, 2), (3, 3, 3)]:
        c = osc.classify_product_lattice(l, q, r, 2)
        gens = osc.generators(c.lattice)
        assert all(c.target.contains(c.iso(g)) for g in gens)
        assert all(osc.contains(c.lattice, c.iso.inverse()(g)) for g in c.target.generators())


def test_literal_gamma4_is_not_a_homomorphism():
    # (x, y, z) -> (-q x, -q y, -q^2 z) commutes with the rotation instead of inverting it
    q = F(2)
    lat = LatticeId(1, Flavor.PI_HALF)
    literal = osc.CoordinateMap("literal", F(3), ((-q, F(0)), (F(0), -q)), -q * q)
    gens = osc.generators(lat)
    assert osc.homomorphism_defect(literal, gens)
    corrected = osc.product_lattice_map(3, q, q, 1)[1]
    assert not osc.homomorphism_defect(corrected, gens + list(osc.box(lat, 1))[::5])


# --- the non-product lattice --------------------------------------------------------


def test_exotic_set():
    for g in osc.EXOTIC_GENERATORS:
        assert osc.in_exotic_set(g)
    assert not osc.in_exotic_set(OscElement(2, 2, 2))
    assert not osc.in_exotic_set(OscElement(0, 1, 1))
    assert not osc.in_exotic_set(OscElement(1, 1, 1))


def test_exotic_check():
    rep = osc.exotic_lattice_check(3)
    assert rep.passed
    assert rep.closed and rep.homomorphism and rep.lands_in_target and rep.injective
    # the image has index 2: the half-turn of Λ_{2,π} is not hit
    assert not rep.surjective_on_generators
    assert OscElement(2) in rep.missing_generators


def test_exotic_generators_land_in_target():
    target = LatticeId(2, Flavor.PI)
    for g in osc.EXOTIC_GENERATORS:
        assert osc.contains(target, osc.EXOTIC_MAP(g))


@pytest.mark.slow
def test_exotic_closure_bound_2():
    assert osc.exotic_closure_check(2)
