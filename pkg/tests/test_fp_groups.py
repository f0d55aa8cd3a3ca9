import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kodaira_lab import fp_groups as fp
from kodaira_lab import oscillator as osc
from kodaira_lab.fp_groups import AbelianInvariants, Presentation
from kodaira_lab.oscillator import Flavor, LatticeId

LATTICES = [LatticeId(k, f) for k in (1, 2, 3) for f in Flavor]


def expected_invariants(lat):
    k = lat.k
    if lat.flavor is Flavor.ZERO:
        return AbelianInvariants(3, (2 * k,))
    if lat.flavor is Flavor.PI:
        return AbelianInvariants(1, (2, 2, 2 * k))
    return AbelianInvariants(1, (2, 2 * k))


def sympy_abelian(p):
    """Oracle: invariant factors from sympy's Smith form over ZZ."""
    from sympy.matrices.normalforms import smith_normal_form
    from sympy.polys.domains import ZZ
    m = sympy.Matrix(fp.relation_matrix(p))
    d = smith_normal_form(m, domain=ZZ)
    diag = [abs(int(d[i, i])) for i in range(min(d.shape))]
    nonzero = [x for x in diag if x]
    return AbelianInvariants(len(p.generator_names) - len(nonzero), tuple(sorted(x for x in nonzero if x > 1)))


def test_parse_and_print_roundtrip():
    text = "gens: s a b c; rel: a b a- b- c-2; rel: a c a- c-; s a s- a"
    p = fp.parse_presentation(text)
    assert p.generator_names == ("s", "a", "b", "c")
    assert p.relators[0] == (2, 3, -2, -3, -4, -4)
    assert p.relators[2] == (1, 2, -1, 2)
    assert fp.parse_presentation(p.to_text()) == p


def test_parse_errors():
    with pytest.raises(fp.PresentationError):
        fp.parse_presentation("rel: a")
    with pytest.raises(fp.PresentationError):
        fp.parse_presentation("gens: a b; rel: a c")
    with pytest.raises(fp.PresentationError):
        fp.parse_presentation("gens: a a")
    with pytest.raises(fp.PresentationError):
        fp.parse_presentation("gens: a; rel: a^2")


def test_exponent_syntax():
    p = fp.parse_presentation("gens: x y; rel: x3 y-2 x+")
    assert p.relators == ((1, 1, 1, -2, -2, 1),)


@pytest.mark.parametrize("lat", LATTICES, ids=str)
def test_verify_presentation(lat):
    assert fp.verify_presentation(lat, 2)


def test_presentation_shapes():
    for k in (1, 4):
        text = fp.builtin_presentation(LatticeId(k, Flavor.ZERO)).to_text()
        assert text.startswith("gens: s a b c; rel: a b a- b- c" + f"-{2 * k}")
    images = osc.generators(LatticeId(1, Flavor.PI))
    s, a = images[0], images[1]
    assert osc.conjugate(s, a) == osc.inv(a)
    images = osc.generators(LatticeId(1, Flavor.PI_HALF))
    s, a, b = images[:3]
    assert osc.conjugate(s, a) == osc.inv(b)
    assert osc.conjugate(s, b) == a


def test_wrong_relator_is_caught():
    lat = LatticeId(1, Flavor.PI)
    good = fp.builtin_presentation(lat)
    bad = Presentation(good.generator_names, good.relators + ((1, 2, -1, -2),))
    assert any(fp.evaluate(w, osc.generators(lat)) != osc.IDENTITY for w in bad.relators)


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("flavor", list(Flavor))
def test_abelianization_formulas(k, flavor):
    lat = LatticeId(k, flavor)
    p = fp.builtin_presentation(lat)
    ab = fp.abelianization(p)
    assert ab == expected_invariants(lat)
    assert ab == sympy_abelian(p)
    assert all(ab.torsion[i + 1] % ab.torsion[i] == 0 for i in range(len(ab.torsion) - 1))


def test_invariants_str():
    assert str(AbelianInvariants(3, (2,))) == "Z^3 x Z/2"
    assert str(AbelianInvariants(1, (2, 4))) == "Z x Z/2 x Z/4"
    assert str(AbelianInvariants(0, ())) == "0"
    assert AbelianInvariants(1, (2, 2, 6)).torsion_order == 24


def test_torsion_order_matches_determinant():
    # for a full-rank square relation matrix, the group order is |det|
    p = fp.parse_presentation("gens: x y; rel: x2 y4; x6 y8")
    ab = fp.abelianization(p)
    assert ab.free_rank == 0
    assert ab.torsion_order == abs(sympy.Matrix(fp.relation_matrix(p)).det())


# --- Tietze moves ------------------------------------------------------------------


def conjugate_relator(p, i, g):
    rels = list(p.relators)
    rels[i] = (g,) + rels[i] + (-g,)
    return Presentation(p.generator_names, tuple(rels))


def add_consequence(p, i, j):
    inv_j = tuple(-x for x in reversed(p.relators[j]))
    return Presentation(p.generator_names, p.relators + (p.relators[i] + inv_j,))


def add_generator(p, word):
    n = len(p.generator_names) + 1
    return Presentation(p.generator_names + (f"t{n}",), p.relators + ((-n,) + tuple(word),))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(LATTICES), st.data())
def test_tietze_invariance(lat, data):
    p = fp.builtin_presentation(lat)
    ab = fp.abelianization(p)
    nrel, ngen = len(p.relators), len(p.generator_names)
    i = data.draw(st.integers(0, nrel - 1))
    j = data.draw(st.integers(0, nrel - 1))
    g = data.draw(st.sampled_from([x for x in range(-ngen, ngen + 1) if x]))
    word = data.draw(st.lists(st.sampled_from([x for x in range(-ngen, ngen + 1) if x]), max_size=6))
    assert fp.abelianization(conjugate_relator(p, i, g)) == ab
    assert fp.abelianization(add_consequence(p, i, j)) == ab
    q = add_generator(p, word)
    assert fp.abelianization(q) == ab
    # the new generator's image is forced, so the presentation still holds in G
    images = osc.generators(lat)
    images = images + [fp.evaluate(tuple(word), images)]
    assert all(fp.evaluate(w, images) == osc.IDENTITY for w in q.relators)


def test_random_presentations_match_sympy():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 4)
        rels = tuple(tuple(rng.choice([x for x in range(-n, n + 1) if x])
                           for _ in range(rng.randint(1, 8))) for _ in range(rng.randint(1, 4)))
        p = Presentation(tuple(f"g{i}" for i in range(n)), rels)
        assert fp.abelianization(p) == sympy_abelian(p)


# --- distinguishing the family -------------------------------------------------------


def test_distinguish_small():
    rep = fp.distinguish_all(2)
    assert len(rep.table) == 6 and rep.pairwise_distinct


def test_distinguish_kmax_10():
    rep = fp.distinguish_all(10)
    assert len(rep.table) == 30
    assert rep.pairwise_distinct and rep.collisions == ()
    # formula-level oracle: (free rank, 2-rank of torsion, largest factor) separates everything
    keys = set()
    for lat, ab in rep.table:
        e = expected_invariants(lat)
        keys.add((e.free_rank, len(e.torsion), e.torsion[-1]))
    assert len(keys) == 30
    with pytest.raises(fp.PresentationError):
        fp.distinguish_all(1)


def test_free_rank_equals_b1():
    from kodaira_lab.topology import solvmanifold_betti
    for lat in LATTICES:
        assert fp.abelianization(fp.builtin_presentation(lat)).free_rank == solvmanifold_betti(lat)[1]


def test_exotic_presentation():
    p = fp.exotic_presentation()
    assert all(fp.evaluate(w, osc.EXOTIC_GENERATORS) == osc.IDENTITY for w in p.relators)
    ab = fp.abelianization(p)
    assert ab == AbelianInvariants(1, (2, 2, 8))
    assert ab != fp.abelianization(fp.builtin_presentation(LatticeId(2, Flavor.PI)))
    assert ab == fp.abelianization(fp.builtin_presentation(LatticeId(4, Flavor.PI)))


def test_exotic_presentation_normal_form_words():
    # every box element of L is a word s^m a^x b^y c^j in the exotic generators
    s, a, b, c = osc.EXOTIC_GENERATORS
    for g in osc.exotic_box(1):
        m = g.q // 2
        rest = osc.mul(osc.inv(osc.power(s, m)), g)
        assert rest.q == 0 and rest.x % 2 == 0 and rest.y % 2 == 0
        x, y = int(rest.x) // 2, int(rest.y) // 2
        tail = osc.mul(osc.inv(osc.mul(osc.power(a, x), osc.power(b, y))), rest)
        assert tail.q == 0 and tail.x == 0 and tail.y == 0
        j = tail.z / c.z
        assert j.denominator == 1
        assert osc.mul(osc.mul(osc.power(s, m), osc.mul(osc.power(a, x), osc.power(b, y))),
                       osc.power(c, int(j))) == g
