import random

import pytest
from hypothesis import given, strategies as st

from starcore.errors import UnsupportedError, UsageError
from starcore.ideals import (
    QuotientRing,
    bracket_power,
    graded_min_gens,
    ideal_colon,
    ideal_contains,
    ideal_equal,
    ideal_intersect,
    ideal_power,
    ideal_product,
    ideal_sum,
    intersect_all,
)
from starcore.polyring import format_poly


def strs(polys):
    return [format_poly(g) for g in polys]


def test_sum_examples(quintic7):
    R = quintic7
    I = ideal_sum(R.ideal("y", "z"), R.ideal("x^2"))
    assert I.equals(R.ideal("x^2", "y", "z"))
    A = R.ideal("x*y", "z^2")
    assert ideal_sum(A, R.zero()).equals(A)
    assert ideal_sum(A, R.unit()).is_unit()


def test_product_examples(decic7):
    F = QuotientRing("xy", 7)
    assert ideal_product(F.ideal("x"), F.ideal("y")).equals(F.ideal("x*y"))
    R = decic7
    J = R.ideal("x^5", "y^7", "z^8")
    I = J + R.ideal("x*y^3*z^6")
    assert ideal_contains(ideal_product(J, ideal_colon(J, I)), R("x^5*z^2"))
    A = R.ideal("x^2", "y*z")
    assert ideal_product(A, R.unit()).equals(A)


def test_bracket_examples(cubic7):
    F = QuotientRing("xy", 3)
    assert bracket_power(F.ideal("x", "y^2"), 3).equals(F.ideal("x^3", "y^6"))
    A = F.ideal("x+y")
    assert bracket_power(A, 1) is A
    J7 = bracket_power(cubic7.ideal("y", "z"), 7)
    assert J7.equals(cubic7.ideal("y^7", "z^7"))
    # the relation stays a generator, it is not replaced by its 7th power
    assert J7.contains(cubic7("x^3 + y^3 + z^3"))
    with pytest.raises(UsageError):
        bracket_power(F.ideal("x"), 6)


def test_intersection_examples(xyz7):
    F = QuotientRing("xy", 7)
    assert ideal_intersect(F.ideal("x"), F.ideal("y")).equals(F.ideal("x*y"))
    A = F.ideal("x^2", "x*y + y^3")
    assert ideal_intersect(A, A).equals(A)
    family = [xyz7.ideal(f"x + {a}*y*z") for a in range(1, 7)]
    assert intersect_all(family).equals(xyz7.ideal("x^2", "y^2*z^2", "x*y*z"))


def test_colon_examples(xyz7, decic7):
    R = xyz7
    I = R.ideal("x", "y*z")
    # as computed, ((x + yz) : I) is I itself; J(J : I) is the ideal (x^2, y^2 z^2)
    J = R.ideal("x + y*z")
    assert ideal_colon(J, I).equals(I)
    assert ideal_product(J, ideal_colon(J, I)).equals(R.ideal("x^2", "y^2*z^2"))
    D = decic7
    J = D.ideal("x^5", "y^7", "z^8")
    assert ideal_colon(J, J + D.ideal("x*y^3*z^6")).equals(D.ideal("x^4", "y^4", "z^2"))
    A = D.ideal("x^2", "y*z")
    assert ideal_colon(A, A).is_unit()


def test_colon_by_zero(cubic7):
    A = cubic7.ideal("x")
    with pytest.raises(UsageError):
        ideal_colon(A, cubic7.zero())
    # generators that vanish in R give the whole ring
    assert ideal_colon(A, cubic7.ideal("x^3 + y^3 + z^3")).is_unit()


def test_contains_and_equal(decic7):
    D = decic7
    J = D.ideal("x^5", "y^7", "z^8")
    JJI = J * ideal_colon(J, J + D.ideal("x*y^3*z^6"))
    assert ideal_contains(JJI, D("x^5*z^2"))
    assert not ideal_contains(JJI, D("z^2*x*y^3*z^6"))
    assert ideal_contains(JJI, D.poly_ring.zero())
    F = QuotientRing("xy", 7)
    assert ideal_equal(F.ideal("x", "y"), F.ideal("y", "x+y"))
    assert not ideal_equal(F.ideal("x"), F.ideal("x^2"))


def test_powers(cubic7):
    F = QuotientRing("xy", 7)
    assert ideal_power(F.ideal("x", "y"), 2).equals(F.ideal("x^2", "x*y", "y^2"))
    assert ideal_power(F.ideal("x"), 0).is_unit()
    with pytest.raises(UsageError):
        ideal_power(F.ideal("x"), -1)
    J = cubic7.ideal("y", "z")
    I = J + cubic7.ideal("x^2")
    assert ideal_power(I, 2).equals(J * I)


def test_graded_min_gens():
    F = QuotientRing("xyz", 7)
    assert strs(graded_min_gens(F.ideal("x", "y", "x^2 + x*y"))) == ["x", "y"]
    assert strs(graded_min_gens(F.ideal("x^5", "y^7", "z^8"))) == ["x^5", "y^7", "z^8"]
    assert len(graded_min_gens(F.maximal() ** 2)) == 6
    with pytest.raises(UnsupportedError):
        graded_min_gens(F.ideal("x + 1"))


def test_relation_inside_ideal(cubic7):
    # ideals of R carry the relations among their ambient generators
    assert cubic7.ideal("x").contains(cubic7("y^3 + z^3"))
    assert cubic7.zero().contains(cubic7("x^3 + y^3 + z^3"))
    assert cubic7.ideal("x^3 + y^3 + z^3").is_zero()


def test_ring_mismatch(cubic7, quintic7):
    with pytest.raises(UsageError):
        cubic7.ideal("x") + quintic7.ideal("x")


def test_reserved_variable():
    with pytest.raises(UsageError):
        QuotientRing(["_t", "x"], 7)


def test_localize(cubic7):
    R = cubic7
    # (y + x^2 - x^3, z) has extra points away from the origin; locally it equals (y + x^2, z)
    A = R.ideal("y + x^2", "z") & R.ideal("y", "z")
    L = A.localize()
    assert L.contains(A)
    assert R.ideal("x", "y", "z").localize() is not None


# ---------------------------------------------------------------------------
# identities on random ideals


def random_ideal(rng, R, count=None, deg=3):
    gens = []
    for _ in range(count or rng.randint(1, 3)):
        terms = {}
        for _ in range(rng.randint(1, 2)):
            e = tuple(rng.randint(0, deg) for _ in range(R.poly_ring.nvars))
            terms[e] = rng.randrange(1, R.p)
        gens.append(R.poly_ring.from_dict(terms))
    return R.ideal(gens)


AMB = QuotientRing("xyz", 3)
AMB2 = QuotientRing("xy", 3)


@given(st.integers(0, 10**6))
def test_colon_adjunction(seed):
    rng = random.Random(seed)
    A, B = random_ideal(rng, AMB), random_ideal(rng, AMB)
    if B.is_zero():
        return
    C = A.colon(B)
    assert A.contains(B * C)
    assert C.contains(A)


@given(st.integers(0, 10**6))
def test_intersection_bounds(seed):
    rng = random.Random(seed)
    A, B = random_ideal(rng, AMB), random_ideal(rng, AMB)
    C = A & B
    assert A.contains(C) and B.contains(C)
    assert C.contains(A * B)
    big = A + B
    assert ((big & B) + B).equals(B)


@given(st.integers(0, 10**6))
def test_modular_law_monomial(seed):
    # A <= C implies A + (B & C) = (A + B) & C
    rng = random.Random(seed)
    mono = lambda: AMB.ideal([AMB.poly_ring.monomial(tuple(rng.randint(0, 3) for _ in range(3)))
                              for _ in range(rng.randint(1, 3))])
    A0, B, C = mono(), mono(), mono()
    A = A0 * C
    assert (A + (B & C)).equals((A + B) & C)


@given(st.integers(0, 10**6), st.sampled_from([3, 9]))
def test_frobenius_flatness(seed, q):
    rng = random.Random(seed)
    R = AMB if q == 3 else AMB2
    A, B = random_ideal(rng, R, deg=2), random_ideal(rng, R, deg=2)
    assert (A & B).bracket(q).equals(A.bracket(q) & B.bracket(q))
    f = random_ideal(rng, R, 1, deg=2).user_gens[0]
    assert A.colon(f).bracket(q).equals(A.bracket(q).colon(f.frobenius_power(q)))
