import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from starcore.errors import UsageError
from starcore.ideals import QuotientRing
from starcore.oracle import (
    cross_check,
    default_dmax,
    macaulay_piece,
    monomials_of_degree,
    oracle_equal_up_to,
    oracle_member,
    random_instance,
    row_reduce,
)

HAND_JJI = ["x^9", "x^5*y^4", "x^5*z^2", "x^4*y^7", "y^11", "y^7*z^2", "x^4*z^8", "y^4*z^8", "z^10"]


@pytest.fixture
def xy():
    return QuotientRing("xy", 7)


def test_trivial_membership(xy):
    assert oracle_member("x^2*y", xy.ideal("x^2"))
    assert not oracle_member("y", xy.ideal("x"))


def test_trivial_equality(xy):
    assert oracle_equal_up_to(xy.ideal("x", "y"), xy.ideal("y", "x + y"), 4)
    assert not oracle_equal_up_to(xy.ideal("x"), xy.ideal("x^2"), 2)


def test_decic_product(decic7):
    J = decic7.ideal("x^5", "y^7", "z^8")
    I = J + decic7.ideal("x*y^3*z^6")
    JJI = J * J.colon(I)
    assert oracle_member("x^5*z^2", JJI) and JJI.contains("x^5*z^2")
    assert oracle_equal_up_to(JJI, decic7.ideal(*HAND_JJI), 16)


def test_relations_are_included(cubic7):
    assert oracle_member("x^3", cubic7.ideal("y", "z"))


def test_non_homogeneous_rejected(xy):
    with pytest.raises(UsageError):
        oracle_member("x + y^2", xy.ideal("x"))
    with pytest.raises(UsageError):
        oracle_equal_up_to(xy.ideal("x + y^2"), xy.ideal("x"), 3)
    with pytest.raises(UsageError):
        oracle_member("x^3", xy.ideal("x"), d_max=2)


def test_default_dmax(cubic7):
    a = cubic7.ideal("x^2", "y")
    assert default_dmax(a) == 4 + 3
    assert default_dmax(a, f=cubic7("x^9")) == 9 + 3


def test_piece_rank_bound(cubic7):
    for d in range(6):
        piece = macaulay_piece(cubic7.ideal("x^2", "y*z"), d)
        assert piece.rank <= len(monomials_of_degree(3, d))


@given(st.lists(st.lists(st.integers(0, 6), min_size=4, max_size=4), min_size=1, max_size=5))
def test_row_reduce_is_idempotent(rows):
    m = row_reduce(np.array(rows), 7)
    assert np.array_equal(row_reduce(m, 7), m)
    assert m.shape[0] <= min(len(rows), 4)


def test_random_instance_shape():
    inst = random_instance(random.Random(3))
    assert inst["ring"].p in (3, 7) and inst["query"].is_homogeneous()


def test_cross_check_small():
    assert cross_check(40, seed=11) == []
