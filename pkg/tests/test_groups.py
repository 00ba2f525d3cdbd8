import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covertorelli.errors import GroupMismatch
from covertorelli.groups import (
    AbelianGroup,
    direct_sum_check,
    enumerate_characters,
    eval_character,
    order_of_element,
    subgroup_order,
)

groups = st.lists(st.integers(2, 6), min_size=1, max_size=3).map(lambda ds: AbelianGroup(tuple(ds)))


@st.composite
def group_with_two_elements(draw):
    G = draw(groups)
    pick = st.tuples(*[st.integers(0, m - 1) for m in G.elementary_divisors])
    return G, G.element(draw(pick)), G.element(draw(pick))


def test_character_count_and_trivial_first():
    G = AbelianGroup((2, 2))
    chars = enumerate_characters(G)
    assert len(chars) == 4
    assert chars[0].is_trivial()
    assert [c.exponents for c in chars] == [(0, 0), (0, 1), (1, 0), (1, 1)]


@settings(max_examples=40, deadline=None)
@given(group_with_two_elements())
def test_characters_are_homomorphisms(data):
    G, g, h = data
    m = G.order
    for chi in enumerate_characters(G):
        assert eval_character(chi, g + h) == (chi(g) + chi(h)) % m
    chis = enumerate_characters(G)
    for chi in chis[:4]:
        for phi in chis[:4]:
            assert (chi * phi)(g) == (chi(g) + phi(g)) % m


@settings(max_examples=30, deadline=None)
@given(groups)
def test_orthogonality_numerically(G):
    # sum_g chi(g) = |G| for trivial chi, 0 otherwise; evaluated with complex roots
    m = G.order
    elems = G.elements()
    for chi in enumerate_characters(G):
        total = sum(cmath.exp(2j * cmath.pi * chi(g) / m) for g in elems)
        expected = len(elems) if chi.is_trivial() else 0
        assert abs(total - expected) < 1e-9


@settings(max_examples=30, deadline=None)
@given(groups)
def test_characters_separate_points(G):
    chars = enumerate_characters(G)
    for g in G.elements():
        assert all(chi(g) == 0 for chi in chars) == g.is_identity()


def test_element_orders():
    G = AbelianGroup((4, 6))
    assert order_of_element(G.element((2, 3))) == 2
    assert order_of_element(G.element((1, 1))) == 12
    assert order_of_element(G.identity()) == 1


def test_subgroup_and_direct_sum():
    G = AbelianGroup((2, 2))
    a, b, c = G.element((1, 0)), G.element((0, 1)), G.element((1, 1))
    assert subgroup_order([a]) == 2
    assert subgroup_order([a, b]) == 4
    assert direct_sum_check([a, b]) and direct_sum_check([a, c]) and direct_sum_check([b, c])
    assert not direct_sum_check([a, b, c])
    Z3 = AbelianGroup((3,))
    g = Z3.element((1,))
    assert not direct_sum_check([g, g])


def test_mismatched_groups_rejected():
    G, H = AbelianGroup((2,)), AbelianGroup((3,))
    with pytest.raises(GroupMismatch):
        eval_character(G.character((1,)), H.element((1,)))
    with pytest.raises(GroupMismatch):
        G.character((1,)) * H.character((1,))


def test_inverse_character():
    G = AbelianGroup((3, 4))
    chi = G.character((1, 3))
    assert chi.inverse().exponents == (2, 1)
    assert (chi * chi.inverse()).is_trivial()
