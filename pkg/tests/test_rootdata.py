# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

from fractions import Fraction

import pytest

from cactus_crystals.errors import RootDataError
from cactus_crystals.rootdata import (
    build_root_system,
    character,
    decompose_character,
    format_weight,
    longest_element,
    parse_weight,
    tensor_character,
    theta_involution,
    weyl_dimension,
)


@pytest.mark.parametrize('label,count', [
    ('A1', 1), ('A2', 3), ('A3', 6), ('B2', 4), ('C2', 4), ('G2', 6), ('D4', 12),
])
def test_positive_roots(label, count):
    rs = build_root_system(label)
    assert len(rs.positive_roots) == count
    assert rs.positive_roots[0].height == 1


def test_unknown_type():
    with pytest.raises(RootDataError):
        build_root_system('E8')


def test_parse_weight():
    assert parse_weight('1, 0,2') == (Fraction(1), Fraction(0), Fraction(2))
    assert format_weight(parse_weight('1/2,3')) == '1/2,3'
    with pytest.raises(RootDataError):
        parse_weight('1,x')


@pytest.mark.parametrize('label,weight,dim', [
    ('A1', (6,), 7),
    ('A2', (1, 1), 8),
    ('A2', (2, 0), 6),
    ('A2', (2, 2), 27),
    ('A3', (1, 0, 1), 15),
    ('A3', (0, 1, 0), 6),
    ('B2', (1, 0), 5),
    ('B2', (0, 1), 4),
    ('B2', (1, 1), 16),
    ('G2', (1, 0), 7),
])
def test_weyl_dimension(label, weight, dim):
    assert weyl_dimension(build_root_system(label), weight) == dim


def test_weyl_dimension_needs_dominant(a2):
    with pytest.raises(RootDataError):
        weyl_dimension(a2, (1, -1))


@pytest.mark.parametrize('label,length', [('A1', 1), ('A2', 3), ('A3', 6), ('B2', 4),
                                          ('G2', 6)])
def test_longest_element(label, length):
    rs = build_root_system(label)
    w0 = longest_element(rs, rs.nodes)
    assert len(w0) == length
    # w0 maps the dominant chamber to the antidominant one
    assert w0.act(rs, rs.rho) == tuple(-c for c in rs.rho)


def test_theta(a2):
    assert theta_involution(a2, {1, 2}) == {1: 2, 2: 1}
    assert theta_involution(a2, {1}) == {1: 1}
    b2 = build_root_system('B2')
    assert theta_involution(b2, {1, 2}) == {1: 1, 2: 2}


def test_character_adjoint(a2):
    char = character(a2, (1, 1))
    assert sum(char.values()) == 8
    assert char[(0, 0)] == 2
    assert char[(1, 1)] == 1


@pytest.mark.parametrize('label,weight', [('A2', (2, 1)), ('B2', (1, 1)), ('G2', (1, 0)),
                                          ('A3', (1, 0, 1))])
def test_character_dimension(label, weight):
    rs = build_root_system(label)
    assert sum(character(rs, weight).values()) == weyl_dimension(rs, weight)


def test_decompose_tensor(a2):
    product = tensor_character(a2, character(a2, (1, 0)), character(a2, (0, 1)))
    assert dict(decompose_character(a2, product)) == {(1, 1): 1, (0, 0): 1}
    square = tensor_character(a2, character(a2, (1, 0)), character(a2, (1, 0)))
    assert dict(decompose_character(a2, square)) == {(2, 0): 1, (0, 1): 1}


def test_inner_product_symmetric():
    rs = build_root_system('B2')
    lam, mu = parse_weight('1,2'), parse_weight('3,1')
    assert rs.inner(lam, mu) == rs.inner(mu, lam)


def test_parabolic(a2):
    sub = a2.parabolic({2})
    assert sub.nodes == (2,)
    assert sub.cartan == ((2,),)
    assert a2.connected({1, 2})
    assert len(a2.connected_subsets()) == 3
