# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

import pytest

from cactus_crystals.cactus import (
    check_braid_relations,
    check_external_formula,
    check_hexagon,
    check_morphism,
    check_multiplicity_preserved,
    check_relations,
    check_symmetry,
    check_weight_determined,
    commutor,
    external_cactus_action,
    external_relations,
    flip_commutor,
    generator_action,
    internal_cactus_action,
    internal_relations,
    iterated_commutor_action,
    parse_word,
    partial_schutzenberger,
    schutzenberger,
    string_reflection,
)
from cactus_crystals.crystal import generate_crystal, tensor_product
from cactus_crystals.errors import CactusWordError
from cactus_crystals.rootdata import build_root_system, longest_element


@pytest.mark.parametrize('label,weight', [
    ('A1', (3,)), ('A2', (1, 1)), ('A2', (2, 1)), ('A3', (1, 0, 1)), ('B2', (1, 1)),
    ('G2', (1, 0)),
])
def test_schutzenberger(label, weight):
    rs = build_root_system(label)
    crystal = generate_crystal(rs, weight)
    xi = schutzenberger(crystal)
    w0 = longest_element(rs, rs.nodes)
    assert all(xi(xi(b)) == b for b in crystal.labels)
    assert all(crystal.wt(xi(b)) == w0.act(rs, crystal.wt(b)) for b in crystal.labels)
    assert xi(0) == crystal.lowest_weight_elements()[0]


def test_schutzenberger_a1(a1):
    crystal = generate_crystal(a1, (2,))
    assert schutzenberger(crystal).mapping == tuple(reversed(crystal.string(1, 0)))


def test_partial_is_string_reflection(a2):
    crystal = generate_crystal(a2, (2, 1))
    for i in (1, 2):
        assert partial_schutzenberger(crystal, {i}).mapping == \
            string_reflection(crystal, i).mapping


def test_commutor(a1):
    b1, b2 = generate_crystal(a1, (1,)), generate_crystal(a1, (2,))
    sigma = commutor(b1, b2)
    assert check_morphism(sigma)
    assert check_symmetry(b1, b2)
    # multiplicity free on equal factors: the commutor is the identity
    same = commutor(b1, b1)
    assert same.is_identity()


def test_flip_is_not_a_morphism(a1):
    b = generate_crystal(a1, (1,))
    assert flip_commutor(b, b).flags['morphism'] is False


def test_parse_word(a2):
    word = parse_word('s12 s1', 'internal', a2)
    assert word.letters == (frozenset({1, 2}), frozenset({1}))
    assert str(word) == 's12 s1'
    assert len(parse_word('s1 s1', 'internal', a2)) == 0
    assert parse_word('sI', 'internal', a2).letters == (frozenset({1, 2}),)
    assert parse_word('s13*s_1_2', 'external', n=3).letters == ((1, 3), (1, 2))
    assert str(parse_word('e', 'external', n=3)) == 'e'


@pytest.mark.parametrize('text,flavor,n', [
    ('s14', 'external', 3),
    ('s21', 'external', 3),
    ('t12', 'internal', None),
    ('s13', 'internal', None),
])
def test_parse_word_errors(a2, text, flavor, n):
    with pytest.raises(CactusWordError):
        parse_word(text, flavor, a2 if flavor == 'internal' else None, n)


def test_internal_action_covers_w0(a2):
    crystal = generate_crystal(a2, (1, 1))
    perm = internal_cactus_action(parse_word('sI', 'internal', a2), crystal)
    assert perm.mapping == schutzenberger(crystal).mapping
    assert len(perm.flags['weyl_word']) == 3


@pytest.mark.parametrize('label,weights', [
    ('A2', [(1, 0), (1, 1), (2, 1)]),
    ('A3', [(1, 0, 0), (1, 0, 1)]),
    ('B2', [(1, 0), (0, 1), (1, 1)]),
])
def test_internal_relations(label, weights):
    rs = build_root_system(label)
    for weight in weights:
        crystal = generate_crystal(rs, weight)
        checked = check_relations(internal_relations(rs),
                                  lambda word: internal_cactus_action(word, crystal))
        assert checked, checked.witness


@pytest.mark.parametrize('label,weight,n', [('A1', (1,), 3), ('A1', (1,), 4),
                                            ('A2', (1, 0), 3)])
def test_external_relations(label, weight, n):
    factor = generate_crystal(build_root_system(label), weight)
    checked = check_relations(external_relations(n),
                              lambda word: external_cactus_action(word, [factor] * n))
    assert checked, checked.witness


def test_relation_counts():
    # involutions for each of the 3 intervals, conjugations s13 s12, s13 s23
    assert len(external_relations(3)) == 5
    assert len(internal_relations(build_root_system('A1'))) == 1


def test_external_formula(a1, a2):
    assert check_external_formula([generate_crystal(a1, (1,))] * 4)
    assert check_external_formula([generate_crystal(a2, (1, 0))] * 3)
    mixed = [generate_crystal(a1, (1,)), generate_crystal(a1, (2,)), generate_crystal(a1, (1,))]
    assert check_external_formula(mixed)


def test_generator_action(a1):
    b = generate_crystal(a1, (1,))
    action = generator_action([b, b], 1, 2)
    assert action.is_identity()
    assert iterated_commutor_action([b, b, b], 1, 3).mapping == \
        generator_action([b, b, b], 1, 3).mapping
    with pytest.raises(CactusWordError):
        generator_action([b, b], 2, 3)


def test_s13_preserves_multiplicity_sets(a1):
    result = check_multiplicity_preserved(generate_crystal(a1, (1,)), 3, (1,))
    assert result
    assert len(result.data) == 2


def test_hexagon(a1, a2):
    b = generate_crystal(a1, (1,))
    assert check_hexagon(b, b, b)
    assert not check_hexagon(b, b, b, commutor=flip_commutor)
    triple = [generate_crystal(a2, w) for w in ((1, 0), (0, 1), (1, 0))]
    assert check_hexagon(*triple)


def test_braid_relations():
    for label, weight in (('A2', (1, 1)), ('B2', (1, 0)), ('A2', (2, 1))):
        assert check_braid_relations(generate_crystal(build_root_system(label), weight))


def test_weight_determined(a2):
    assert check_weight_determined(generate_crystal(a2, (1, 0)))
    assert not check_weight_determined(generate_crystal(a2, (1, 1)))


def test_s12_on_multiplicity_set(a1):
    # s12 and s23 fix both highest-weight elements of weight 1 in B(1)^3
    b = generate_crystal(a1, (1,))
    flat = tensor_product(b, b, b)
    tops = [x for x in flat.labels if flat.is_highest(x) and flat.wt(x) == (1,)]
    for p, q in ((1, 2), (2, 3)):
        action = generator_action([b, b, b], p, q)
        assert all(action(x) == x for x in tops)
    s13 = generator_action([b, b, b], 1, 3)
    assert {s13(x) for x in tops} == set(tops)
