# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

import pytest

from cactus_crystals.crystal import (
    Crystal,
    check_axioms,
    check_normal,
    component_isomorphism,
    components,
    disjoint_union,
    flat_label,
    generate_crystal,
    match_components,
    multiplicity_set,
    restrict,
    tensor,
    tensor_product,
)
from cactus_crystals.errors import CrystalError, NonNormalCrystal
from cactus_crystals.rootdata import build_root_system, weyl_dimension


@pytest.mark.parametrize('label,weight', [
    ('A1', (4,)), ('A2', (2, 1)), ('A3', (1, 0, 1)), ('B2', (1, 1)), ('G2', (1, 0)),
    ('C2', (0, 1)),
])
def test_sizes_and_axioms(label, weight):
    rs = build_root_system(label)
    crystal = generate_crystal(rs, weight)
    assert len(crystal) == weyl_dimension(rs, weight)
    assert check_axioms(crystal)
    assert crystal.highest_weight_elements() == [0]
    assert crystal.wt(0) == weight
    assert len(crystal.lowest_weight_elements()) == 1


def test_not_dominant(a2):
    with pytest.raises(CrystalError):
        generate_crystal(a2, (1, -1))


def test_a1_string(a1):
    crystal = generate_crystal(a1, (3,))
    chain = crystal.string(1, 0)
    assert len(chain) == 4
    assert [crystal.wt(b) for b in chain] == [(3,), (1,), (-1,), (-3,)]
    assert crystal.phi(1, 0) == 3 and crystal.epsilon(1, 0) == 0


def test_tensor_rule(a1):
    b = generate_crystal(a1, (1,))
    product = tensor(b, b)
    # (-, +) is the highest-weight element of the trivial component
    tops = {product.wt(top): top for top, _ in components(product)}
    assert set(tops) == {(2,), (0,)}
    assert tops[(0,)] == 1 * 2 + 0
    assert product.e(1, 1) == 0


@pytest.mark.parametrize('label,first,second', [
    ('A1', (1,), (2,)),
    ('A2', (1, 0), (0, 1)),
    ('A2', (1, 1), (1, 0)),
    ('B2', (0, 1), (0, 1)),
])
def test_tensor_is_normal(label, first, second):
    rs = build_root_system(label)
    product = tensor(generate_crystal(rs, first), generate_crystal(rs, second))
    assert len(product) == weyl_dimension(rs, first) * weyl_dimension(rs, second)
    assert check_normal(product)


def test_tensor_product_keys(a1):
    b = generate_crystal(a1, (1,))
    flat = tensor_product(b, b, b)
    assert len(flat) == 8
    assert flat.keys[5].factors == (1, 0, 1)
    assert flat_label([b, b, b], (1, 0, 1)) == 5
    assert flat.factors == (b, b, b)


def test_multiplicity_set(a1):
    b = generate_crystal(a1, (1,))
    flat = tensor_product(b, b, b)
    assert len(multiplicity_set(flat, (3,))) == 1
    assert len(multiplicity_set(flat, (1,))) == 2
    assert len(multiplicity_set(tensor_product(b, b, b, b), (0,))) == 2


def test_restrict(a2):
    crystal = generate_crystal(a2, (1, 1))
    part = restrict(crystal, {1})
    assert part.nodes == (1,)
    sizes = sorted(len(members) for _, members in components(part))
    assert sizes == [1, 2, 2, 3]


def test_component_isomorphism(a2):
    crystal = generate_crystal(a2, (1, 1))
    union = disjoint_union([crystal, generate_crystal(a2, (0, 0))])
    result = component_isomorphism(union, union)
    assert result
    assert all(result.data[b] == b for b in union.labels)
    assert not match_components(crystal, 0, generate_crystal(a2, (2, 0)), 0)


def test_non_normal(a1):
    # two highest-weight elements lower to the same element
    crystal = Crystal(a1, ['a', 'b', 'c'], [(1,), (1,), (-1,)],
                      {1: [None, None, 0]}, {1: [2, 2, None]})
    with pytest.raises(NonNormalCrystal):
        components(crystal)


def test_graph_and_json(a2):
    crystal = generate_crystal(a2, (1, 0))
    assert crystal.graph().number_of_edges() == 2
    data = crystal.to_json()
    assert data['root_system']['type'] == 'A2'
    assert len(data['elements']) == 3
    assert {edge['i'] for edge in data['edges']} == {1, 2}
