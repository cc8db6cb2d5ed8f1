# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

import numpy as np
import pytest

from cactus_crystals.errors import RepresentationError
from cactus_crystals.representations import (
    TensorSpace,
    build_irrep,
    casimir_value,
    embed,
    irrep_by_projection,
    parse_highest_weight,
    root_system_of,
    weyl_lift,
)
from cactus_crystals.rootdata import WeylWord, longest_element


@pytest.mark.parametrize('tag,highest,dim', [
    ('sl2', (0,), 1), ('sl2', (3,), 4), ('sl3', (1, 0), 3), ('sl3', (0, 1), 3),
    ('sl3', (1, 1), 8), ('sl3', (2, 1), 15),
])
def test_irrep_dimensions(tag, highest, dim):
    irrep = build_irrep(tag, highest)
    assert irrep.dim == dim
    for i in irrep.rs.nodes:
        assert np.allclose(irrep.f[i], irrep.e[i].T)


def test_parse_highest_weight():
    assert parse_highest_weight('sl2', '2') == (2,)
    assert parse_highest_weight('sl3', '1,1') == (1, 1)
    with pytest.raises(RepresentationError):
        parse_highest_weight('sl3', '1')
    with pytest.raises(RepresentationError):
        root_system_of('sl4')


@pytest.mark.parametrize('tag,highest', [('sl2', (1,)), ('sl2', (4,)), ('sl3', (1, 0)),
                                         ('sl3', (1, 1)), ('sl3', (2, 0))])
def test_casimir(tag, highest):
    space = TensorSpace([build_irrep(tag, highest)])
    value = casimir_value(space.rs, highest)
    assert np.allclose(space.casimir(), value * np.eye(space.dim))


def test_casimir_conventions():
    rs = root_system_of('sl2')
    assert casimir_value(rs, (1,)) == pytest.approx(1.5)
    assert casimir_value(rs, (2,)) == pytest.approx(4.0)
    assert casimir_value(rs, (0,)) == pytest.approx(0.0)


def test_omega_spectrum():
    v = build_irrep('sl2', (1,))
    space = TensorSpace([v, v])
    eigenvalues = np.linalg.eigvalsh(space.omega(0, 1))
    assert np.allclose(sorted(eigenvalues), [-1.5, 0.5, 0.5, 0.5])
    assert np.allclose(space.omega(0, 1), space.omega(1, 0))


def test_blocks_and_decomposition():
    v = build_irrep('sl2', (1,))
    space = TensorSpace([v, v, v])
    assert space.decomposition() == {(3,): 1, (1,): 2}
    assert space.weight_block((1,)).shape == (8, 3)
    singular = space.singular_block((1,))
    assert singular.shape == (8, 2)
    assert np.allclose(singular.T @ singular, np.eye(2))
    assert np.allclose(space.delta('e', 1) @ singular, 0)


def test_projection_agrees():
    for tag, highest in (('sl2', (2,)), ('sl3', (1, 1))):
        model = build_irrep(tag, highest)
        other = irrep_by_projection(tag, highest)
        assert other.dim == model.dim
        assert sorted(other.weights) == sorted(model.weights)


def test_reversal():
    v, w = build_irrep('sl2', (1,)), build_irrep('sl2', (2,))
    space = TensorSpace([v, w])
    swap = space.reversal()
    x, y = np.arange(2.0), np.arange(3.0) + 1
    assert np.allclose(swap @ np.kron(x, y), np.kron(y, x))
    assert np.allclose(swap.T @ swap, np.eye(6))


def test_intertwiner():
    v = build_irrep('sl2', (1,))
    space = TensorSpace([v, v])
    top = space.singular_block((2,))[:, 0]
    t = space.intertwiner(build_irrep('sl2', (2,)), top)
    assert t.shape == (4, 3)
    assert np.allclose(t.T @ t, np.eye(3))
    target = build_irrep('sl2', (2,))
    assert np.allclose(space.delta('f', 1) @ t, t @ target.f[1])


def test_weyl_lift_maps_weights():
    irrep = build_irrep('sl3', (1, 0))
    rs = irrep.rs
    n0 = weyl_lift(irrep, longest_element(rs, rs.nodes))
    assert np.allclose(n0.T @ n0, np.eye(3))
    space = TensorSpace([irrep])
    h = [space.delta('h', i) for i in rs.nodes]
    top = np.eye(3)[:, irrep.weights.index((1, 0))]
    image = n0 @ top
    assert [float(image @ x @ image) for x in h] == pytest.approx([0.0, -1.0])
    assert np.allclose(weyl_lift(irrep, WeylWord()), np.eye(3))


def test_embed():
    v = build_irrep('sl2', (1,))
    outer = TensorSpace([build_irrep('sl2', (2,)), v])
    inner = TensorSpace([v, v])
    inner_map = inner.intertwiner(build_irrep('sl2', (2,)), inner.singular_block((2,))[:, 0])
    vector = np.kron(np.eye(3)[:, 0], np.eye(2)[:, 1])
    grown = embed(outer, 0, inner_map, vector)
    assert grown.shape == (8,)
    assert np.isclose(np.linalg.norm(grown), 1.0)
