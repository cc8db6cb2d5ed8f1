# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

import numpy as np
import pytest

from cactus_crystals.errors import FamilyError, WallError
from cactus_crystals.families import (
    dynamical_hamiltonians,
    gaudin_hamiltonians,
    shift_of_argument_family,
    single_site_family,
)
from cactus_crystals.representations import TensorSpace, build_irrep


def _space(tag, *highest):
    return TensorSpace([build_irrep(tag, h) for h in highest])


@pytest.mark.parametrize('tag,highest,z,chi', [
    ('sl2', [(1,), (1,), (1,)], (0.0, 1.0, 3.0), None),
    ('sl2', [(1,), (2,), (1,)], (0.0, 0.7, 2.0), (1.0,)),
    ('sl3', [(1, 0), (1, 0), (0, 1)], (0.0, 1.0, 2.5), (1.0, 2.0)),
])
def test_gaudin_commute(tag, highest, z, chi):
    family = gaudin_hamiltonians(_space(tag, *highest), z, chi)
    assert family.check_commuting(1e-8) <= 1e-8
    family.check_symmetric()
    assert family.names[-3:] == ['H1', 'H2', 'H3']


def test_gaudin_sum_is_cartan():
    space = _space('sl2', (1,), (1,))
    family = gaudin_hamiltonians(space, (0.0, 1.0), (2.0,))
    total = family.generators[-1] + family.generators[-2]
    assert np.allclose(total, space.cartan((2.0,)))


def test_gaudin_two_points():
    space = _space('sl2', (1,), (1,))
    family = gaudin_hamiltonians(space, (0.0, 2.0))
    h1 = family.generators[family.names.index('H1')]
    assert np.allclose(h1, space.omega(0, 1) / -2.0)


def test_gaudin_errors():
    space = _space('sl2', (1,), (1,))
    with pytest.raises(FamilyError):
        gaudin_hamiltonians(space, (1.0, 1.0))
    with pytest.raises(FamilyError):
        gaudin_hamiltonians(space, (0.0, 1.0, 2.0))


def test_dynamical_commute():
    space = _space('sl2', (1,), (1,), (1,))
    family = dynamical_hamiltonians(space, (0.0, 1.0, 2.0), (1.0,))
    assert 'G1' in family.names
    assert family.check_commuting(1e-8) <= 1e-8
    space = _space('sl3', (1, 0), (0, 1))
    family = dynamical_hamiltonians(space, (0.0, 1.5), (1.0, 3.0))
    assert family.check_commuting(1e-8) <= 1e-8


@pytest.mark.parametrize('highest,chi', [((1, 1), (1.0, 1.0)), ((2, 1), (1.0, 3.0)),
                                         ((1, 0), (2.0, 3.0))])
def test_shift_of_argument(highest, chi):
    space = _space('sl3', highest)
    family = shift_of_argument_family(space, chi)
    assert family.names == ['h1', 'h2', 'G1', 'G2']
    assert family.check_commuting(1e-8) <= 1e-8


def test_wall():
    space = _space('sl3', (1, 1))
    with pytest.raises(WallError):
        shift_of_argument_family(space, (1.0, 2.0))
    family = shift_of_argument_family(space, (1.0, 2.0), node=1)
    assert family.params['wall'] == 1
    assert family.check_commuting(1e-8) <= 1e-8


def test_wall_family_is_limit():
    space = _space('sl3', (1, 1))
    near = shift_of_argument_family(space, (1.0, 2.0 + 1e-7), node=1)
    at = shift_of_argument_family(space, (1.0, 2.0), node=1)
    for a, b in zip(near.generators, at.generators):
        assert np.allclose(a, b, atol=1e-5)


def test_single_site():
    space = _space('sl2', (1,), (2,))
    family = single_site_family(space, (1.0,))
    assert len(family) == 4
    assert family.check_commuting(1e-8) <= 1e-8


def test_non_commuting_family_is_rejected():
    space = _space('sl2', (1,))
    family = shift_of_argument_family(space, (1.0,))
    family.generators.append(space.delta('e', 1) + space.delta('f', 1))
    with pytest.raises(FamilyError):
        family.check_commuting(1e-8)
