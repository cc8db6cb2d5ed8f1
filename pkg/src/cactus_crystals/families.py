# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Quadratic Gaudin and shift of argument families.

from dataclasses import dataclass, field
import itertools
import logging

import numpy as np

from cactus_crystals.errors import FamilyError, WallError
from cactus_crystals.moduli import root_value

log = logging.getLogger(__name__)


@dataclass
class OperatorFamily:
    """Commuting symmetric matrices on a tensor space"""
    space: object
    generators: list
    names: list
    params: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.generators)

    def restricted(self, block):
        return [block.T @ a @ block for a in self.generators]

    def commutator_defect(self):
        """Largest relative Frobenius norm of [A, B] over generator pairs"""
        worst = 0.0
        for a, b in itertools.combinations(self.generators, 2):
            scale = np.linalg.norm(a) * np.linalg.norm(b)
            if scale == 0:
                continue
            worst = max(worst, np.linalg.norm(a @ b - b @ a) / scale)
        return worst

    def check_commuting(self, tol):
        defect = self.commutator_defect()
        if defect > tol:
            raise FamilyError(f"Family {self.params} does not commute: defect {defect:.3g}")
        return defect

    def check_symmetric(self, tol=1e-12):
        for name, a in zip(self.names, self.generators):
            if np.abs(a - a.T).max() > tol * max(1.0, np.abs(a).max()):
                raise FamilyError(f"Generator {name} is not symmetric")


def _check_points(z):
    if len(set(z)) != len(z):
        raise FamilyError(f"Marked points must be distinct: {list(z)}")


def _cartan_generators(space):
    return ([space.delta('h', i) for i in space.rs.nodes],
            [f"h{i}" for i in space.rs.nodes])


def gaudin_hamiltonians(space, z, chi=None):
    """H_i = sum_j Omega^{(ij)}/(z_i - z_j) + chi^{(i)} together with Delta(h)"""
    z = [float(x) for x in z]
    if len(z) != len(space):
        raise FamilyError(f"{len(z)} points for {len(space)} tensor factors")
    _check_points(z)
    rs = space.rs
    chi = tuple(chi) if chi is not None else (0.0,) * rs.rank
    generators, names = _cartan_generators(space)
    hamiltonians = []
    for i in range(len(space)):
        total = np.zeros((space.dim, space.dim))
        for j in range(len(space)):
            if j != i:
                total += space.omega(i, j) / (z[i] - z[j])
        if any(chi):
            total += sum(c * space.site('h', node, i) for c, node in zip(chi, rs.nodes))
        hamiltonians.append(total)
    if len(space) > 1:
        expected = space.cartan(chi) if any(chi) else 0
        if np.abs(sum(hamiltonians) - expected).max() > 1e-9 * max(
                1.0, max(np.abs(h).max() for h in hamiltonians)):
            raise FamilyError("Gaudin Hamiltonians do not sum to Delta(chi)")
        generators.extend(hamiltonians)
        names.extend(f"H{i + 1}" for i in range(len(space)))
    return OperatorFamily(space, generators, names, {'z': z, 'chi': list(chi)})


def _coweight_basis(rs):
    return [tuple(1.0 if b == a else 0.0 for b in range(rs.rank)) for a in range(rs.rank)]


def _root_terms(space, h, chi, skip=None):
    """sum over alpha of alpha(h)/alpha(chi) Delta(e_alpha) Delta(f_alpha)"""
    rs = space.rs
    total = np.zeros((space.dim, space.dim))
    for root in rs.positive_roots:
        if root.coeffs == skip:
            continue
        top = root_value(rs, h, root.coeffs)
        if not top:
            continue
        bottom = root_value(rs, chi, root.coeffs)
        if abs(bottom) < 1e-12:
            raise WallError(f"chi={list(chi)} lies on the wall of root {root.coeffs}")
        total += (top / bottom) * (space.delta('E', root.coeffs) @ space.delta('F', root.coeffs))
    return total


def dynamical_hamiltonians(space, z, chi):
    """G_h = sum_i z_i h^{(i)} + sum_alpha alpha(h)/alpha(chi) Delta(e_alpha f_alpha)

    One generator per simple coroot h, added to the Gaudin family at (z, chi).
    """
    family = gaudin_hamiltonians(space, z, chi)
    rs = space.rs
    for a, h in enumerate(_coweight_basis(rs)):
        node = rs.nodes[a]
        total = _root_terms(space, h, chi)
        for site, zi in enumerate(family.params['z']):
            if zi:
                total += zi * space.site('h', node, site)
        family.generators.append(total)
        family.names.append(f"G{node}")
    return family


def shift_of_argument_family(space, chi, node=None):
    """Quadratic part of A_chi acting through the coproduct

    With node=i the family is rescaled so that it stays finite on the wall
    alpha_i(chi) = 0: it holds G_{h'} for h' in the kernel of alpha_i and
    alpha_i(chi) G_{h_i}.
    """
    rs = space.rs
    chi = tuple(float(c) for c in chi)
    generators, names = _cartan_generators(space)
    if node is None:
        for a, h in enumerate(_coweight_basis(rs)):
            generators.append(_root_terms(space, h, chi))
            names.append(f"G{rs.nodes[a]}")
        return OperatorFamily(space, generators, names, {'chi': list(chi)})
    pos = rs.pos(node)
    simple = tuple(1 if b == pos else 0 for b in range(rs.rank))
    for h in _kernel_basis(rs, simple):
        generators.append(_root_terms(space, h, chi, skip=simple))
        names.append(f"G'{list(h)}")
    value = root_value(rs, chi, simple)
    total = np.zeros((space.dim, space.dim))
    hi = tuple(1.0 if b == pos else 0.0 for b in range(rs.rank))
    for root in rs.positive_roots:
        top = root_value(rs, hi, root.coeffs)
        if not top:
            continue
        if root.coeffs == simple:
            coeff = top
        else:
            bottom = root_value(rs, chi, root.coeffs)
            if abs(bottom) < 1e-12:
                raise WallError(f"chi={list(chi)} lies on the wall of root {root.coeffs}")
            coeff = top * value / bottom
        total += coeff * (space.delta('E', root.coeffs) @ space.delta('F', root.coeffs))
    generators.append(total)
    names.append(f"C{node}")
    return OperatorFamily(space, generators, names, {'chi': list(chi), 'wall': node})


def _kernel_basis(rs, coeffs):
    """Basis of {h : alpha(h) = 0} in simple coroot coordinates"""
    values = [root_value(rs, tuple(1.0 if b == a else 0.0 for b in range(rs.rank)), coeffs)
              for a in range(rs.rank)]
    pivot = next(a for a, v in enumerate(values) if v)
    basis = []
    for a in range(rs.rank):
        if a == pivot:
            continue
        h = [0.0] * rs.rank
        h[a] = 1.0
        h[pivot] = -values[a] / values[pivot]
        basis.append(tuple(h))
    return basis


def single_site_family(space, chi):
    """A_chi on every factor separately, the limit of A_chi(z) as the
    points move apart"""
    rs = space.rs
    generators, names = [], []
    for site in range(len(space)):
        for i in rs.nodes:
            generators.append(space.site('h', i, site))
            names.append(f"h{i}^{site + 1}")
        for a, h in enumerate(_coweight_basis(rs)):
            total = np.zeros((space.dim, space.dim))
            for root in rs.positive_roots:
                top = root_value(rs, h, root.coeffs)
                if top:
                    bottom = root_value(rs, chi, root.coeffs)
                    total += (top / bottom) * (space.site('E', root.coeffs, site)
                                               @ space.site('F', root.coeffs, site))
            generators.append(total)
            names.append(f"G{rs.nodes[a]}^{site + 1}")
    return OperatorFamily(space, generators, names, {'chi': list(chi), 'limit': 'product'})
