# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Orthonormal matrices for irreducible sl2 and sl3 representations and
# operators on their tensor products.

"""Representations

Irreducible modules are built from Gelfand-Tsetlin formulas (gl2 and gl3
restricted to sl) and orthonormalized so that f_i is the transpose of e_i.
Every operator below is therefore a real symmetric matrix for real
parameters.  Cartan elements are written in simple coroot coordinates and
the invariant form is the trace form of the defining representation, whose
Gram matrix on the simple coroots is the Cartan matrix.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
import itertools
import logging

import numpy as np
import scipy.linalg

from cactus_crystals.errors import RepresentationError
from cactus_crystals.rootdata import (
    as_weight,
    build_root_system,
    decompose_character,
    format_weight,
    tensor_character,
    character,
    weyl_dimension,
)

log = logging.getLogger(__name__)

ALGEBRAS = {'sl2': 'A1', 'sl3': 'A2'}

# relative tolerance for structure constant checks
STRUCTURE_TOL = 1e-10


def root_system_of(tag):
    try:
        return build_root_system(ALGEBRAS[tag])
    except KeyError as exc:
        raise RepresentationError(f"Unsupported algebra: {tag}") from exc


def parse_highest_weight(tag, text):
    """Comma separated Dynkin labels, e.g. 2 for sl2 or 1,1 for sl3"""
    rs = root_system_of(tag)
    coords = tuple(int(x) for x in str(text).split(','))
    if len(coords) != rs.rank or any(c < 0 for c in coords):
        raise RepresentationError(f"{text} is not a dominant weight of {tag}")
    return coords


@dataclass
class Irrep:
    tag: str
    highest: tuple
    e: dict
    f: dict
    h: dict
    weights: list
    labels: list
    root_e: dict = field(default_factory=dict)
    root_f: dict = field(default_factory=dict)

    @property
    def dim(self):
        return len(self.weights)

    @property
    def rs(self):
        return root_system_of(self.tag)

    def __repr__(self):
        return f"<Irrep {self.tag} V({format_weight(self.highest)}) dim={self.dim}>"


def _root_vectors(rs, e, f):
    """Root vectors e_alpha, f_alpha = e_alpha^T for every positive root"""
    root_e, root_f = {}, {}
    for root in rs.positive_roots:
        if root.height == 1:
            i = rs.nodes[root.coeffs.index(1)]
            root_e[root.coeffs], root_f[root.coeffs] = e[i], f[i]
    if rs.rank == 2:
        root_e[(1, 1)] = e[1] @ e[2] - e[2] @ e[1]
        root_f[(1, 1)] = f[2] @ f[1] - f[1] @ f[2]
    return root_e, root_f


def _sl2_irrep(m):
    dim = m + 1
    e = np.zeros((dim, dim))
    for k in range(1, dim):
        e[k - 1, k] = np.sqrt(k * (m - k + 1))
    h = np.diag([float(m - 2 * k) for k in range(dim)])
    weights = [(m - 2 * k,) for k in range(dim)]
    return {1: e}, {1: e.T.copy()}, {1: h}, weights, list(range(dim))


def _gt_patterns(top):
    patterns = []
    m13, m23, m33 = top
    for m12 in range(m23, m13 + 1):
        for m22 in range(m33, m23 + 1):
            for m11 in range(m22, m12 + 1):
                patterns.append(((m11,), (m12, m22), top))
    return patterns


def _l(pattern, k, i):
    return pattern[k - 1][i - 1] - i + 1


def _valid(pattern):
    for k in range(1, len(pattern)):
        lower, upper = pattern[k - 1], pattern[k]
        for i in range(k):
            if not upper[i] >= lower[i] >= upper[i + 1]:
                return False
    return True


def _shifted(pattern, k, i, step):
    rows = [list(r) for r in pattern]
    rows[k - 1][i - 1] += step
    return tuple(tuple(r) for r in rows)


def _gt_raise(pattern, k):
    """E_{k,k+1} on the unnormalized Gelfand-Tsetlin basis"""
    found = []
    for i in range(1, k + 1):
        target = _shifted(pattern, k, i, 1)
        if not _valid(target):
            continue
        lki = _l(pattern, k, i)
        num = -np.prod([lki - _l(pattern, k + 1, j) for j in range(1, k + 2)])
        den = np.prod([lki - _l(pattern, k, j) for j in range(1, k + 1) if j != i])
        found.append((target, float(num) / float(den)))
    return found


def _gt_lower(pattern, k):
    """E_{k+1,k} on the unnormalized Gelfand-Tsetlin basis"""
    found = []
    for i in range(1, k + 1):
        target = _shifted(pattern, k, i, -1)
        if not _valid(target):
            continue
        lki = _l(pattern, k, i)
        num = np.prod([lki - _l(pattern, k - 1, j) for j in range(1, k)])
        den = np.prod([lki - _l(pattern, k, j) for j in range(1, k + 1) if j != i])
        found.append((target, float(num) / float(den)))
    return found


def _sl3_irrep(a, b):
    top = (a + b, b, 0)
    patterns = _gt_patterns(top)

    def diag(p):
        sums = [sum(row) for row in p]
        return [sums[0], sums[1] - sums[0], sums[2] - sums[1]]

    def weight(p):
        d = diag(p)
        return (d[0] - d[1], d[1] - d[2])

    patterns.sort(key=lambda p: (-(2 * weight(p)[0] + weight(p)[1]),
                                 -(weight(p)[0] + 2 * weight(p)[1]), p))
    index = {p: n for n, p in enumerate(patterns)}
    dim = len(patterns)
    raw_e = {k: np.zeros((dim, dim)) for k in (1, 2)}
    raw_f = {k: np.zeros((dim, dim)) for k in (1, 2)}
    for p in patterns:
        for k in (1, 2):
            for target, coeff in _gt_raise(p, k):
                raw_e[k][index[target], index[p]] = coeff
            for target, coeff in _gt_lower(p, k):
                raw_f[k][index[target], index[p]] = coeff
    # squared norms from <E_- x, y> = <x, E_+ y>
    norms = np.zeros(dim)
    norms[0] = 1.0
    queue = deque([0])
    while queue:
        src = queue.popleft()
        for k in (1, 2):
            for dst in np.nonzero(raw_f[k][:, src])[0]:
                if norms[dst]:
                    continue
                down, up = raw_f[k][dst, src], raw_e[k][src, dst]
                norms[dst] = norms[src] * up / down
                queue.append(dst)
    if np.any(norms <= 0):
        raise RepresentationError(f"Gelfand-Tsetlin norms failed for sl3 V({a},{b})")
    root = np.sqrt(norms)
    e = {k: (raw_e[k] * root[:, None]) / root[None, :] for k in (1, 2)}
    f = {k: (raw_f[k] * root[:, None]) / root[None, :] for k in (1, 2)}
    h = {1: np.diag([float(weight(p)[0]) for p in patterns]),
         2: np.diag([float(weight(p)[1]) for p in patterns])}
    return e, f, h, [weight(p) for p in patterns], patterns


def check_relations(tag, e, f, h, name=''):
    """Chevalley and Serre relations up to STRUCTURE_TOL times the scale"""
    rs = root_system_of(tag)
    scale = max(1.0, max(np.abs(m).max() for m in e.values()) ** 2)
    tol = STRUCTURE_TOL * scale

    def bracket(x, y):
        return x @ y - y @ x

    for i in rs.nodes:
        if np.abs(f[i] - e[i].T).max() > tol:
            raise RepresentationError(f"{name}: f_{i} is not the transpose of e_{i}")
        for j in rs.nodes:
            a = rs.entry(i, j)
            if np.abs(bracket(h[i], e[j]) - rs.entry(i, j) * e[j]).max() > tol:
                raise RepresentationError(f"{name}: [h_{i}, e_{j}] relation fails")
            expected = h[i] if i == j else 0
            if np.abs(bracket(e[i], f[j]) - expected).max() > tol:
                raise RepresentationError(f"{name}: [e_{i}, f_{j}] relation fails")
            if i != j:
                x = e[j]
                for _ in range(1 - a):
                    x = bracket(e[i], x)
                if np.abs(x).max() > tol:
                    raise RepresentationError(f"{name}: Serre relation for e_{i}, e_{j} fails")


def build_irrep(tag, highest):
    """Irreducible representation with the given highest weight"""
    rs = root_system_of(tag)
    highest = tuple(int(c) for c in highest)
    if len(highest) != rs.rank or any(c < 0 for c in highest):
        raise RepresentationError(f"{highest} is not dominant for {tag}")
    if tag == 'sl2':
        e, f, h, weights, labels = _sl2_irrep(highest[0])
    else:
        e, f, h, weights, labels = _sl3_irrep(*highest)
    name = f"{tag} V({format_weight(highest)})"
    check_relations(tag, e, f, h, name)
    if len(weights) != weyl_dimension(rs, highest):
        raise RepresentationError(f"{name} has the wrong dimension")
    root_e, root_f = _root_vectors(rs, e, f)
    return Irrep(tag, highest, e, f, h, weights, labels, root_e, root_f)


def _span_module(ops_f, start, dim):
    """Orthonormal basis of the span of all f-words applied to start"""
    basis = np.zeros((dim, 0))
    queue = deque([start / np.linalg.norm(start)])
    while queue:
        v = queue.popleft()
        residual = v - basis @ (basis.T @ v)
        norm = np.linalg.norm(residual)
        if norm < 1e-9:
            continue
        basis = np.hstack([basis, (residual / norm)[:, None]])
        for op in ops_f:
            w = op @ v
            if np.linalg.norm(w) > 1e-9:
                queue.append(w / np.linalg.norm(w))
    return basis


def irrep_by_projection(tag, highest):
    """V(highest) cut out of a tensor power of the defining representation

    Used as an independent check of the Gelfand-Tsetlin matrices.
    """
    rs = root_system_of(tag)
    highest = tuple(int(c) for c in highest)
    copies = highest[0] if tag == 'sl2' else highest[0] + 2 * highest[1]
    defining = build_irrep(tag, (1,) if tag == 'sl2' else (1, 0))
    if copies == 0:
        return build_irrep(tag, highest)
    space = TensorSpace([defining] * copies)
    block = space.singular_block(highest)
    if block.shape[1] == 0:
        raise RepresentationError(f"No highest-weight vector of weight {highest}")
    basis = _span_module([space.delta('f', i) for i in rs.nodes], block[:, 0], space.dim)
    e = {i: basis.T @ space.delta('e', i) @ basis for i in rs.nodes}
    f = {i: basis.T @ space.delta('f', i) @ basis for i in rs.nodes}
    h = {i: basis.T @ space.delta('h', i) @ basis for i in rs.nodes}
    weights = [tuple(int(round(basis[:, k] @ space.delta('h', i) @ basis[:, k]))
                     for i in rs.nodes) for k in range(basis.shape[1])]
    root_e, root_f = _root_vectors(rs, e, f)
    return Irrep(tag, highest, e, f, h, weights, list(range(len(weights))), root_e, root_f)


class TensorSpace:
    """V_1 (x) ... (x) V_n with site operators, coproducts and blocks"""

    def __init__(self, irreps):
        if not irreps:
            raise RepresentationError("TensorSpace needs at least one factor")
        tags = {v.tag for v in irreps}
        if len(tags) != 1:
            raise RepresentationError(f"Mixed algebras in tensor space: {tags}")
        self.irreps = list(irreps)
        self.tag = irreps[0].tag
        self.rs = root_system_of(self.tag)
        self.dims = [v.dim for v in irreps]
        self.dim = int(np.prod(self.dims))
        self._cache = {}

    def __len__(self):
        return len(self.irreps)

    def __repr__(self):
        return ' x '.join(f"V({format_weight(v.highest)})" for v in self.irreps)

    def lift(self, matrix, site):
        left = int(np.prod(self.dims[:site]))
        right = int(np.prod(self.dims[site + 1:]))
        return np.kron(np.kron(np.eye(left), matrix), np.eye(right))

    def _factor_op(self, kind, key, site):
        irrep = self.irreps[site]
        table = {'e': irrep.e, 'f': irrep.f, 'h': irrep.h,
                 'E': irrep.root_e, 'F': irrep.root_f}[kind]
        return table[key]

    def site(self, kind, key, site):
        """Operator X^{(site)}; kind is e, f, h or E, F for root vectors"""
        cache_key = ('site', kind, key, site)
        if cache_key not in self._cache:
            self._cache[cache_key] = self.lift(self._factor_op(kind, key, site), site)
        return self._cache[cache_key]

    def delta(self, kind, key, sites=None):
        sites = range(len(self)) if sites is None else sites
        cache_key = ('delta', kind, key, tuple(sites))
        if cache_key not in self._cache:
            self._cache[cache_key] = sum(self.site(kind, key, s) for s in sites)
        return self._cache[cache_key]

    def cartan(self, chi, sites=None):
        """Delta(chi) for chi in simple coroot coordinates"""
        return sum(c * self.delta('h', i, sites) for c, i in zip(chi, self.rs.nodes))

    @cached_property
    def cartan_inverse(self):
        return np.linalg.inv(np.array(self.rs.cartan, dtype=float))

    def _pairing(self, left, right):
        """sum_a x_a^{left} x_a^{right} over dual bases of the trace form"""
        rs = self.rs
        total = np.zeros((self.dim, self.dim))
        for a, i in enumerate(rs.nodes):
            for b, j in enumerate(rs.nodes):
                coeff = self.cartan_inverse[a, b]
                if coeff:
                    total += coeff * left('h', i) @ right('h', j)
        for root in rs.positive_roots:
            total += left('E', root.coeffs) @ right('F', root.coeffs)
            total += left('F', root.coeffs) @ right('E', root.coeffs)
        return total

    def casimir(self, sites=None):
        """Casimir of Delta(g) acting on the given sites (all by default)"""
        cache_key = ('casimir', None if sites is None else tuple(sites))
        if cache_key not in self._cache:
            def op(kind, key):
                return self.delta(kind, key, sites)
            self._cache[cache_key] = self._pairing(op, op)
        return self._cache[cache_key]

    def omega(self, i, j):
        """Omega^{(ij)} for sites i != j (0-based)"""
        if i == j:
            raise RepresentationError("omega needs two distinct sites")
        cache_key = ('omega', min(i, j), max(i, j))
        if cache_key not in self._cache:
            self._cache[cache_key] = self._pairing(
                lambda kind, key: self.site(kind, key, i),
                lambda kind, key: self.site(kind, key, j))
        return self._cache[cache_key]

    @cached_property
    def weights(self):
        factors = [v.weights for v in self.irreps]
        return [tuple(sum(c) for c in zip(*combo)) for combo in itertools.product(*factors)]

    def weight_block(self, mu):
        mu = tuple(int(c) for c in mu)
        cols = [k for k, w in enumerate(self.weights) if w == mu]
        block = np.zeros((self.dim, len(cols)))
        for n, k in enumerate(cols):
            block[k, n] = 1.0
        return block

    def singular_block(self, mu):
        """Orthonormal basis of the highest-weight vectors of weight mu"""
        block = self.weight_block(mu)
        if block.shape[1] == 0:
            return block
        stacked = np.vstack([self.delta('e', i) @ block for i in self.rs.nodes])
        kernel = scipy.linalg.null_space(stacked, rcond=1e-10)
        return block @ kernel

    def decomposition(self):
        """Multiplicities of the irreducible summands"""
        chars = [character(self.rs, as_weight(v.highest)) for v in self.irreps]
        found = decompose_character(self.rs, tensor_character(self.rs, *chars))
        return {tuple(int(c) for c in mu): m for mu, m in found.items()}

    def permute_factors(self, order):
        """Matrix P with P(v_1 x ... x v_n) = v_{order[0]} x v_{order[1]} x ..."""
        order = list(order)
        eye = np.eye(self.dim).reshape(self.dims + [self.dim])
        permuted = np.transpose(eye, order + [len(self)])
        return permuted.reshape(self.dim, self.dim)

    def reversal(self, first=0, last=None):
        """Reverse the factors first..last (0-based, inclusive)"""
        last = len(self) - 1 if last is None else last
        order = list(range(len(self)))
        order[first:last + 1] = reversed(order[first:last + 1])
        return self.permute_factors(order)

    def reordered(self, order):
        return TensorSpace([self.irreps[k] for k in order])

    def intertwiner(self, target, vector):
        """Module map T: target -> self with T(highest weight vector) = vector

        The vector must be a unit highest-weight vector of weight
        target.highest; T is then an isometry.
        """
        rs = self.rs
        source = np.zeros((target.dim, 0))
        image = np.zeros((self.dim, 0))
        queue = deque([((), np.eye(target.dim)[:, 0], vector)])
        while queue and source.shape[1] < target.dim:
            word, s, v = queue.popleft()
            candidate = np.hstack([source, s[:, None]])
            if np.linalg.matrix_rank(candidate, tol=1e-9) > source.shape[1]:
                source, image = candidate, np.hstack([image, v[:, None]])
                for i in rs.nodes:
                    queue.append((word + (i,), target.f[i] @ s, self.delta('f', i) @ v))
        if source.shape[1] < target.dim:
            raise RepresentationError(f"f-words do not span {target!r}")
        return image @ np.linalg.pinv(source)


def casimir_value(rs, highest):
    """(lambda, lambda + 2 rho), the Casimir eigenvalue on V(lambda)"""
    lam = as_weight(highest)
    shifted = tuple(a + 2 * b for a, b in zip(lam, rs.rho))
    return float(rs.inner(lam, shifted))


def weyl_lift(space, word):
    """rho(w) as the product of n_i = exp(e_i) exp(-f_i) exp(e_i)"""
    if isinstance(space, Irrep):
        space = TensorSpace([space])
    factors = []
    for i in word.letters:
        e, f = space.delta('e', i), space.delta('f', i)
        factors.append(scipy.linalg.expm(e) @ scipy.linalg.expm(-f) @ scipy.linalg.expm(e))
    return reduce(np.matmul, factors, np.eye(space.dim))


def embed(outer, site, inner_map, vector):
    """Insert inner_map (V_nu -> cluster) at one site of an outer vector

    outer is the space in which the cluster is replaced by V_nu at site.
    """
    left = int(np.prod(outer.dims[:site]))
    right = int(np.prod(outer.dims[site + 1:]))
    block = vector.reshape(left, outer.dims[site], right)
    grown = np.einsum('anb,in->aib', block, inner_map)
    return grown.reshape(-1)
