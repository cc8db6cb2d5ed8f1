# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Finite root systems in fundamental-weight coordinates.

"""Root data

Weights are tuples of exact rationals giving the coordinates in the basis of
fundamental weights, so that the i-th coordinate of a weight is its pairing
with the i-th simple coroot.  Nodes are labelled by positive integers; a
parabolic root system keeps the labels of the nodes it was cut out from.
"""

from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
import itertools

import sympy

from cactus_crystals.errors import RootDataError

_EXCEPTIONAL = {
    'B2': ((2, -1), (-2, 2)),
    'C2': ((2, -2), (-1, 2)),
    'G2': ((2, -3), (-1, 2)),
    'D4': ((2, -1, 0, 0), (-1, 2, -1, -1), (0, -1, 2, 0), (0, -1, 0, 2)),
}

POSITIVE_ROOT_COUNTS = {
    'A1': 1, 'A2': 3, 'A3': 6, 'A4': 10, 'B2': 4, 'C2': 4, 'G2': 6, 'D4': 12,
}


def as_weight(coords):
    """Return the canonical weight tuple for an iterable of numbers"""
    return tuple(Fraction(c) for c in coords)


def parse_weight(text):
    """Parse comma separated fundamental-weight coordinates ("1,0,2")"""
    text = text.strip()
    if not text:
        return ()
    try:
        return as_weight(Fraction(tok.strip()) for tok in text.split(','))
    except (ValueError, ZeroDivisionError) as exc:
        raise RootDataError(f"Invalid weight: {text}") from exc


def format_weight(weight):
    return ','.join(str(c) for c in weight)


def _type_a_cartan(rank):
    return tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0)
              for j in range(rank))
        for i in range(rank)
    )


@dataclass(frozen=True)
class Root:
    """Positive root with its simple-root and weight coordinates"""
    coeffs: tuple
    weight: tuple

    @property
    def height(self):
        return sum(self.coeffs)


@dataclass(frozen=True)
class WeylWord:
    """Word in the simple reflections, read as a product s_a s_b ... so the
    last letter acts first"""
    letters: tuple = ()

    def __len__(self):
        return len(self.letters)

    def act(self, rs, weight):
        for i in reversed(self.letters):
            weight = rs.reflect(i, weight)
        return weight

    def inverse(self):
        return WeylWord(tuple(reversed(self.letters)))

    def __mul__(self, other):
        return WeylWord(self.letters + other.letters)


@dataclass(frozen=True)
class RootSystem:
    type_label: str
    cartan: tuple
    nodes: tuple

    def __post_init__(self):
        size = len(self.nodes)
        if len(self.cartan) != size or any(len(row) != size for row in self.cartan):
            raise RootDataError(f"Malformed Cartan matrix for {self.type_label}")
        for a, row in enumerate(self.cartan):
            for b, entry in enumerate(row):
                if a == b and entry != 2:
                    raise RootDataError("Cartan diagonal entries must be 2")
                if a != b and entry > 0:
                    raise RootDataError("Cartan off-diagonal entries must be <= 0")

    @property
    def rank(self):
        return len(self.nodes)

    def pos(self, i):
        try:
            return self.nodes.index(i)
        except ValueError as exc:
            raise RootDataError(f"Node {i} not in {self.nodes}") from exc

    def entry(self, i, j):
        return self.cartan[self.pos(i)][self.pos(j)]

    def simple_root(self, j):
        col = self.pos(j)
        return tuple(Fraction(row[col]) for row in self.cartan)

    def simple_roots(self):
        return [self.simple_root(j) for j in self.nodes]

    def pairing(self, i, weight):
        """<alpha_i^vee, weight>"""
        return weight[self.pos(i)]

    def reflect(self, i, weight):
        value = weight[self.pos(i)]
        if not value:
            return weight
        root = self.simple_root(i)
        return tuple(w - value * r for w, r in zip(weight, root))

    def zero(self):
        return as_weight([0] * self.rank)

    @property
    def rho(self):
        return as_weight([1] * self.rank)

    def is_dominant(self, weight):
        return all(c >= 0 for c in weight)

    def is_integral(self, weight):
        return all(Fraction(c).denominator == 1 for c in weight)

    def neighbours(self, i):
        return [j for j in self.nodes if j != i and self.entry(i, j) != 0]

    def connected(self, subset):
        subset = set(subset)
        if not subset:
            return False
        start = min(subset)
        seen = {start}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in self.neighbours(i):
                if j in subset and j not in seen:
                    seen.add(j)
                    queue.append(j)
        return seen == subset

    def connected_subsets(self):
        found = []
        for size in range(1, self.rank + 1):
            for subset in itertools.combinations(self.nodes, size):
                if self.connected(subset):
                    found.append(frozenset(subset))
        return found

    def parabolic(self, subset):
        """Root system of the Levi subalgebra on the given nodes"""
        nodes = tuple(sorted(subset))
        for j in nodes:
            self.pos(j)
        cartan = tuple(tuple(self.entry(i, j) for j in nodes) for i in nodes)
        return RootSystem(f"{self.type_label}[{','.join(map(str, nodes))}]",
                          cartan, nodes)

    def project(self, weight, subset):
        return tuple(weight[self.pos(j)] for j in sorted(subset))

    @cached_property
    def symmetrizer(self):
        """d_i with d_i a_ij = d_j a_ji, normalized to 1 on the first node
        of each connected piece"""
        d = {}
        for start in self.nodes:
            if start in d:
                continue
            d[start] = Fraction(1)
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for j in self.neighbours(i):
                    if j not in d:
                        d[j] = d[i] * self.entry(i, j) / self.entry(j, i)
                        queue.append(j)
        return d

    @cached_property
    def _cartan_inverse(self):
        inverse = sympy.Matrix(self.cartan).inv()
        return tuple(
            tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1]))
                  for x in inverse.row(a))
            for a in range(self.rank)
        )

    def root_coordinates(self, weight):
        """Coordinates of a weight in the basis of simple roots"""
        inv = self._cartan_inverse
        return tuple(sum(inv[a][b] * weight[b] for b in range(self.rank))
                     for a in range(self.rank))

    def inner(self, lam, mu):
        """Invariant form with (alpha_i, alpha_i) = 2 d_i"""
        coeffs = self.root_coordinates(mu)
        d = self.symmetrizer
        return sum(coeffs[a] * d[j] * lam[a] for a, j in enumerate(self.nodes))

    @cached_property
    def positive_roots(self):
        """Positive roots by closure of the simple roots under reflections"""
        rank = self.rank
        simple = []
        for a in range(rank):
            coeffs = tuple(1 if b == a else 0 for b in range(rank))
            simple.append(coeffs)
        seen = set(simple)
        queue = deque(simple)
        while queue:
            coeffs = queue.popleft()
            for a in range(rank):
                value = sum(self.cartan[a][b] * coeffs[b] for b in range(rank))
                image = tuple(c - value if b == a else c
                              for b, c in enumerate(coeffs))
                if all(c >= 0 for c in image) and any(image) and image not in seen:
                    seen.add(image)
                    queue.append(image)
        roots = []
        for coeffs in seen:
            weight = tuple(Fraction(sum(self.cartan[a][b] * coeffs[b]
                                        for b in range(rank)))
                           for a in range(rank))
            roots.append(Root(coeffs, weight))
        roots.sort(key=lambda r: (r.height, tuple(-c for c in r.coeffs)))
        expected = POSITIVE_ROOT_COUNTS.get(self.type_label)
        if expected is not None and len(roots) != expected:
            raise RootDataError(
                f"{self.type_label}: found {len(roots)} positive roots, "
                f"expected {expected}")
        return tuple(roots)

    def coroot_pairing(self, root, weight):
        """<root^vee, weight> for a positive root"""
        d = self.symmetrizer
        norm = sum(root.coeffs[a] * root.coeffs[b] * d[i] * self.cartan[a][b]
                   for a, i in enumerate(self.nodes)
                   for b in range(self.rank))
        pairing = sum(root.coeffs[a] * d[i] * weight[a]
                      for a, i in enumerate(self.nodes))
        return 2 * pairing / norm

    def dominant_conjugate(self, weight):
        """Return the dominant weight in the W-orbit and a word w with
        w(dominant) = weight"""
        letters = []
        while True:
            for a, i in enumerate(self.nodes):
                if weight[a] < 0:
                    weight = self.reflect(i, weight)
                    letters.append(i)
                    break
            else:
                return weight, WeylWord(tuple(letters))

    def precedes(self, mu, lam):
        """mu <= lam in the dominance order"""
        coeffs = self.root_coordinates(tuple(a - b for a, b in zip(lam, mu)))
        return all(c.denominator == 1 and c >= 0 for c in coeffs)

    def to_json(self):
        return {
            'type': self.type_label,
            'rank': self.rank,
            'cartan': [list(row) for row in self.cartan],
        }


@lru_cache(maxsize=None)
def build_root_system(type_label):
    """Build one of the supported finite root systems

    Supported labels are A1 to A4, B2, C2, G2 and D4, with Bourbaki node
    numbering (node 1 long for B2, short for C2 and G2).
    """
    label = type_label.strip().upper()
    if label in _EXCEPTIONAL:
        cartan = _EXCEPTIONAL[label]
    elif len(label) == 2 and label[0] == 'A' and label[1] in '1234':
        cartan = _type_a_cartan(int(label[1]))
    else:
        raise RootDataError(f"Unsupported root system type: {type_label}")
    rs = RootSystem(label, cartan, tuple(range(1, len(cartan) + 1)))
    rs.positive_roots
    return rs


def longest_element(rs, subset):
    """Reduced word for the longest element of the parabolic subgroup W_J"""
    subset = sorted(set(subset))
    if not subset:
        raise RootDataError("longest_element needs a nonempty node subset")
    for j in subset:
        rs.pos(j)
    weight = as_weight(1 if i in subset else 0 for i in rs.nodes)
    applied = []
    while True:
        for j in subset:
            if rs.pairing(j, weight) > 0:
                weight = rs.reflect(j, weight)
                applied.append(j)
                break
        else:
            break
    return WeylWord(tuple(reversed(applied)))


def theta_involution(rs, subset):
    """Diagram involution theta_J with alpha_theta(j) = -w0^J(alpha_j)"""
    subset = sorted(set(subset))
    if not rs.connected(subset):
        raise RootDataError(f"Node subset {subset} is empty or disconnected")
    w0 = longest_element(rs, subset)
    theta = {}
    for j in subset:
        image = tuple(-c for c in w0.act(rs, rs.simple_root(j)))
        for k in subset:
            if rs.simple_root(k) == image:
                theta[j] = k
                break
        else:
            raise RootDataError(f"-w0 does not map alpha_{j} to a simple root")
    return theta


def weyl_dimension(rs, weight):
    weight = as_weight(weight)
    if not rs.is_dominant(weight):
        raise RootDataError(f"Weight {format_weight(weight)} is not dominant")
    shifted = tuple(w + r for w, r in zip(weight, rs.rho))
    dim = Fraction(1)
    for root in rs.positive_roots:
        dim *= rs.coroot_pairing(root, shifted) / rs.coroot_pairing(root, rs.rho)
    if dim.denominator != 1:
        raise RootDataError(f"Non-integral Weyl dimension {dim}")
    return int(dim)


def _weights_of(rs, lam):
    weights = {lam}
    queue = deque([lam])
    while queue:
        mu = queue.popleft()
        for i in rs.nodes:
            nu = tuple(a - b for a, b in zip(mu, rs.simple_root(i)))
            if nu not in weights and rs.precedes(rs.dominant_conjugate(nu)[0], lam):
                weights.add(nu)
                queue.append(nu)
    return weights


@lru_cache(maxsize=None)
def character(rs, lam):
    """Weight multiplicities of V(lam) by Freudenthal's formula"""
    lam = as_weight(lam)
    if not rs.is_dominant(lam) or not rs.is_integral(lam):
        raise RootDataError(f"Weight {format_weight(lam)} is not dominant integral")
    weights = _weights_of(rs, lam)
    depth = {mu: sum(rs.root_coordinates(tuple(a - b for a, b in zip(lam, mu))))
             for mu in weights}
    dominant = sorted((mu for mu in weights if rs.is_dominant(mu)),
                      key=lambda mu: (depth[mu], mu))
    shifted = tuple(a + b for a, b in zip(lam, rs.rho))
    top = rs.inner(shifted, shifted)
    mult = {lam: 1}
    for mu in dominant:
        if mu == lam:
            continue
        total = Fraction(0)
        for root in rs.positive_roots:
            k = 1
            while True:
                nu = tuple(a + k * b for a, b in zip(mu, root.weight))
                dom = rs.dominant_conjugate(nu)[0]
                if dom not in weights or not rs.precedes(dom, lam):
                    break
                total += mult[dom] * rs.inner(nu, root.weight)
                k += 1
        mu_rho = tuple(a + b for a, b in zip(mu, rs.rho))
        value = 2 * total / (top - rs.inner(mu_rho, mu_rho))
        if value.denominator != 1:
            raise RootDataError(f"Non-integral multiplicity at {format_weight(mu)}")
        mult[mu] = int(value)
    return Counter({mu: mult[rs.dominant_conjugate(mu)[0]] for mu in weights})


def tensor_character(rs, *chars):
    result = Counter({rs.zero(): 1})
    for char in chars:
        product = Counter()
        for mu, m in result.items():
            for nu, n in char.items():
                product[tuple(a + b for a, b in zip(mu, nu))] += m * n
        result = product
    return result


def decompose_character(rs, char):
    """Multiplicities of irreducibles in a character, peeling highest weights"""
    remaining = Counter({mu: m for mu, m in char.items() if m})
    decomposition = Counter()
    while remaining:
        top = max(remaining, key=lambda mu: (sum(rs.root_coordinates(mu)), mu))
        m = remaining[top]
        if m < 0 or not rs.is_dominant(top):
            raise RootDataError("Character is not a sum of irreducible characters")
        decomposition[top] += m
        for mu, n in character(rs, top).items():
            remaining[mu] -= m * n
            if not remaining[mu]:
                del remaining[mu]
    return decomposition
