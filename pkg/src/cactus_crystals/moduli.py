# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Labelled trees, nested sets, adapted bases and charts on the real moduli
# space of marked points, and the parameter paths used by the numerics.

"""Moduli combinatorics

Trees are binary with leaves labelled 1..n and stored as nested pairs; the
order inside each pair is the planar structure.  Configurations are tuples
(z_1, ..., z_n) standing for the point of the moduli space obtained by
marking the z's and infinity.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math
import re

import sympy

from cactus_crystals.errors import ChartError, ScheduleError
from cactus_crystals.rootdata import longest_element


@dataclass(frozen=True)
class LabelledTree:
    root: object

    @property
    def is_leaf(self):
        return isinstance(self.root, int)

    def leaves(self):
        """Leaf labels in planar order"""
        stack, found = [self.root], []
        while stack:
            node = stack.pop()
            if isinstance(node, int):
                found.append(node)
            else:
                stack.append(node[1])
                stack.append(node[0])
        return found

    def __len__(self):
        return len(self.leaves())

    def __str__(self):
        return print_tree(self)


def _check_labels(tree):
    labels = sorted(tree.leaves())
    if labels != list(range(1, len(labels) + 1)):
        raise ChartError(f"Tree leaves must be labelled 1..n, got {labels}")
    return tree


def parse_tree(text):
    """Parse a bracketing such as "(12)3" or "(10 11)(1 2)"

    Without spaces every digit is a leaf; with spaces leaves are maximal
    digit runs.  Every parenthesised group holds one or two items.
    """
    pattern = r'\(|\)|\d+' if ' ' in text.strip() else r'\(|\)|\d'
    tokens = re.findall(pattern, text)
    if ''.join(tokens) != re.sub(r'\s+', '', text):
        raise ChartError(f"Invalid characters in tree: {text}")
    pos = 0

    def group():
        nonlocal pos
        items = []
        while pos < len(tokens) and tokens[pos] != ')':
            tok = tokens[pos]
            pos += 1
            if tok == '(':
                items.append(group())
                if pos >= len(tokens) or tokens[pos] != ')':
                    raise ChartError(f"Unbalanced parentheses in {text}")
                pos += 1
            else:
                items.append(int(tok))
        if len(items) == 1:
            return items[0]
        if len(items) == 2:
            return (items[0], items[1])
        raise ChartError(f"Groups must hold one or two items: {text}")

    root = group()
    if pos != len(tokens):
        raise ChartError(f"Unbalanced parentheses in {text}")
    return _check_labels(LabelledTree(root))


def print_tree(tree):
    wide = any(label > 9 for label in tree.leaves())
    sep = ' ' if wide else ''

    def render(node, top=False):
        if isinstance(node, int):
            return str(node)
        inner = render(node[0]) + sep + render(node[1])
        return inner if top else f"({inner})"

    return render(tree.root, top=True)


def relabel(tree, permutation):
    """Apply a relabelling given as a mapping or a sequence (label i goes to
    permutation[i-1])"""
    if not isinstance(permutation, dict):
        permutation = {i + 1: p for i, p in enumerate(permutation)}

    def walk(node):
        if isinstance(node, int):
            return permutation[node]
        return (walk(node[0]), walk(node[1]))

    return _check_labels(LabelledTree(walk(tree.root)))


def operad_compose(outer, inners):
    """Graft inners[i-1] onto leaf i of the outer tree"""
    if len(outer) != len(inners):
        raise ChartError(f"Outer tree has {len(outer)} leaves, got {len(inners)} inner trees")
    offsets = [0]
    for inner in inners:
        offsets.append(offsets[-1] + len(inner))

    def shift(node, offset):
        if isinstance(node, int):
            return node + offset
        return (shift(node[0], offset), shift(node[1], offset))

    def walk(node):
        if isinstance(node, int):
            return shift(inners[node - 1].root, offsets[node - 1])
        return (walk(node[0]), walk(node[1]))

    return _check_labels(LabelledTree(walk(outer.root)))


def all_trees(labels):
    """Every planar binary tree on the given ordered labels"""
    labels = list(labels)
    if len(labels) == 1:
        return [labels[0]]
    found = []
    for cut in range(1, len(labels)):
        for left in all_trees(labels[:cut]):
            for right in all_trees(labels[cut:]):
                found.append((left, right))
    return found


@dataclass
class NestedSetChart:
    """Nested set S(T) with its adapted basis and dual basis

    Each member P of S is the set of leaf labels above an internal vertex; the
    basis vector alpha_P = eps_l - eps_r is stored as the pair (l, r) and the
    dual vector alpha_P^* in z-coordinates with z_n = 0.
    """
    tree: LabelledTree
    nested_sets: tuple
    basis: dict = field(default_factory=dict)
    parent: dict = field(default_factory=dict)
    dual: dict = field(default_factory=dict)

    @property
    def top(self):
        return self.nested_sets[-1]

    @property
    def n(self):
        return len(self.top)

    def coordinates(self):
        return [p for p in self.nested_sets if p != self.top]


def _vertices(node):
    """(leaf set, left leaves, right leaves) for every internal vertex"""
    if isinstance(node, int):
        return frozenset([node]), []
    left, below_left = _vertices(node[0])
    right, below_right = _vertices(node[1])
    here = left | right
    return here, below_left + below_right + [(here, left, right)]


def tree_to_nested_set(tree, planar=True):
    _, vertices = _vertices(tree.root)
    vertices.sort(key=lambda v: (len(v[0]), sorted(v[0])))
    nested = tuple(v[0] for v in vertices)
    chart = NestedSetChart(tree, nested)
    for p in nested:
        above = [q for q in nested if p < q]
        if above:
            chart.parent[p] = min(above, key=len)
    if not planar:
        return chart
    n = len(tree)
    for here, left, right in vertices:
        chart.basis[here] = (max(left), min(right))
    rows = []
    for p in nested:
        l, r = chart.basis[p]
        rows.append([1 if k == l else (-1 if k == r else 0) for k in range(1, n + 1)])
    rows.append([1 if k == n else 0 for k in range(1, n + 1)])
    inverse = sympy.Matrix(rows).inv()
    for col, p in enumerate(nested):
        chart.dual[p] = tuple(Fraction(int(x.p), int(x.q)) for x in inverse.col(col))
    return chart


@dataclass(frozen=True)
class DegenerationDescriptor:
    """Boundary point of a chart: the clusters whose coordinate vanished"""
    tree: LabelledTree
    collapsed: tuple
    coordinates: dict

    def to_json(self):
        return {'tree': print_tree(self.tree),
                'collapsed': [sorted(p) for p in self.collapsed]}


@dataclass(frozen=True)
class Configuration:
    """n distinct marked points (and infinity)"""
    z: tuple
    gauge: str = 'z_n=0'

    def __post_init__(self):
        if len(set(self.z)) != len(self.z):
            raise ChartError(f"Marked points must be distinct: {self.z}")

    def __len__(self):
        return len(self.z)

    def min_gap(self):
        values = sorted(self.z)
        return min(b - a for a, b in zip(values, values[1:]))

    def affine(self, scale, shift=0):
        return Configuration(tuple(scale * x + shift for x in self.z), gauge='affine')

    def regauge(self):
        """Representative with z_n = 0 and z_1 = 1"""
        first, last = self.z[0], self.z[-1]
        return Configuration(tuple((x - last) / (first - last) for x in self.z))

    def to_json(self):
        return {'z': list(self.z), 'gauge': self.gauge}


def chart_to_configuration(chart, coords):
    """z = sum_P (prod_{Q containing P} u_Q) alpha_P^* with u_top = 1

    Vanishing coordinates give a DegenerationDescriptor instead of a
    Configuration.
    """
    if not chart.dual:
        raise ChartError("Chart has no adapted basis (tree not planar)")
    coords = dict(coords)
    names = chart.coordinates()
    if set(coords) != set(names):
        raise ChartError("Chart coordinates must be given for every non-top nested set")
    if names and all(coords[p] == 0 for p in names):
        raise ChartError("All chart coordinates vanish")
    zero = [p for p in names if coords[p] == 0]
    if zero:
        return DegenerationDescriptor(chart.tree, tuple(zero), coords)
    coords[chart.top] = 1
    z = [0] * chart.n
    for p in chart.nested_sets:
        weight = 1
        for q in chart.nested_sets:
            if p <= q:
                weight *= coords[q]
        z = [a + weight * b for a, b in zip(z, chart.dual[p])]
    return Configuration(tuple(z))


@dataclass
class Segment:
    t0: float
    t1: float
    z_start: tuple
    z_end: tuple
    interpolation: str = 'linear'
    handoff: dict = None

    def point(self, t):
        if self.t1 == self.t0:
            return tuple(self.z_end)
        s = (t - self.t0) / (self.t1 - self.t0)
        if self.interpolation == 'log-gap':
            return _log_gap_point(self.z_start, self.z_end, s)
        return tuple((1 - s) * a + s * b for a, b in zip(self.z_start, self.z_end))

    def to_json(self):
        return {'t0': self.t0, 't1': self.t1, 'z_start': list(self.z_start),
                'z_end': list(self.z_end), 'handoff': self.handoff}


def _gaps(z):
    return [z[k] - z[k + 1] for k in range(len(z) - 1)]


def _from_gaps(gaps):
    z = [0.0]
    for g in reversed(gaps):
        z.insert(0, z[0] + g)
    return tuple(z)


def _log_gap_point(start, end, s):
    gaps = [math.exp((1 - s) * math.log(a) + s * math.log(b))
            for a, b in zip(_gaps(start), _gaps(end))]
    return _from_gaps(gaps)


@dataclass
class PathSchedule:
    n: int
    kind: str
    segments: list = field(default_factory=list)
    generator: tuple = None
    handoff: dict = None
    inner: object = None

    @property
    def start(self):
        return self.segments[0].z_start if self.segments else None

    @property
    def end(self):
        return self.segments[-1].z_end if self.segments else None

    def point(self, t):
        for seg in self.segments:
            if seg.t0 <= t <= seg.t1:
                return seg.point(t)
        raise ScheduleError(f"Parameter {t} outside the schedule")

    def reversed(self):
        segments = [Segment(1 - s.t1, 1 - s.t0, s.z_end, s.z_start, s.interpolation)
                    for s in reversed(self.segments)]
        return PathSchedule(self.n, self.kind, segments, self.generator)

    def to_json(self):
        return {
            'n': self.n,
            'kind': self.kind,
            'generator': list(self.generator) if self.generator else None,
            'segments': [s.to_json() for s in self.segments],
            'handoff': self.handoff,
            'inner': self.inner.to_json() if self.inner else None,
        }


def cactus_path_schedule(n, generator, base, delta):
    """Parameter path realizing the external generator s_pq from base

    A full reversal moves base to the symmetric point (z_i - z_{n+1-i})/2.  A
    proper cluster p..q is squeezed affinely to width delta around its
    midpoint, ending in a handoff to the inner schedule of s_{1,k}.
    """
    p, q = generator
    base = tuple(float(x) for x in base)
    if len(base) != n or not 1 <= p < q <= n:
        raise ScheduleError(f"s{p}{q} does not fit a configuration of {len(base)} points")
    if any(b <= a for a, b in zip(base, base[1:])):
        raise ScheduleError(f"Base configuration must be strictly increasing: {base}")
    if n == 2:
        return PathSchedule(n, 'swap', [], generator, handoff={'swap': True})
    if q - p + 1 == n:
        target = tuple((base[i] - base[n - 1 - i]) / 2 for i in range(n))
        return PathSchedule(n, 'reversal', [Segment(0.0, 1.0, base, target)], generator)
    min_gap = min(b - a for a, b in zip(base, base[1:]))
    if not 0 < delta < min_gap / 2:
        raise ScheduleError(f"delta {delta} must lie in (0, {min_gap / 2})")
    lo, hi = base[p - 1], base[q - 1]
    center = (lo + hi) / 2
    target = list(base)
    for k in range(p, q + 1):
        target[k - 1] = center + delta * ((base[k - 1] - base[p + q - k - 1]) / 2) / (hi - lo)
    k = q - p + 1
    inner_base = tuple((target[j - 1] - center) / delta for j in range(p, q + 1))
    handoff = {'cluster': list(range(p, q + 1)), 'width': delta, 'center': center,
               'inner_generator': [1, k]}
    seg = Segment(0.0, 1.0, base, tuple(target), handoff=handoff)
    inner = cactus_path_schedule(k, (1, k), inner_base, delta)
    return PathSchedule(n, 'cluster', [seg], generator, handoff=handoff, inner=inner)


def pentagon_schedule(eps, big):
    """Closed loop through the five limit points of the pentagon for n = 3

    Vertices are given by the gaps (z_1 - z_2, z_2 - z_3) with z_3 = 0 and
    edges interpolate the gaps logarithmically.
    """
    if not 0 < eps < 1 < big:
        raise ScheduleError("pentagon needs 0 < eps < 1 < T")
    gaps = [(eps ** 2, eps), (eps, eps ** 2), (big, eps ** 2), (big, big), (eps ** 2, big)]
    labels = ['D(A)A((12)3)', 'D(A)A(1(23))', 'A x D(A)A(1,0)', 'A x A x A', 'D12(A) x A']
    vertices = [_from_gaps(g) for g in gaps]
    segments = []
    for k in range(5):
        segments.append(Segment(k / 5, (k + 1) / 5, vertices[k], vertices[(k + 1) % 5],
                                interpolation='log-gap', handoff={'vertex': labels[k]}))
    return PathSchedule(3, 'pentagon', segments)


def root_value(rs, chi, coeffs):
    """alpha(chi) for a root given by simple-root coefficients; chi is given
    in simple coroot coordinates"""
    total = 0
    for a, c in enumerate(coeffs):
        if c:
            total += c * sum(chi[b] * rs.cartan[b][a] for b in range(rs.rank))
    return total


def is_regular(rs, chi, tol=0.0):
    return all(abs(root_value(rs, chi, r.coeffs)) > tol for r in rs.positive_roots)


def reflect_coweight(rs, i, chi):
    a = rs.pos(i)
    value = root_value(rs, chi, [1 if b == a else 0 for b in range(rs.rank)])
    return tuple(c - value if b == a else c for b, c in enumerate(chi))


def wall_point(rs, chi, i):
    """chi^i = chi - alpha_i(chi)/2 h_i, the s_i-fixed point between chi and
    s_i(chi)"""
    a = rs.pos(i)
    value = root_value(rs, chi, [1 if b == a else 0 for b in range(rs.rank)])
    return tuple(c - value / 2 if b == a else c for b, c in enumerate(chi))


def w0_coweight(rs, chi):
    for i in reversed(longest_element(rs, rs.nodes).letters):
        chi = reflect_coweight(rs, i, chi)
    return chi
