# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Normal crystals from the Littelmann path model, tensor products,
# components and restrictions.

"""Crystal core

A `Crystal` is an immutable graph on dense integer labels.  Every element
label maps to a key (a `PathElement` for B(lambda), a `TensorElement` of
factor labels for tensor products), a weight and, for each node i, the
partial Kashiwara operators e_i and f_i stored as label lists with None for
an undefined result.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import logging

import networkx as nx

from cactus_crystals.errors import CrystalError, NonNormalCrystal
from cactus_crystals.rootdata import as_weight, format_weight, weyl_dimension

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a structural check, falsy when it failed"""
    ok: bool
    witness: object = None
    data: object = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class PathElement:
    """Piecewise linear path from 0 given as (velocity, duration) segments"""
    segments: tuple

    @classmethod
    def straight(cls, weight):
        return cls(((as_weight(weight), Fraction(1)),))

    def endpoint(self):
        total = None
        for velocity, duration in self.segments:
            step = tuple(v * duration for v in velocity)
            total = step if total is None else tuple(a + b for a, b in zip(total, step))
        return total

    def breakpoints(self, rs, i):
        """Times and heights <alpha_i^vee, pi(t)> at every segment boundary"""
        pos = rs.pos(i)
        times, heights = [Fraction(0)], [Fraction(0)]
        for velocity, duration in self.segments:
            times.append(times[-1] + duration)
            heights.append(heights[-1] + velocity[pos] * duration)
        return times, heights

    def __str__(self):
        return ' '.join(f"({format_weight(v)})*{d}" for v, d in self.segments)


@dataclass(frozen=True)
class TensorElement:
    factors: tuple

    def __str__(self):
        return '(' + ','.join(str(f) for f in self.factors) + ')'


def _canonical(segments):
    merged = []
    for velocity, duration in segments:
        if not duration:
            continue
        if merged and merged[-1][0] == velocity:
            merged[-1] = (velocity, merged[-1][1] + duration)
        else:
            merged.append((velocity, duration))
    return PathElement(tuple(merged))


def _split(segments, k, fraction):
    """Split segment k at the given fraction of its duration"""
    velocity, duration = segments[k]
    head = (velocity, duration * fraction)
    tail = (velocity, duration * (1 - fraction))
    return segments[:k] + [head, tail] + segments[k + 1:]


def _reflect(rs, i, segments, first, last):
    pos = rs.pos(i)
    root = rs.simple_root(i)
    result = list(segments)
    for k in range(first, last):
        velocity, duration = result[k]
        value = velocity[pos]
        result[k] = (tuple(v - value * r for v, r in zip(velocity, root)), duration)
    return result


def littelmann_e(rs, i, path):
    """Raising root operator, None when the path is i-highest"""
    times, heights = path.breakpoints(rs, i)
    low = min(heights)
    if low > -1:
        return None
    segments = list(path.segments)
    k1 = heights.index(low)
    k = k1 - 1
    while heights[k] < low + 1:
        k -= 1
    # crossing of level low+1 inside segment k
    fraction = (heights[k] - (low + 1)) / (heights[k] - heights[k + 1])
    if fraction:
        segments = _split(segments, k, fraction)
        k1 += 1
        k += 1
    return _canonical(_reflect(rs, i, segments, k, k1))


def littelmann_f(rs, i, path):
    """Lowering root operator, None when the path is i-lowest"""
    times, heights = path.breakpoints(rs, i)
    low = min(heights)
    if heights[-1] - low < 1:
        return None
    segments = list(path.segments)
    k0 = len(heights) - 1 - heights[::-1].index(low)
    k = k0 + 1
    while heights[k] < low + 1:
        k += 1
    fraction = ((low + 1) - heights[k - 1]) / (heights[k] - heights[k - 1])
    if fraction != 1:
        segments = _split(segments, k - 1, fraction)
    return _canonical(_reflect(rs, i, segments, k0, k))


class Crystal:
    """Finite crystal on labels 0..n-1"""

    def __init__(self, rs, keys, weights, e, f, name='', factors=()):
        self.rs = rs
        self.keys = list(keys)
        self.weights = [as_weight(w) for w in weights]
        self._e = {i: list(e[i]) for i in rs.nodes}
        self._f = {i: list(f[i]) for i in rs.nodes}
        self.name = name
        self.factors = tuple(factors)
        self._index = None
        self._eps = {}
        self._phi = {}

    def __len__(self):
        return len(self.keys)

    def __repr__(self):
        return f"<Crystal {self.name or '?'} of {self.rs.type_label}, {len(self)} elements>"

    @property
    def labels(self):
        return range(len(self.keys))

    @property
    def nodes(self):
        return self.rs.nodes

    def index(self, key):
        if self._index is None:
            self._index = {k: b for b, k in enumerate(self.keys)}
        try:
            return self._index[key]
        except KeyError as exc:
            raise CrystalError(f"{key} is not an element of {self.name}") from exc

    def wt(self, b):
        return self.weights[b]

    def e(self, i, b):
        return self._e[i][b]

    def f(self, i, b):
        return self._f[i][b]

    def epsilon(self, i, b):
        cache = self._eps.setdefault(i, {})
        if b not in cache:
            count, c = 0, self._e[i][b]
            while c is not None:
                count, c = count + 1, self._e[i][c]
            cache[b] = count
        return cache[b]

    def phi(self, i, b):
        cache = self._phi.setdefault(i, {})
        if b not in cache:
            count, c = 0, self._f[i][b]
            while c is not None:
                count, c = count + 1, self._f[i][c]
            cache[b] = count
        return cache[b]

    def is_highest(self, b):
        return all(self._e[i][b] is None for i in self.nodes)

    def highest_weight_elements(self):
        return [b for b in self.labels if self.is_highest(b)]

    def lowest_weight_elements(self):
        return [b for b in self.labels if all(self._f[i][b] is None for i in self.nodes)]

    def edges(self):
        """f-edges as (source, target, node)"""
        for i in self.nodes:
            for b, c in enumerate(self._f[i]):
                if c is not None:
                    yield b, c, i

    def graph(self):
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.labels)
        for b, c, i in self.edges():
            g.add_edge(b, c, i=i)
        return g

    def string(self, i, b):
        """Full i-string through b, from its top to its bottom"""
        while self._e[i][b] is not None:
            b = self._e[i][b]
        chain = [b]
        while self._f[i][chain[-1]] is not None:
            chain.append(self._f[i][chain[-1]])
        return chain

    def to_json(self):
        return {
            'name': self.name,
            'root_system': self.rs.to_json(),
            'elements': [{'id': b, 'wt': list(self.weights[b]), 'key': str(self.keys[b])}
                         for b in self.labels],
            'edges': [{'from': b, 'to': c, 'i': i} for b, c, i in self.edges()],
        }


@dataclass
class MultiplicitySet:
    parent: Crystal
    mu: tuple
    members: list = field(default_factory=list)

    def __len__(self):
        return len(self.members)


def _invert(rs, f, size):
    e = {i: [None] * size for i in rs.nodes}
    for i in rs.nodes:
        for b, c in enumerate(f[i]):
            if c is not None:
                if e[i][c] is not None:
                    raise CrystalError(f"f_{i} is not injective at {c}")
                e[i][c] = b
    return e


@lru_cache(maxsize=None)
def generate_crystal(rs, lam):
    """B(lam) as the f-closure of the straight line path to lam

    Labels follow breadth-first order from the highest-weight element with
    children visited in node order.
    """
    lam = as_weight(lam)
    if len(lam) != rs.rank or not rs.is_dominant(lam):
        raise CrystalError(f"Weight ({format_weight(lam)}) is not dominant for {rs.type_label}")
    start = PathElement.straight(lam)
    keys, index = [start], {start: 0}
    f = {i: [] for i in rs.nodes}
    queue = deque([start])
    while queue:
        path = queue.popleft()
        for i in rs.nodes:
            child = littelmann_f(rs, i, path)
            if child is not None and child not in index:
                index[child] = len(keys)
                keys.append(child)
                queue.append(child)
            f[i].append(None if child is None else index[child])
    size = len(keys)
    expected = weyl_dimension(rs, lam)
    if size != expected:
        raise CrystalError(
            f"B({format_weight(lam)}) has {size} elements, Weyl dimension is {expected}")
    e = _invert(rs, f, size)
    weights = [path.endpoint() for path in keys]
    log.debug("B(%s) of %s: %d elements", format_weight(lam), rs.type_label, size)
    return Crystal(rs, keys, weights, e, f, name=f"B({format_weight(lam)})")


def tensor(b1, b2):
    """B1 (x) B2 with label a*|B2|+b for the pair (a, b)

    e_i acts on the first factor when eps_i(a) > phi_i(b) and f_i when
    eps_i(a) >= phi_i(b), on the second factor otherwise.
    """
    if b1.rs != b2.rs:
        raise CrystalError(f"Cannot tensor {b1.rs.type_label} and {b2.rs.type_label} crystals")
    rs, n2 = b1.rs, len(b2)
    size = len(b1) * n2
    e = {i: [None] * size for i in rs.nodes}
    f = {i: [None] * size for i in rs.nodes}
    keys, weights = [], []
    for a in b1.labels:
        for b in b2.labels:
            keys.append(TensorElement((a, b)))
            weights.append(tuple(x + y for x, y in zip(b1.wt(a), b2.wt(b))))
            label = a * n2 + b
            for i in rs.nodes:
                eps, phi = b1.epsilon(i, a), b2.phi(i, b)
                if eps > phi:
                    c = b1.e(i, a)
                    e[i][label] = None if c is None else c * n2 + b
                else:
                    c = b2.e(i, b)
                    e[i][label] = None if c is None else a * n2 + c
                if eps >= phi:
                    c = b1.f(i, a)
                    f[i][label] = None if c is None else c * n2 + b
                else:
                    c = b2.f(i, b)
                    f[i][label] = None if c is None else a * n2 + c
    return Crystal(rs, keys, weights, e, f, name=f"{b1.name}x{b2.name}", factors=(b1, b2))


def tensor_product(*crystals):
    """Flat tensor product; element keys are tuples of factor labels"""
    if not crystals:
        raise CrystalError("tensor_product needs at least one factor")
    result = crystals[0]
    for factor in crystals[1:]:
        result = tensor(result, factor)
    sizes = [len(c) for c in crystals]
    keys = []
    for label in result.labels:
        digits = []
        for n in reversed(sizes):
            label, d = divmod(label, n)
            digits.append(d)
        keys.append(TensorElement(tuple(reversed(digits))))
    return Crystal(result.rs, keys, result.weights, result._e, result._f,
                   name='x'.join(c.name for c in crystals), factors=crystals)


def flat_label(crystals, labels):
    label = 0
    for c, b in zip(crystals, labels):
        label = label * len(c) + b
    return label


def disjoint_union(crystals, name=''):
    """Disjoint union with keys (summand index, key)"""
    if not crystals:
        raise CrystalError("disjoint_union needs at least one summand")
    rs = crystals[0].rs
    keys, weights = [], []
    e = {i: [] for i in rs.nodes}
    f = {i: [] for i in rs.nodes}
    offset = 0
    for k, c in enumerate(crystals):
        if c.rs != rs:
            raise CrystalError("disjoint_union of crystals over different root systems")
        keys.extend((k, key) for key in c.keys)
        weights.extend(c.weights)
        for i in rs.nodes:
            e[i].extend(None if x is None else x + offset for x in c._e[i])
            f[i].extend(None if x is None else x + offset for x in c._f[i])
        offset += len(c)
    return Crystal(rs, keys, weights, e, f,
                   name=name or '+'.join(c.name for c in crystals), factors=crystals)


def components(crystal):
    """Connected components as (highest-weight label, frozenset of labels)

    Raises NonNormalCrystal when a component does not have exactly one
    highest-weight element.
    """
    found = []
    for comp in nx.weakly_connected_components(crystal.graph()):
        sources = sorted(b for b in comp if crystal.is_highest(b))
        if len(sources) != 1:
            raise NonNormalCrystal(
                f"Component of {crystal.name} has {len(sources)} highest-weight elements",
                witness=sorted(comp)[:8])
        found.append((sources[0], frozenset(comp)))
    found.sort(key=lambda item: item[0])
    return found


def multiplicity_set(crystal, mu):
    mu = as_weight(mu)
    members = [b for b in crystal.labels
               if crystal.wt(b) == mu and crystal.is_highest(b)]
    return MultiplicitySet(crystal, mu, members)


def restrict(crystal, subset):
    """B_J: same elements, operators for nodes in J, weights projected"""
    subset = frozenset(subset)
    rs_j = crystal.rs.parabolic(subset)
    weights = [crystal.rs.project(w, subset) for w in crystal.weights]
    e = {i: crystal._e[i] for i in rs_j.nodes}
    f = {i: crystal._f[i] for i in rs_j.nodes}
    name = f"{crystal.name}|{''.join(map(str, rs_j.nodes))}"
    return Crystal(rs_j, crystal.keys, weights, e, f, name=name)


def match_components(crystal, b, other, c):
    """Unique isomorphism between the components of b and of c

    Both labels are expected to be highest-weight elements.  Returns a
    CheckResult whose data is the label mapping.
    """
    if crystal.rs.nodes != other.rs.nodes:
        return CheckResult(False, witness={'reason': 'node sets differ'})
    mapping, queue = {b: c}, deque([(b, c)])
    while queue:
        x, y = queue.popleft()
        if crystal.wt(x) != other.wt(y):
            return CheckResult(False, witness={'element': x, 'image': y, 'reason': 'weight'})
        for i in crystal.nodes:
            for ops in ((crystal._f[i], other._f[i]), (crystal._e[i], other._e[i])):
                nx_, ny = ops[0][x], ops[1][y]
                if (nx_ is None) != (ny is None):
                    return CheckResult(False, witness={
                        'element': x, 'image': y, 'node': i, 'reason': 'operator'})
                if nx_ is None:
                    continue
                if nx_ in mapping:
                    if mapping[nx_] != ny:
                        return CheckResult(False, witness={
                            'element': nx_, 'image': ny, 'node': i, 'reason': 'conflict'})
                    continue
                mapping[nx_] = ny
                queue.append((nx_, ny))
    if len(set(mapping.values())) != len(mapping):
        return CheckResult(False, witness={'reason': 'not injective'})
    return CheckResult(True, data=mapping)


def check_axioms(crystal):
    """Crystal axioms and semi-normality, with the first failure as witness"""
    rs = crystal.rs
    for b in crystal.labels:
        for i in crystal.nodes:
            root = rs.simple_root(i)
            up, down = crystal.e(i, b), crystal.f(i, b)
            if up is not None:
                if crystal.wt(up) != tuple(x + y for x, y in zip(crystal.wt(b), root)):
                    return CheckResult(False, witness={'element': b, 'node': i, 'axiom': 'wt(e b)'})
                if crystal.f(i, up) != b:
                    return CheckResult(False, witness={'element': b, 'node': i, 'axiom': 'f e b'})
            if down is not None:
                if crystal.wt(down) != tuple(x - y for x, y in zip(crystal.wt(b), root)):
                    return CheckResult(False, witness={'element': b, 'node': i, 'axiom': 'wt(f b)'})
                if crystal.e(i, down) != b:
                    return CheckResult(False, witness={'element': b, 'node': i, 'axiom': 'e f b'})
            if crystal.phi(i, b) - crystal.epsilon(i, b) != rs.pairing(i, crystal.wt(b)):
                return CheckResult(False, witness={
                    'element': b, 'node': i, 'axiom': 'phi - epsilon',
                    'phi': crystal.phi(i, b), 'epsilon': crystal.epsilon(i, b)})
    return CheckResult(True)


def check_normal(crystal):
    """Semi-normality plus normality of every rank one and two restriction"""
    result = check_axioms(crystal)
    if not result:
        return result
    for subset in crystal.rs.connected_subsets():
        if len(subset) > 2:
            continue
        part = restrict(crystal, subset)
        try:
            comps = components(part)
        except NonNormalCrystal as exc:
            return CheckResult(False, witness={'subset': sorted(subset), 'component': exc.witness})
        for top, members in comps:
            mu = part.wt(top)
            if not part.rs.is_dominant(mu):
                return CheckResult(False, witness={'subset': sorted(subset), 'element': top,
                                                   'reason': 'non-dominant source'})
            model = generate_crystal(part.rs, mu)
            matched = match_components(part, top, model, 0)
            if not matched or len(members) != len(model):
                return CheckResult(False, witness={'subset': sorted(subset), 'element': top,
                                                   'detail': matched.witness})
    return CheckResult(True)


def component_isomorphism(crystal, other):
    """Isomorphism between two normal crystals matching components in
    label order of their highest-weight elements with equal weights"""
    pending = {}
    for top, _ in components(other):
        pending.setdefault(other.wt(top), []).append(top)
    mapping = {}
    for top, _ in components(crystal):
        targets = pending.get(crystal.wt(top))
        if not targets:
            return CheckResult(False, witness={'element': top, 'reason': 'no target component'})
        matched = match_components(crystal, top, other, targets.pop(0))
        if not matched:
            return matched
        mapping.update(matched.data)
    if any(pending.values()) or len(mapping) != len(other):
        return CheckResult(False, witness={'reason': 'component counts differ'})
    return CheckResult(True, data=mapping)
