# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Schutzenberger involutions, the crystal commutor and cactus group actions.

from dataclasses import dataclass, field
import itertools
import logging
import math
import re

from cactus_crystals.crystal import (
    CheckResult,
    components,
    check_axioms,
    flat_label,
    multiplicity_set,
    restrict,
    tensor,
    tensor_product,
)
from cactus_crystals.errors import CactusWordError, SchutzenbergerError
from cactus_crystals.rootdata import longest_element, theta_involution

log = logging.getLogger(__name__)


@dataclass
class CrystalPermutation:
    """Bijection between the labels of two crystals"""
    domain: object
    codomain: object
    mapping: tuple
    flags: dict = field(default_factory=dict)

    def __call__(self, b):
        return self.mapping[b]

    def __len__(self):
        return len(self.mapping)

    def compose(self, other):
        """self after other"""
        if len(other.codomain) != len(self.domain) or other.codomain.name != self.domain.name:
            raise CactusWordError(
                f"Cannot compose {self.domain.name} map after {other.codomain.name} map")
        mapping = tuple(self.mapping[x] for x in other.mapping)
        return CrystalPermutation(other.domain, self.codomain, mapping)

    def inverse(self):
        inverse = [None] * len(self.mapping)
        for b, c in enumerate(self.mapping):
            inverse[c] = b
        return CrystalPermutation(self.codomain, self.domain, tuple(inverse))

    def is_identity(self):
        return all(b == c for b, c in enumerate(self.mapping))

    def to_json(self):
        return {'domain': self.domain.name, 'codomain': self.codomain.name,
                'mapping': list(self.mapping)}


def identity(crystal):
    return CrystalPermutation(crystal, crystal, tuple(crystal.labels))


def check_morphism(perm):
    """Does the bijection commute with wt, e_i and f_i"""
    src, dst = perm.domain, perm.codomain
    for b in src.labels:
        c = perm(b)
        if src.wt(b) != dst.wt(c):
            return CheckResult(False, witness={'element': b, 'image': c, 'reason': 'weight'})
        for i in src.nodes:
            for name, op_src, op_dst in (('e', src.e, dst.e), ('f', src.f, dst.f)):
                x = op_src(i, b)
                expected = None if x is None else perm(x)
                if op_dst(i, c) != expected:
                    return CheckResult(False, witness={
                        'element': b, 'image': c, 'operator': f"{name}_{i}"})
    return CheckResult(True)


def _lowest(crystal, members):
    lows = [b for b in members
            if all(crystal.f(i, b) is None for i in crystal.nodes)]
    if len(lows) != 1:
        raise SchutzenbergerError(
            f"Component of {crystal.name} has {len(lows)} lowest-weight elements")
    return lows[0]


def schutzenberger(crystal, verify=True):
    """Schutzenberger involution xi_B

    Each element is raised to its highest-weight element using the smallest
    available node at every step; xi maps it to the image of the lowest
    element under the mirrored raising word with nodes twisted by theta.
    """
    if not check_axioms(crystal):
        raise SchutzenbergerError(f"{crystal.name} is not semi-normal")
    rs = crystal.rs
    theta = theta_involution(rs, rs.nodes)
    image = [None] * len(crystal)
    for top, members in components(crystal):
        image[top] = _lowest(crystal, members)
        pending = [top]
        while pending:
            c = pending.pop()
            for i in rs.nodes:
                b = crystal.f(i, c)
                if b is None or image[b] is not None:
                    continue
                # only follow b from its canonical raising step
                j = next(k for k in rs.nodes if crystal.e(k, b) is not None)
                if j != i:
                    continue
                target = crystal.e(theta[i], image[c])
                if target is None:
                    raise SchutzenbergerError(
                        f"e_{theta[i]} undefined while lowering in {crystal.name}")
                image[b] = target
                pending.append(b)
    if any(x is None for x in image):
        raise SchutzenbergerError(f"Raising words do not reach every element of {crystal.name}")
    perm = CrystalPermutation(crystal, crystal, tuple(image), {'involution': True})
    if verify:
        _verify_schutzenberger(crystal, perm, theta)
    log.debug("xi on %s: %d fixed points", crystal.name,
              sum(1 for b, c in enumerate(image) if b == c))
    return perm


def _verify_schutzenberger(crystal, perm, theta):
    rs = crystal.rs
    w0 = longest_element(rs, rs.nodes)
    for b in crystal.labels:
        c = perm(b)
        if perm(c) != b:
            raise SchutzenbergerError(f"xi is not an involution at {b} in {crystal.name}")
        if crystal.wt(c) != w0.act(rs, crystal.wt(b)):
            raise SchutzenbergerError(f"wt(xi {b}) is not w0 wt({b}) in {crystal.name}")
        for i in rs.nodes:
            x = crystal.f(theta[i], b)
            if crystal.e(i, c) != (None if x is None else perm(x)):
                raise SchutzenbergerError(f"e_{i} xi != xi f_theta({i}) at {b}")
            x = crystal.e(theta[i], b)
            if crystal.f(i, c) != (None if x is None else perm(x)):
                raise SchutzenbergerError(f"f_{i} xi != xi e_theta({i}) at {b}")


def string_reflection(crystal, i):
    """Reflect every i-string of the crystal"""
    image = [None] * len(crystal)
    for b in crystal.labels:
        if image[b] is not None:
            continue
        chain = crystal.string(i, b)
        for c, d in zip(chain, reversed(chain)):
            image[c] = d
    return CrystalPermutation(crystal, crystal, tuple(image), {'involution': True})


def partial_schutzenberger(crystal, subset):
    """xi_J, the Schutzenberger involution of the restriction B_J"""
    subset = frozenset(subset)
    if not crystal.rs.connected(subset):
        raise SchutzenbergerError(f"Node subset {sorted(subset)} is not connected")
    if subset == frozenset(crystal.nodes):
        return schutzenberger(crystal)
    xi = schutzenberger(restrict(crystal, subset))
    perm = CrystalPermutation(crystal, crystal, xi.mapping, {'involution': True})
    if len(subset) == 1:
        (i,) = subset
        if string_reflection(crystal, i).mapping != perm.mapping:
            raise SchutzenbergerError(f"xi_{i} differs from the {i}-string reflection")
    return perm


def commutor(b1, b2, verify=True):
    """sigma(b1, b2) = xi_{B2 x B1}(xi(b2), xi(b1))"""
    t12, t21 = tensor(b1, b2), tensor(b2, b1)
    xi1, xi2, xi21 = schutzenberger(b1), schutzenberger(b2), schutzenberger(t21)
    n1, n2 = len(b1), len(b2)
    mapping = tuple(xi21(xi2(label % n2) * n1 + xi1(label // n2)) for label in t12.labels)
    perm = CrystalPermutation(t12, t21, mapping)
    if verify:
        morphism = check_morphism(perm)
        if not morphism:
            raise SchutzenbergerError(f"Commutor is not a crystal map: {morphism.witness}")
        perm.flags['morphism'] = True
    return perm


def flip_commutor(b1, b2):
    """Plain swap of the factors, which is not a crystal map in general"""
    t12, t21 = tensor(b1, b2), tensor(b2, b1)
    n1, n2 = len(b1), len(b2)
    mapping = tuple((label % n2) * n1 + label // n2 for label in t12.labels)
    return CrystalPermutation(t12, t21, mapping, {'morphism': bool(check_morphism(
        CrystalPermutation(t12, t21, mapping)))})


def check_symmetry(b1, b2):
    """sigma_{B2,B1} sigma_{B1,B2} = id"""
    there, back = commutor(b1, b2), commutor(b2, b1)
    for b in there.domain.labels:
        if back(there(b)) != b:
            return CheckResult(False, witness={'element': b})
    return CheckResult(True)


_INTERNAL = re.compile(r'^s(?:(I)|(\d+)|((?:_\d+)+))$')
_EXTERNAL = re.compile(r'^s(?:(\d)(\d)|_(\d+)_(\d+))$')


@dataclass(frozen=True)
class CactusWord:
    """Product of cactus generators; letters are node sets (internal) or
    (p, q) pairs (external) and the rightmost letter acts first"""
    letters: tuple
    flavor: str = 'internal'

    def reduced(self):
        stack = []
        for letter in self.letters:
            if stack and stack[-1] == letter:
                stack.pop()
            else:
                stack.append(letter)
        return CactusWord(tuple(stack), self.flavor)

    def __mul__(self, other):
        if self.flavor != other.flavor:
            raise CactusWordError("Cannot multiply internal and external words")
        return CactusWord(self.letters + other.letters, self.flavor)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return 'e'
        return ' '.join(_format_letter(letter, self.flavor) for letter in self.letters)


def _format_letter(letter, flavor):
    items = sorted(letter) if flavor == 'internal' else list(letter)
    if all(x < 10 for x in items) and (flavor == 'internal' or len(items) == 2):
        return 's' + ''.join(map(str, items))
    return 's_' + '_'.join(map(str, items))


def parse_word(text, flavor='internal', rs=None, n=None, reduce=True):
    """Parse words like "s12 s1" (internal) or "s13*s12" (external)

    Letters are separated by whitespace or '*'; "e" or an empty string is the
    identity.  For internal words every node set must be connected in rs, for
    external words 1 <= p < q <= n.
    """
    letters = []
    for token in re.split(r'[\s*]+', text.strip()):
        if not token or token == 'e':
            continue
        if flavor == 'internal':
            match = _INTERNAL.match(token)
            if not match:
                raise CactusWordError(f"Invalid internal generator: {token}")
            if match.group(1):
                if rs is None:
                    raise CactusWordError("sI needs a root system")
                nodes = frozenset(rs.nodes)
            elif match.group(2):
                nodes = frozenset(int(c) for c in match.group(2))
            else:
                nodes = frozenset(int(c) for c in match.group(3).split('_')[1:])
            if rs is not None and (not nodes <= set(rs.nodes) or not rs.connected(nodes)):
                raise CactusWordError(f"{token}: node set is not a connected subdiagram")
            letters.append(nodes)
        elif flavor == 'external':
            match = _EXTERNAL.match(token)
            if not match:
                raise CactusWordError(f"Invalid external generator: {token}")
            p, q = (int(x) for x in (match.group(1, 2) if match.group(1) else match.group(3, 4)))
            if not 1 <= p < q or (n is not None and q > n):
                raise CactusWordError(f"{token}: need 1 <= p < q <= {n}")
            letters.append((p, q))
        else:
            raise CactusWordError(f"Unknown word flavor: {flavor}")
    word = CactusWord(tuple(letters), flavor)
    return word.reduced() if reduce else word


def internal_cactus_action(word, crystal):
    """s_J acts by xi_J; checks wt(g b) = w(g) wt(b) for the image in W"""
    rs = crystal.rs
    perm = identity(crystal)
    weyl = None
    cache = {}
    for nodes in reversed(word.letters):
        if nodes not in cache:
            cache[nodes] = partial_schutzenberger(crystal, nodes)
        perm = cache[nodes].compose(perm)
        w0j = longest_element(rs, nodes)
        weyl = w0j if weyl is None else w0j * weyl
    for b in crystal.labels:
        expected = crystal.wt(b) if weyl is None else weyl.act(rs, crystal.wt(b))
        if crystal.wt(perm(b)) != expected:
            raise SchutzenbergerError(f"Cactus action does not cover the Weyl action at {b}")
    perm.flags['weyl_word'] = () if weyl is None else weyl.letters
    return perm


def _block_factors(factors, p, q):
    return list(factors[:p - 1]) + list(reversed(factors[p - 1:q])) + list(factors[q:])


def _apply_block(domain, codomain, factors, p, q, block_map):
    mapping = []
    for b in domain.labels:
        digits = list(domain.keys[b].factors)
        block = block_map(tuple(digits[p - 1:q]))
        mapping.append(flat_label(codomain.factors, digits[:p - 1] + list(block) + digits[q:]))
    return tuple(mapping)


def _unflatten(crystals, label):
    digits = []
    for c in reversed(crystals):
        label, d = divmod(label, len(c))
        digits.append(d)
    return tuple(reversed(digits))


def generator_action(factors, p, q, method='formula'):
    """Action of s_pq on the flat tensor product of the factors

    The formula reverses the block p..q, applies xi to every factor of the
    block and then xi of the reversed block tensor.  The 'iterated' method
    builds the same map from commutors.
    """
    n = len(factors)
    if not 1 <= p < q <= n:
        raise CactusWordError(f"s{p}{q} out of range for {n} factors")
    domain = tensor_product(*factors)
    target = _block_factors(factors, p, q)
    codomain = tensor_product(*target)
    block = factors[p - 1:q]
    if method == 'formula':
        xis = [schutzenberger(c) for c in block]
        rev_block = list(reversed(block))
        xi_block = schutzenberger(tensor_product(*rev_block))

        def block_map(digits):
            flipped = [xi(d) for xi, d in zip(reversed(xis), reversed(digits))]
            return _unflatten(rev_block, xi_block(flat_label(rev_block, flipped)))
    elif method == 'iterated':
        table = _iterated_block(list(block))

        def block_map(digits):
            return _unflatten(list(reversed(block)), table[flat_label(block, digits)])
    else:
        raise CactusWordError(f"Unknown external action method: {method}")
    mapping = _apply_block(domain, codomain, factors, p, q, block_map)
    return CrystalPermutation(domain, codomain, mapping)


def _iterated_block(block):
    """s_{1,m} on a block as flat-label table, by the coboundary recursion"""
    if len(block) == 1:
        return tuple(range(len(block[0])))
    head = block[:-1]
    last = block[-1]
    inner = _iterated_block(head)
    rev_head = list(reversed(head))
    sigma = commutor(tensor_product(*rev_head), last)
    n_last = len(last)
    table = []
    for label in range(math.prod(len(c) for c in block)):
        x, y = divmod(label, n_last)
        table.append(sigma(inner[x] * n_last + y))
    return tuple(table)


def iterated_commutor_action(factors, p, q):
    return generator_action(factors, p, q, method='iterated')


def external_cactus_action(word, factors, method='formula'):
    """Action of an external word on B_1 x ... x B_n, rightmost letter first"""
    factors = list(factors)
    perm = identity(tensor_product(*factors))
    for p, q in reversed(word.letters):
        step = generator_action(factors, p, q, method)
        perm = step.compose(perm)
        factors = _block_factors(factors, p, q)
    perm.flags['factors'] = [c.name for c in factors]
    return perm


def check_external_formula(factors):
    """Compare the closed formula with the iterated commutor for every s_pq"""
    n = len(factors)
    for p, q in itertools.combinations(range(1, n + 1), 2):
        formula = generator_action(factors, p, q, 'formula')
        iterated = generator_action(factors, p, q, 'iterated')
        if formula.mapping != iterated.mapping:
            diff = next(b for b, (x, y) in enumerate(zip(formula.mapping, iterated.mapping))
                        if x != y)
            return CheckResult(False, witness={'generator': f"s{p}{q}", 'element': diff})
    return CheckResult(True)


def internal_relations(rs):
    """Defining relations of the internal cactus group as word pairs"""
    subsets = rs.connected_subsets()
    relations = []
    for j in subsets:
        relations.append((CactusWord((j, j)), CactusWord(()), 'involution'))
    for k in subsets:
        theta = theta_involution(rs, k)
        for j in subsets:
            if j < k:
                image = frozenset(theta[x] for x in j)
                relations.append((CactusWord((k, j)), CactusWord((image, k)), 'conjugation'))
    for j, k in itertools.combinations(subsets, 2):
        if not (j & k) and not rs.connected(j | k):
            relations.append((CactusWord((j, k)), CactusWord((k, j)), 'commutation'))
    return relations


def external_relations(n):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    relations = []
    for p, q in pairs:
        relations.append((CactusWord(((p, q), (p, q)), 'external'),
                          CactusWord((), 'external'), 'involution'))
    for p, q in pairs:
        for k, l in pairs:
            if p <= k < l <= q and (k, l) != (p, q):
                relations.append((CactusWord(((p, q), (k, l)), 'external'),
                                  CactusWord(((p + q - l, p + q - k), (p, q)), 'external'),
                                  'conjugation'))
    for (p, q), (k, l) in itertools.combinations(pairs, 2):
        if q < k or l < p:
            relations.append((CactusWord(((p, q), (k, l)), 'external'),
                              CactusWord(((k, l), (p, q)), 'external'), 'commutation'))
    return relations


def check_relations(relations, act):
    """Evaluate both sides of every relation with act(word)"""
    checked = 0
    for lhs, rhs, kind in relations:
        left, right = act(lhs), act(rhs)
        if left.mapping != right.mapping or left.codomain.name != right.codomain.name:
            return CheckResult(False, witness={'lhs': str(lhs), 'rhs': str(rhs), 'kind': kind})
        checked += 1
    return CheckResult(True, data={'relations': checked})


def _braid_order(rs, i, j):
    product = rs.entry(i, j) * rs.entry(j, i)
    return {0: 2, 1: 3, 2: 4, 3: 6}[product]


def check_braid_relations(crystal):
    """Single-node involutions xi_i satisfy the braid relations of W"""
    rs = crystal.rs
    xi = {i: string_reflection(crystal, i) for i in rs.nodes}
    for i, j in itertools.combinations(rs.nodes, 2):
        m = _braid_order(rs, i, j)
        left, right = identity(crystal), identity(crystal)
        for k in range(m):
            left = xi[(i, j)[k % 2]].compose(left)
            right = xi[(j, i)[k % 2]].compose(right)
        if left.mapping != right.mapping:
            return CheckResult(False, witness={'nodes': (i, j), 'order': m})
    return CheckResult(True)


def check_weight_determined(crystal):
    """On a multiplicity-free crystal xi(b) is the element of weight w0 wt(b)"""
    rs = crystal.rs
    by_weight = {}
    for b in crystal.labels:
        by_weight.setdefault(crystal.wt(b), []).append(b)
    if any(len(v) > 1 for v in by_weight.values()):
        return CheckResult(False, witness={'reason': 'not multiplicity free'})
    w0 = longest_element(rs, rs.nodes)
    xi = schutzenberger(crystal)
    for b in crystal.labels:
        if [xi(b)] != by_weight[w0.act(rs, crystal.wt(b))]:
            return CheckResult(False, witness={'element': b})
    return CheckResult(True)


def check_hexagon(b1, b2, b3, commutor=commutor):
    """Both composites B1 B2 B3 -> B3 B2 B1 of the coboundary hexagon

    Every commutor involved must also be a crystal map.
    """
    n1, n2, n3 = len(b1), len(b2), len(b3)
    s12 = commutor(b1, b2)
    s23 = commutor(b2, b3)
    s21_3 = commutor(tensor(b2, b1), b3)
    s1_32 = commutor(b1, tensor(b3, b2))
    for sigma in (s12, s23, s21_3, s1_32):
        morphism = check_morphism(sigma)
        if not morphism:
            return CheckResult(False, witness={'map': sigma.domain.name,
                                               'detail': morphism.witness})
    for label in range(n1 * n2 * n3):
        x, c = divmod(label, n3)
        left = s21_3(s12(x) * n3 + c)
        a, y = divmod(label, n2 * n3)
        right = s1_32(a * (n3 * n2) + s23(y))
        if left != right:
            return CheckResult(False, witness={'element': label, 'left': left, 'right': right})
    return CheckResult(True)


def check_multiplicity_preserved(crystal_factor, n, mu):
    """s_1n on B^{(x)n} maps the multiplicity set of mu to itself"""
    factors = [crystal_factor] * n
    perm = generator_action(factors, 1, n)
    members = set(multiplicity_set(perm.domain, mu).members)
    if {perm(b) for b in members} != members:
        return CheckResult(False, witness={'mu': mu})
    return CheckResult(True, data=sorted(members))
