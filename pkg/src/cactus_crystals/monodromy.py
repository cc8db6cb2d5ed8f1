# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Monodromy of eigenlines compared with crystal cactus actions.

"""Monodromy

External generators act on the singular eigenlines of the Gaudin model
E(lambda,...,lambda)^mu and are compared with the crystal action on the
highest-weight elements of weight mu, both labelled by chains of partial
highest weights.  Internal generators act on the eigenlines of the shift of
argument family E_chi(lambda), which carry a crystal structure built at the
walls of the Weyl chamber.
"""

from dataclasses import dataclass, field
import logging
import math

import numpy as np

from cactus_crystals.cactus import (
    CrystalPermutation,
    check_morphism,
    commutor,
    generator_action,
    partial_schutzenberger,
    schutzenberger,
)
from cactus_crystals.crystal import (
    Crystal,
    check_normal,
    component_isomorphism,
    disjoint_union,
    flat_label,
    generate_crystal,
    multiplicity_set,
    tensor,
    tensor_product,
)
from cactus_crystals.eigenlines import (
    EigenlineSet,
    MonodromyResult,
    eigenlines,
    flip_matching,
    match_lines,
    transport,
)
from cactus_crystals.errors import (
    FamilyError,
    HandoffError,
    InconclusiveError,
)
from cactus_crystals.families import (
    dynamical_hamiltonians,
    gaudin_hamiltonians,
    shift_of_argument_family,
    single_site_family,
)
from cactus_crystals.moduli import (
    cactus_path_schedule,
    is_regular,
    pentagon_schedule,
    w0_coweight,
    wall_point,
)
from cactus_crystals.representations import (
    TensorSpace,
    build_irrep,
    casimir_value,
    embed,
    root_system_of,
    weyl_lift,
)
from cactus_crystals.rootdata import format_weight, longest_element
from cactus_crystals.settings import Tolerances

log = logging.getLogger(__name__)

DEFAULT_CHI = {'sl2': (1.0,), 'sl3': (1.0, 1.0)}

# relative norm below which e_i or f_i kills a wall eigenline
ZERO_LINE = 1e-8


def _rng(seed):
    return np.random.default_rng(seed)


def _full_block(space):
    return np.eye(space.dim)


def _segment(start, end):
    start, end = np.asarray(start, float), np.asarray(end, float)
    return lambda t: tuple((1 - t) * start + t * end)


# External side


@dataclass
class ExternalRun:
    space: TensorSpace
    mu: tuple
    lines: object
    chains: list
    result: MonodromyResult


def crystal_chains(factors, members):
    """Chain of partial highest weights of each element of a tensor product

    For b = b_1 x ... x b_n the k-th entry is the highest weight of the
    component of b_1 x ... x b_k, for k = 2..n.
    """
    full = tensor_product(*factors)
    prefixes = {k: tensor_product(*factors[:k]) for k in range(2, len(factors))}
    prefixes[len(factors)] = full
    chains = []
    for b in members:
        digits = full.keys[b].factors
        chain = []
        for k in range(2, len(factors) + 1):
            part = prefixes[k]
            c = flat_label(factors[:k], digits[:k])
            while not part.is_highest(c):
                c = next(part.e(i, c) for i in part.nodes if part.e(i, c) is not None)
            chain.append(tuple(part.wt(c)))
        chains.append(tuple(chain))
    return chains


def _caterpillar_point(z, eps):
    n = len(z)
    span = z[-1] - z[0]
    return tuple(z[0] + (span * eps ** (n - 1 - k) if k else 0.0) for k in range(n))


def caterpillar_labels(space, lines, z, block, tol=None, rng=None, eps=1e-2):
    """Chains (nu_2, ..., nu_n) labelling singular eigenlines

    The lines are transported to the caterpillar point ((12)3)...n, where
    the partial Casimirs of the first k factors act by (nu_k, nu_k + 2 rho).
    """
    tol = tol or Tolerances()
    n = len(space)
    rs = space.rs
    if n == 1:
        return [()] * len(lines)
    target = _caterpillar_point(z, eps)
    path = _segment(z, target)
    moved = transport(lambda t: gaudin_hamiltonians(space, path(t)), lines, block,
                      tol, rng, label='caterpillar').lines
    candidates = {}
    for k in range(2, n + 1):
        prefix = TensorSpace(space.irreps[:k])
        candidates[k] = sorted(prefix.decomposition())
    chains = []
    for v in moved.vectors.T:
        chain = []
        for k in range(2, n + 1):
            value = v @ space.casimir(range(k)) @ v
            ranked = sorted(candidates[k], key=lambda nu: abs(casimir_value(rs, nu) - value))
            best = abs(casimir_value(rs, ranked[0]) - value)
            if len(ranked) > 1 and best >= abs(casimir_value(rs, ranked[1]) - value) / 2:
                raise InconclusiveError(
                    f"Partial Casimir {value:.4f} of {k} factors does not single out a "
                    f"highest weight", location=list(target))
            chain.append(tuple(ranked[0]))
        chains.append(tuple(chain))
    if len(set(chains)) != len(chains):
        raise InconclusiveError("Caterpillar chains do not separate the eigenlines",
                                location=list(target))
    return chains


@dataclass
class Handoff:
    keys: list
    fidelity: float
    inner: dict = field(default_factory=dict)
    delta: float = None


def boundary_handoff(space, lines, z, cluster, mu, tol=None, rng=None):
    """Match eigenlines near a cluster with the product eigenbasis

    The product basis is (outer Gaudin eigenlines, the cluster replaced by
    V(nu) at its centre) times (inner eigenlines of the normalized cluster,
    turned into intertwiners V(nu) -> cluster).  Each line gets the key
    (nu, m, o) of its best match; inner[nu] is the permutation of inner
    lines induced by reversing the cluster.
    """
    tol = tol or Tolerances()
    p, q = cluster[0], cluster[-1]
    inner_space = TensorSpace(space.irreps[p - 1:q])
    center = (z[p - 1] + z[q - 1]) / 2
    width = z[q - 1] - z[p - 1]
    inner_z = tuple((z[j - 1] - center) / width for j in cluster)
    outer_z = tuple(z[:p - 1]) + (center,) + tuple(z[q:])
    vectors, keys, inner = [], [], {}
    for nu in sorted(inner_space.decomposition()):
        inner_block = inner_space.singular_block(nu)
        target = build_irrep(space.tag, nu)
        outer_space = TensorSpace(space.irreps[:p - 1] + [target] + space.irreps[q:])
        outer_block = outer_space.singular_block(mu)
        if outer_block.shape[1] == 0:
            continue
        inner_lines = eigenlines(gaudin_hamiltonians(inner_space, inner_z), inner_block, tol, rng)
        inner[nu], _ = flip_matching(inner_lines, inner_space.reversal(), tol.handoff_fidelity)
        outer_lines = eigenlines(gaudin_hamiltonians(outer_space, outer_z), outer_block, tol, rng)
        for m in range(len(inner_lines)):
            intertwiner = inner_space.intertwiner(target, inner_lines.line(m))
            for o in range(len(outer_lines)):
                vectors.append(embed(outer_space, p - 1, intertwiner, outer_lines.line(o)))
                keys.append((nu, m, o))
    if len(vectors) != len(lines):
        raise HandoffError(f"Product basis has {len(vectors)} lines, expected {len(lines)}",
                           location=list(z))
    assignment, values, _ = match_lines(lines.vectors, np.column_stack(vectors))
    return Handoff([keys[j] for j in assignment], float(values.min()), inner)


def monodromy_external(tag, highest, n, mu, generator, base=None, delta=1e-2,
                       tol=None, seed=0, caterpillar_eps=1e-2):
    """Monodromy permutation of s_pq on E(lambda,...,lambda)^mu

    The permutation maps the index of a base eigenline to the index of the
    base eigenline it is carried to.
    """
    tol = tol or Tolerances()
    rng = _rng(seed)
    irrep = build_irrep(tag, highest)
    space = TensorSpace([irrep] * n)
    mu = tuple(int(c) for c in mu)
    base = tuple(float(x) for x in (base if base is not None else range(n)))
    block = space.singular_block(mu)
    if block.shape[1] == 0:
        raise FamilyError(f"No singular vectors of weight {mu} in {space!r}")
    family = gaudin_hamiltonians(space, base)
    family.check_commuting(tol.commutator)
    lines = eigenlines(family, block, tol, rng)
    chains = caterpillar_labels(space, lines, base, block, tol, rng, caterpillar_eps)
    schedule = cactus_path_schedule(n, tuple(generator), base, delta)
    trail, fidelities = [], []
    params = {'generator': list(generator), 'base': list(base), 'kind': schedule.kind}
    if schedule.kind == 'swap':
        perm, fidelity = flip_matching(lines, space.reversal(), tol.handoff_fidelity)
        fidelities.append(fidelity)
    elif schedule.kind == 'reversal':
        seg = schedule.segments[0]
        moved = transport(lambda t: gaudin_hamiltonians(space, seg.point(t)), lines, block,
                          tol, rng, label=f"s{generator[0]}{generator[1]}")
        trail.extend(moved.trail)
        perm, fidelity = flip_matching(moved.lines, space.reversal(), tol.handoff_fidelity)
        fidelities.append(fidelity)
    else:
        perm, handoff = _cluster_monodromy(space, lines, block, schedule, base, generator,
                                           mu, tol, rng, trail)
        fidelities.append(handoff.fidelity)
        params['delta'] = handoff.delta
    result = MonodromyResult(tuple(int(j) for j in perm), trail, seed, params, fidelities)
    if not result.is_bijection():
        raise HandoffError(f"Monodromy of s{generator[0]}{generator[1]} is not a bijection")
    log.info("s%d%d on %s weight %s: %s", generator[0], generator[1], space, mu,
             list(result.permutation))
    return ExternalRun(space, mu, lines, chains, result)


def _cluster_monodromy(space, lines, block, schedule, base, generator, mu, tol, rng, trail):
    n = len(space)
    seg = schedule.segments[0]
    cluster = schedule.handoff['cluster']
    delta = schedule.handoff['width']
    moved = transport(lambda t: gaudin_hamiltonians(space, seg.point(t)), lines, block,
                      tol, rng, label='cluster')
    trail.extend(moved.trail)
    current, z = moved.lines, seg.z_end
    for attempt in range(tol.handoff_halvings + 1):
        handoff = boundary_handoff(space, current, z, cluster, mu, tol, rng)
        handoff.delta = delta
        if handoff.fidelity >= tol.handoff_fidelity:
            break
        if attempt == tol.handoff_halvings:
            raise HandoffError(f"Handoff fidelity {handoff.fidelity:.4f} below "
                               f"{tol.handoff_fidelity} after {attempt} halvings",
                               location=list(z))
        log.debug("handoff fidelity %.4f at delta %g, halving", handoff.fidelity, delta)
        delta /= 2
        tighter = cactus_path_schedule(n, tuple(generator), base, delta).segments[0].z_end
        path = _segment(z, tighter)
        moved = transport(lambda t: gaudin_hamiltonians(space, path(t)), current, block,
                          tol, rng, label='cluster')
        trail.extend(moved.trail)
        current, z = moved.lines, tighter
    index = {key: k for k, key in enumerate(handoff.keys)}
    perm = []
    for nu, m, o in handoff.keys:
        perm.append(index[(nu, handoff.inner[nu][m], o)])
    return perm, handoff


@dataclass
class ExternalComparison:
    eigen: dict
    crystal: dict
    run: ExternalRun

    @property
    def equal(self):
        return self.eigen == self.crystal


def compare_external(tag, highest, n, mu, generator, **kwargs):
    """Chain maps of s_pq from monodromy and from the crystal action"""
    run = monodromy_external(tag, highest, n, mu, generator, **kwargs)
    rs = root_system_of(tag)
    factor = generate_crystal(rs, tuple(highest))
    factors = [factor] * n
    members = multiplicity_set(tensor_product(*factors), mu).members
    chains = crystal_chains(factors, members)
    if len(set(chains)) != len(chains):
        raise InconclusiveError("Crystal chains do not separate the multiplicity set")
    if sorted(chains) != sorted(run.chains):
        raise InconclusiveError("Eigenline and crystal chains differ",
                                location={'eigen': run.chains, 'crystal': chains})
    action = generator_action(factors, *generator)
    by_label = dict(zip(members, chains))
    crystal = {by_label[b]: by_label[action(b)] for b in members}
    perm = run.result.permutation
    eigen = {run.chains[k]: run.chains[perm[k]] for k in range(len(perm))}
    return ExternalComparison(eigen, crystal, run)


# Internal side


def default_chi(tag):
    return DEFAULT_CHI[tag]


def _check_chi(rs, chi):
    if not is_regular(rs, chi, 1e-12):
        raise FamilyError(f"chi={list(chi)} is not regular")
    if not np.allclose(w0_coweight(rs, chi), [-c for c in chi]):
        raise FamilyError(f"chi={list(chi)} does not satisfy w0(chi) = -chi")


def to_wall(space, chi, node, lines, tol=None, rng=None):
    """Transport eigenlines from chi to the wall point chi^i"""
    wall = wall_point(space.rs, chi, node)
    path = _segment(chi, wall)
    return transport(lambda t: shift_of_argument_family(space, path(t), node=node),
                     lines, _full_block(space), tol, rng, label=f"wall {node}")


@dataclass
class EigenlineCrystal:
    crystal: Crystal
    lines: object
    walls: dict
    normal: object
    iso: object

    @property
    def labelling(self):
        """Line index -> element of B(lambda)"""
        return self.iso.data if self.iso else None


def eigenline_crystal(tag, highest, chi=None, tol=None, seed=0):
    """Crystal on E_chi(lambda) with e_i, f_i read off at the wall chi^i"""
    tol = tol or Tolerances()
    rng = _rng(seed)
    rs = root_system_of(tag)
    chi = tuple(float(c) for c in (chi or default_chi(tag)))
    space = TensorSpace([build_irrep(tag, highest)])
    family = shift_of_argument_family(space, chi)
    family.check_commuting(tol.commutator)
    lines = eigenlines(family, _full_block(space), tol, rng)
    size = len(lines)
    e, f, walls = {}, {}, {}
    for i in rs.nodes:
        walls[i] = to_wall(space, chi, i, lines, tol, rng)
        wall_lines = walls[i].lines.vectors
        e[i] = _line_operator(space.delta('e', i), wall_lines, tol)
        f[i] = _line_operator(space.delta('f', i), wall_lines, tol)
    crystal = Crystal(rs, [f"L{k}" for k in range(size)], lines.weights, e, f,
                      name=f"E_chi({','.join(map(str, highest))})")
    normal = check_normal(crystal)
    iso = normal
    if normal:
        iso = component_isomorphism(crystal, generate_crystal(rs, tuple(highest)))
    return EigenlineCrystal(crystal, lines, walls, normal, iso)


def _line_operator(matrix, wall_lines, tol):
    """Index map of a raising or lowering operator on wall eigenlines"""
    scale = max(1.0, np.linalg.norm(matrix))
    images = []
    for v in wall_lines.T:
        w = matrix @ v
        norm = np.linalg.norm(w)
        if norm < ZERO_LINE * scale:
            images.append(None)
            continue
        overlaps = np.abs(wall_lines.T @ (w / norm))
        j = int(np.argmax(overlaps))
        if overlaps[j] < tol.handoff_fidelity:
            raise HandoffError(f"Operator does not map a wall eigenline to a line "
                               f"(overlap {overlaps[j]:.4f})")
        images.append(j)
    return images


def monodromy_internal(tag, highest, subset, chi=None, tol=None, seed=0, ec=None):
    """Monodromy permutation of s_J on E_chi(lambda)

    J = I acts by rho(w0)^-1 on the eigenlines at chi.  A single node i is
    handled at the wall chi^i, where rho(s_i)^-1 permutes the wall lines.
    """
    tol = tol or Tolerances()
    rs = root_system_of(tag)
    chi = tuple(float(c) for c in (chi or default_chi(tag)))
    _check_chi(rs, chi)
    subset = frozenset(subset)
    ec = ec or eigenline_crystal(tag, highest, chi, tol, seed)
    space = TensorSpace([build_irrep(tag, highest)])
    word = longest_element(rs, subset)
    lift = weyl_lift(space, word)
    if subset == frozenset(rs.nodes):
        lines, trail = ec.lines, []
    elif len(subset) == 1:
        (node,) = subset
        lines, trail = ec.walls[node].lines, ec.walls[node].trail
    else:
        raise FamilyError(f"Internal generator s_{sorted(subset)} is not supported for {tag}")
    perm, fidelity = flip_matching(lines, lift.T, tol.handoff_fidelity)
    return MonodromyResult(perm, list(trail), seed,
                           {'subset': sorted(subset), 'chi': list(chi),
                            'weyl_word': list(word.letters)}, [fidelity])


@dataclass
class InternalComparison:
    eigen: dict
    crystal: dict
    result: MonodromyResult
    ec: EigenlineCrystal

    @property
    def equal(self):
        return self.eigen == self.crystal


def compare_internal(tag, highest, subset, chi=None, tol=None, seed=0):
    """s_J by monodromy against xi_J, both on labels of B(lambda)"""
    ec = eigenline_crystal(tag, highest, chi, tol, seed)
    if not ec.normal or not ec.iso:
        raise InconclusiveError(f"Eigenline crystal of {highest} is not isomorphic to "
                                f"B({highest})", location=ec.iso.witness)
    result = monodromy_internal(tag, highest, subset, chi, tol, seed, ec)
    label = ec.labelling
    model = generate_crystal(ec.crystal.rs, tuple(highest))
    xi = partial_schutzenberger(model, subset)
    eigen = {label[k]: label[j] for k, j in enumerate(result.permutation)}
    crystal = {b: xi(b) for b in model.labels}
    return InternalComparison(eigen, crystal, result, ec)


# Tensor products


@dataclass
class TensorTransport:
    tag: str
    first: tuple
    second: tuple
    chi: tuple
    far: list
    near: list
    fidelities: dict
    trail: list
    crystals: dict
    order_preserved: bool = None

    @property
    def bijection(self):
        """(a, b) -> (nu, m, c)"""
        return dict(zip(self.far, self.near))


def _single_lines(tag, highest, chi, tol, rng):
    space = TensorSpace([build_irrep(tag, highest)])
    return eigenlines(shift_of_argument_family(space, chi), _full_block(space), tol, rng)


def _product_match(lines, vectors, keys, tol, where):
    assignment, values, _ = match_lines(lines.vectors, np.column_stack(vectors))
    fidelity = float(values.min())
    if fidelity < tol.handoff_fidelity:
        raise HandoffError(f"Product fidelity {fidelity:.4f} at {where}", location=where)
    return [keys[j] for j in assignment], fidelity


def tensor_transport(tag, first, second, chi=None, z_max=1e3, z_min=1e-3, tol=None, seed=0):
    """p_{inf,0}: E_chi(l1) x E_chi(l2) -> union of E(l1,l2)^nu x E_chi(nu)

    The eigenlines of A_chi(z, 0) on V(l1) x V(l2) are followed from z_max,
    where they are products of single-factor eigenlines, to z_min, where
    they are intertwiner images of eigenlines of V(nu).
    """
    tol = tol or Tolerances()
    rng = _rng(seed)
    rs = root_system_of(tag)
    chi = tuple(float(c) for c in (chi or default_chi(tag)))
    first, second = tuple(first), tuple(second)
    space = TensorSpace([build_irrep(tag, first), build_irrep(tag, second)])
    block = _full_block(space)
    # at z = 0 the quadratic family acts on Hom(V(nu), V(l1) x V(l2)) by a scalar
    repeated = {format_weight(nu): m for nu, m in space.decomposition().items() if m > 1}
    if repeated:
        raise InconclusiveError(f"Multiplicity spaces of {space!r} are not separated by "
                                f"the quadratic Hamiltonians", location=repeated)

    def family_at(t):
        z = math.exp((1 - t) * math.log(z_max) + t * math.log(z_min))
        return dynamical_hamiltonians(space, (z, 0.0), chi)

    start = family_at(0.0)
    start.check_commuting(tol.commutator)
    lines = eigenlines(start, block, tol, rng)
    ec1 = eigenline_crystal(tag, first, chi, tol, seed)
    ec2 = eigenline_crystal(tag, second, chi, tol, seed)
    vectors, keys = [], []
    for a, u in enumerate(ec1.lines.vectors.T):
        for b, v in enumerate(ec2.lines.vectors.T):
            vectors.append(np.kron(u, v))
            keys.append((a, b))
    limit = eigenlines(single_site_family(space, chi), block, tol, rng)
    limit_keys, limit_fidelity = _product_match(limit, vectors, keys, tol, {'z': 'inf'})
    far, far_fidelity = _product_match(lines, list(limit.vectors.T), limit_keys, tol,
                                       {'z': z_max})
    moved = transport(family_at, lines, block, tol, rng, label='p_inf_0')
    crystals = {1: ec1, 2: ec2}
    vectors, keys = [], []
    for nu in sorted(space.decomposition()):
        singular = space.singular_block(nu)
        crystals[nu] = eigenline_crystal(tag, nu, chi, tol, seed)
        target = build_irrep(tag, nu)
        for m in range(singular.shape[1]):
            intertwiner = space.intertwiner(target, singular[:, m])
            for c, v in enumerate(crystals[nu].lines.vectors.T):
                vectors.append(intertwiner @ v)
                keys.append((nu, m, c))
    near, near_fidelity = _product_match(moved.lines, vectors, keys, tol, {'z': z_min})
    fidelities = {'limit': limit_fidelity, 'far': far_fidelity, 'near': near_fidelity}
    result = TensorTransport(tag, first, second, chi, far, near, fidelities,
                             moved.trail, crystals)
    if rs.rank == 1:
        result.order_preserved = _order_preserved(lines, moved.lines, start.names.index('G1'))
    return result


def _order_preserved(before, after, column):
    """Ranks of the G eigenvalue inside each weight block agree at both ends"""
    def ranks(lines):
        found = {}
        for w in set(lines.weights):
            members = [k for k, x in enumerate(lines.weights) if x == w]
            ordered = sorted(members, key=lambda k: lines.labels[k, column])
            found.update({k: r for r, k in enumerate(ordered)})
        return found
    return ranks(before) == ranks(after)


def _union_layout(tt):
    """Summands (nu, m) in key order and the offset of each in the union"""
    summands = sorted({(nu, m) for nu, m, _ in tt.near})
    offsets, total = {}, 0
    for nu, m in summands:
        offsets[(nu, m)] = total
        total += len(tt.crystals[nu].crystal)
    union = disjoint_union([tt.crystals[nu].crystal for nu, _ in summands], name='p_inf_0')
    return union, offsets


def check_tensor_crystal(tt):
    """Is p_{inf,0} a crystal isomorphism onto the union of the E_chi(nu)"""
    ec1, ec2 = tt.crystals[1].crystal, tt.crystals[2].crystal
    product = tensor(ec1, ec2)
    union, offsets = _union_layout(tt)
    n2 = len(ec2)
    mapping = [None] * len(product)
    for (a, b), (nu, m, c) in tt.bijection.items():
        mapping[a * n2 + b] = offsets[(nu, m)] + c
    perm = CrystalPermutation(product, union, tuple(mapping))
    return check_morphism(perm)


@dataclass
class CommutorSquare:
    eigen: dict
    crystal: dict
    weyl_square: bool
    weyl_is_xi: bool = True
    fidelity: float = 1.0

    @property
    def equal(self):
        return self.eigen == self.crystal and self.weyl_square and self.weyl_is_xi


def _weyl_permutation(space, vectors, w0, tol):
    """Index map of rho(w0)^-1 on the given eigenlines of space"""
    lines = EigenlineSet(np.column_stack(vectors), np.zeros((len(vectors), 0)),
                         [None] * len(vectors), {'space': repr(space)})
    return flip_matching(lines, weyl_lift(space, w0).T, tol.handoff_fidelity)


def commutor_square(tag, first, second, chi=None, tol=None, seed=0, **kwargs):
    """sigma from p_21^-1 . flip . p_12 against the crystal commutor

    The Weyl side of the square is checked numerically: rho(w0) on the
    products of eigenlines of V(l2) x V(l1) and on E_chi(nu) must be carried
    into each other by p_12 and p_21, and must agree with xi on both sides.
    """
    tol = tol or Tolerances()
    rs = root_system_of(tag)
    p12 = tensor_transport(tag, first, second, chi, tol=tol, seed=seed, **kwargs)
    p21 = tensor_transport(tag, second, first, chi, tol=tol, seed=seed, **kwargs)
    space12 = TensorSpace([build_irrep(tag, first), build_irrep(tag, second)])
    space21 = TensorSpace([build_irrep(tag, second), build_irrep(tag, first)])
    flip = space12.reversal()
    multiplicity = {}
    for nu in space12.decomposition():
        images = flip @ space12.singular_block(nu)
        targets = space21.singular_block(nu)
        assignment, values, _ = match_lines(images, targets)
        if values.min() < tol.handoff_fidelity:
            raise HandoffError(f"Flip does not match singular vectors of weight {nu}")
        for m, m2 in enumerate(assignment):
            multiplicity[(nu, m)] = int(m2)
    back = {v: k for k, v in p21.bijection.items()}
    ec1, ec2 = p12.crystals[1], p12.crystals[2]
    n1, n2 = len(ec1.crystal), len(ec2.crystal)
    eigen = {}
    for (a, b), (nu, m, c) in p12.bijection.items():
        b2, a2 = back[(nu, multiplicity[(nu, m)], c)]
        eigen[a * n2 + b] = b2 * n1 + a2
    sigma = commutor(ec1.crystal, ec2.crystal)
    crystal = {label: sigma(label) for label in sigma.domain.labels}

    w0 = longest_element(rs, rs.nodes)
    products = [np.kron(v, u) for v in ec2.lines.vectors.T for u in ec1.lines.vectors.T]
    w21, fidelity = _weyl_permutation(space21, products, w0, tol)
    w_nu = {}
    for nu in space12.decomposition():
        target = TensorSpace([build_irrep(tag, nu)])
        w_nu[nu], value = _weyl_permutation(target, list(p12.crystals[nu].lines.vectors.T),
                                            w0, tol)
        fidelity = min(fidelity, value)
    weyl_square = True
    for (a, b), (nu, m, c) in p12.bijection.items():
        b2, a2 = divmod(w21[b * n1 + a], n1)
        if p21.bijection[(b2, a2)] != (nu, multiplicity[(nu, m)], w_nu[nu][c]):
            weyl_square = False
            break
    xi1, xi2 = schutzenberger(ec1.crystal), schutzenberger(ec2.crystal)
    weyl_is_xi = all(w21[b * n1 + a] == xi2(b) * n1 + xi1(a)
                     for a in range(n1) for b in range(n2))
    for nu, perm in w_nu.items():
        xi_nu = schutzenberger(p12.crystals[nu].crystal)
        weyl_is_xi = weyl_is_xi and all(perm[c] == xi_nu(c) for c in range(len(perm)))
    return CommutorSquare(eigen, crystal, weyl_square, weyl_is_xi, fidelity)


# Pentagon


@dataclass
class PentagonResult:
    identity: bool
    reversed_identity: bool
    product_fidelity: float
    trail: list
    min_overlap: float


def pentagon_numeric(tag='sl2', highest=(1,), chi=None, eps=1e-2, big=1e2, tol=None, seed=0):
    """Transport around the contractible pentagon of limit points for n = 3"""
    tol = tol or Tolerances()
    rng = _rng(seed)
    chi = tuple(float(c) for c in (chi or default_chi(tag)))
    loop_tol = tol.update({'initial_steps': tol.initial_steps * 5})
    irrep = build_irrep(tag, highest)
    space = TensorSpace([irrep] * 3)
    block = _full_block(space)
    schedule = pentagon_schedule(eps, big)
    results = []
    for path in (schedule, schedule.reversed()):
        start = eigenlines(dynamical_hamiltonians(space, path.point(0.0), chi), block, tol, rng)
        moved = transport(lambda t: dynamical_hamiltonians(space, path.point(t), chi),
                          start, block, loop_tol, rng, label='pentagon')
        assignment, values, _ = match_lines(start.vectors, moved.lines.vectors)
        closed = (list(assignment) == list(range(len(start)))
                  and values.min() >= tol.handoff_fidelity)
        results.append((closed, moved))
    far_point = schedule.segments[3].z_start
    far = eigenlines(dynamical_hamiltonians(space, far_point, chi), block, tol, rng)
    single = _single_lines(tag, tuple(highest), chi, tol, rng).vectors.T
    vectors = [np.kron(np.kron(u, v), w) for u in single for v in single for w in single]
    _, values, _ = match_lines(far.vectors, np.column_stack(vectors))
    moved = results[0][1]
    log.info("pentagon: identity=%s reversed=%s product fidelity %.4f",
             results[0][0], results[1][0], values.min())
    return PentagonResult(results[0][0], results[1][0], float(values.min()),
                          moved.trail, moved.min_overlap)
