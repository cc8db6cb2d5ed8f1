# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Verification cases, run in a thread pool and merged by case id.

import concurrent.futures
from dataclasses import dataclass, field
import itertools
import logging
import time
import traceback

from cactus_crystals.cactus import (
    check_external_formula,
    check_hexagon,
    check_relations,
    external_cactus_action,
    external_relations,
    flip_commutor,
    internal_cactus_action,
    internal_relations,
    parse_word,
    schutzenberger,
)
from cactus_crystals.crystal import components, generate_crystal, tensor
from cactus_crystals.errors import CactusError, InconclusiveError, SettingsError
from cactus_crystals.monodromy import (
    check_tensor_crystal,
    commutor_square,
    compare_external,
    compare_internal,
    eigenline_crystal,
    pentagon_numeric,
    tensor_transport,
)
from cactus_crystals.representations import parse_highest_weight, root_system_of
from cactus_crystals.rootdata import (
    build_root_system,
    character,
    decompose_character,
    format_weight,
    parse_weight,
    tensor_character,
    weyl_dimension,
)
from cactus_crystals.settings import Tolerances, resolve_seed, section, tolerances

log = logging.getLogger(__name__)

STATUSES = ('equal', 'mismatch', 'inconclusive', 'error')

RUNNERS = {}


@dataclass
class VerificationReport:
    case_id: str
    kind: str
    claim: str
    status: str
    crystal: object = None
    monodromy: object = None
    diagnostics: dict = field(default_factory=dict)
    seed: int = None
    elapsed: float = 0.0

    @property
    def equal(self):
        return self.status == 'equal'

    def to_json(self):
        return {
            'case': self.case_id,
            'kind': self.kind,
            'claim': self.claim,
            'status': self.status,
            'crystal': self.crystal,
            'monodromy': self.monodromy,
            'diagnostics': self.diagnostics,
            'seed': self.seed,
        }


@dataclass
class HarnessContext:
    tol: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    gaudin: dict = field(default_factory=dict)


def runner(kind, claim):
    def register(func):
        RUNNERS[kind] = (func, claim)
        return func
    return register


def _weights(case, rs):
    if 'weights' in case:
        return [parse_weight(str(w)) for w in case['weights']]
    bound = int(case.get('max_coord', 1))
    grid = itertools.product(range(bound + 1), repeat=rs.rank)
    return [w for w in grid if any(w)]


def _outcome(ok, crystal, reference, **diagnostics):
    return ('equal' if ok else 'mismatch'), crystal, reference, diagnostics


def _spins(tag, case):
    spins = case['spins']
    if isinstance(spins, str):
        spins = spins.split(';') if ';' in spins or tag != 'sl2' else spins.split(',')
    weights = [parse_highest_weight(tag, s) for s in spins]
    if len(set(weights)) != 1:
        raise SettingsError(f"Tensor factors must carry one highest weight: {spins}")
    return weights[0], len(weights)


@runner('crystal_sizes', "|B(lambda)| equals the Weyl dimension")
def _crystal_sizes(case, ctx):
    rs = build_root_system(case['type'])
    sizes, dims = {}, {}
    for lam in _weights(case, rs):
        sizes[format_weight(lam)] = len(generate_crystal(rs, lam))
        dims[format_weight(lam)] = weyl_dimension(rs, lam)
    return _outcome(sizes == dims, sizes, dims)


@runner('tensor_decomposition', "Components of B(l) x B(m) follow the character product")
def _tensor_decomposition(case, ctx):
    rs = build_root_system(case['type'])
    weights = _weights(case, rs)
    limit = int(case.get('max_dim', 400))
    found, expected = {}, {}
    for lam, mu in itertools.combinations_with_replacement(weights, 2):
        if weyl_dimension(rs, lam) * weyl_dimension(rs, mu) > limit:
            continue
        pair = f"{format_weight(lam)} x {format_weight(mu)}"
        product = tensor(generate_crystal(rs, lam), generate_crystal(rs, mu))
        tops = {}
        for top, _ in components(product):
            key = format_weight(product.wt(top))
            tops[key] = tops.get(key, 0) + 1
        oracle = decompose_character(rs, tensor_character(
            rs, character(rs, lam), character(rs, mu)))
        found[pair] = dict(sorted(tops.items()))
        expected[pair] = dict(sorted((format_weight(w), m) for w, m in oracle.items()))
    return _outcome(found == expected, found, expected, pairs=len(found))


@runner('schutzenberger', "xi is an involution exchanging e_i and f_theta(i)")
def _schutzenberger(case, ctx):
    rs = build_root_system(case['type'])
    failures = []
    for lam in _weights(case, rs):
        crystal = generate_crystal(rs, lam)
        xi = schutzenberger(crystal)
        if any(xi(xi(b)) != b for b in crystal.labels):
            failures.append(format_weight(lam))
    return _outcome(not failures, failures, [], checked=len(_weights(case, rs)))


@runner('internal_relations', "xi_J satisfy the internal cactus relations")
def _internal_relations(case, ctx):
    rs = build_root_system(case['type'])
    results = {}
    for lam in _weights(case, rs):
        crystal = generate_crystal(rs, lam)
        checked = check_relations(internal_relations(rs),
                                  lambda word: internal_cactus_action(word, crystal))
        results[format_weight(lam)] = bool(checked)
        if not checked:
            return _outcome(False, results, None, witness=checked.witness)
    return _outcome(True, results, None)


@runner('external_relations', "s_pq on B^n satisfy the cactus relations of C_n")
def _external_relations(case, ctx):
    rs = build_root_system(case['type'])
    factor = generate_crystal(rs, parse_weight(str(case['weight'])))
    factors = [factor] * int(case['n'])
    checked = check_relations(external_relations(len(factors)),
                              lambda word: external_cactus_action(word, factors))
    return _outcome(bool(checked), checked.data, None, witness=checked.witness)


@runner('hexagon', "The crystal commutor satisfies the hexagon, the plain flip does not")
def _hexagon(case, ctx):
    rs = build_root_system(case['type'])
    results, control = {}, {}
    for triple in case['triples']:
        crystals = [generate_crystal(rs, parse_weight(str(w))) for w in triple]
        key = ' x '.join(map(str, triple))
        results[key] = bool(check_hexagon(*crystals))
        control[key] = bool(check_hexagon(*crystals, commutor=flip_commutor))
    ok = all(results.values()) and not all(control.values())
    return _outcome(ok, results, control)


@runner('external_formula', "Closed s_pq formula equals the iterated commutor")
def _external_formula(case, ctx):
    rs = build_root_system(case['type'])
    factor = generate_crystal(rs, parse_weight(str(case['weight'])))
    checked = check_external_formula([factor] * int(case['n']))
    return _outcome(bool(checked), None, None, witness=checked.witness)


def chain_map(mapping):
    return {' > '.join(format_weight(w) for w in k): ' > '.join(format_weight(w) for w in v)
            for k, v in sorted(mapping.items())}


def _gaudin_value(case, ctx, key, default):
    return case.get(key, ctx.gaudin.get(key, default))


@runner('external_monodromy', "Gaudin monodromy of s_pq equals the crystal cactus action")
def _external_monodromy(case, ctx):
    tag = case['algebra']
    lam, n = _spins(tag, case)
    mu = parse_highest_weight(tag, case['mu'])
    base = tuple(float(x) for x in case.get('base', range(n)))
    kwargs = {
        'delta': float(_gaudin_value(case, ctx, 'delta', 1e-2)),
        'caterpillar_eps': float(_gaudin_value(case, ctx, 'caterpillar_eps', 1e-2)),
        'tol': ctx.tol,
    }
    crystal_side, eigen_side, diagnostics = {}, {}, {}
    ok = True
    for name in case['generators']:
        generator = external_generator(name, n)
        runs = [
            compare_external(tag, lam, n, mu, generator, base=base, seed=ctx.seed, **kwargs),
            compare_external(tag, lam, n, mu, generator, base=tuple(2 * x + 1 for x in base),
                             seed=ctx.seed, **kwargs),
            compare_external(tag, lam, n, mu, generator, base=base, seed=ctx.seed + 1, **kwargs),
        ]
        first = runs[0]
        halved = compare_external(tag, lam, n, mu, generator, base=base, seed=ctx.seed,
                                  **dict(kwargs, delta=kwargs['delta'] / 2))
        crystal_side[name] = chain_map(first.crystal)
        eigen_side[name] = chain_map(first.eigen)
        stable = all(run.eigen == first.eigen for run in runs[1:])
        diagnostics[name] = {
            'min_overlap': first.run.result.min_overlap,
            'fidelities': first.run.result.fidelities,
            'gauge_and_seed_stable': stable,
            'delta_stable': halved.eigen == first.eigen,
        }
        ok = ok and first.equal and stable and halved.eigen == first.eigen
    return _outcome(ok, crystal_side, eigen_side, **diagnostics)


@runner('internal_monodromy', "Shift of argument monodromy of s_J equals xi_J")
def _internal_monodromy(case, ctx):
    tag = case['algebra']
    lam = parse_highest_weight(tag, case['lambda'])
    chi = case.get('chi')
    crystal_side, eigen_side, diagnostics = {}, {}, {}
    ok = True
    for name in case['generators']:
        subset = internal_subset(tag, name)
        runs = [compare_internal(tag, lam, subset, chi, ctx.tol, ctx.seed),
                compare_internal(tag, lam, subset, chi, ctx.tol, ctx.seed + 1)]
        first = runs[0]
        crystal_side[name] = {str(k): v for k, v in sorted(first.crystal.items())}
        eigen_side[name] = {str(k): v for k, v in sorted(first.eigen.items())}
        stable = runs[1].eigen == first.eigen
        diagnostics[name] = {'fidelities': first.result.fidelities,
                             'seed_stable': stable}
        ok = ok and first.equal and stable
    return _outcome(ok, crystal_side, eigen_side, **diagnostics)


def external_generator(name, n):
    word = parse_word(name, 'external', n=n, reduce=False)
    if len(word) != 1:
        raise SettingsError(f"{name} is not a single external generator")
    return word.letters[0]


def internal_subset(tag, name):
    word = parse_word(name, 'internal', root_system_of(tag), reduce=False)
    if len(word) != 1:
        raise SettingsError(f"{name} is not a single internal generator")
    return word.letters[0]


@runner('eigenline_crystal', "Eigenlines of A_chi form a normal crystal isomorphic to B(lambda)")
def _eigenline_crystal(case, ctx):
    tag = case['algebra']
    lam = parse_highest_weight(tag, case['lambda'])
    ec = eigenline_crystal(tag, lam, case.get('chi'), ctx.tol, ctx.seed)
    ok = bool(ec.normal) and bool(ec.iso)
    return _outcome(ok, len(ec.crystal), weyl_dimension(ec.crystal.rs, lam),
                    normal=bool(ec.normal), witness=ec.iso.witness)


@runner('tensor_transport', "p_inf_0 is a crystal isomorphism")
def _tensor_transport(case, ctx):
    tag = case['algebra']
    first = parse_highest_weight(tag, case['first'])
    second = parse_highest_weight(tag, case['second'])
    tt = tensor_transport(tag, first, second, case.get('chi'),
                          z_max=float(_gaudin_value(case, ctx, 'z_max', 1e3)),
                          z_min=float(_gaudin_value(case, ctx, 'z_min', 1e-3)),
                          tol=ctx.tol, seed=ctx.seed)
    morphism = check_tensor_crystal(tt)
    sizes = {}
    for nu, m, _ in tt.near:
        key = f"{format_weight(nu)}#{m}"
        sizes[key] = sizes.get(key, 0) + 1
    ok = bool(morphism) and tt.order_preserved is not False
    return _outcome(ok, dict(sorted(sizes.items())), None, fidelities=tt.fidelities,
                    order_preserved=tt.order_preserved, witness=morphism.witness)


@runner('commutor_square', "sigma equals p_21^-1 flip p_12")
def _commutor_square(case, ctx):
    tag = case['algebra']
    first = parse_highest_weight(tag, case['first'])
    second = parse_highest_weight(tag, case['second'])
    square = commutor_square(tag, first, second, case.get('chi'), ctx.tol, ctx.seed)
    return _outcome(square.equal, {str(k): v for k, v in sorted(square.crystal.items())},
                    {str(k): v for k, v in sorted(square.eigen.items())},
                    weyl_square=square.weyl_square, weyl_is_xi=square.weyl_is_xi,
                    weyl_fidelity=square.fidelity)


@runner('pentagon', "Transport around the pentagon of limit points is trivial")
def _pentagon(case, ctx):
    tag = case.get('algebra', 'sl2')
    lam = parse_highest_weight(tag, case.get('lambda', '1'))
    result = pentagon_numeric(tag, lam, case.get('chi'),
                              eps=float(_gaudin_value(case, ctx, 'pentagon_eps', 1e-2)),
                              big=float(_gaudin_value(case, ctx, 'pentagon_big', 1e2)),
                              tol=ctx.tol, seed=ctx.seed)
    ok = (result.identity and result.reversed_identity
          and result.product_fidelity >= ctx.tol.handoff_fidelity)
    return _outcome(ok, None, {'identity': result.identity,
                               'reversed': result.reversed_identity},
                    product_fidelity=result.product_fidelity, min_overlap=result.min_overlap)


def run_case(case, ctx=None):
    """Run one case; numeric failures are inconclusive, never mismatches"""
    ctx = ctx or HarnessContext()
    case_id = str(case.get('id', case.get('kind')))
    kind = case.get('kind')
    if kind not in RUNNERS:
        raise SettingsError(f"Unknown case kind: {kind}")
    func, claim = RUNNERS[kind]
    start = time.monotonic()
    report = VerificationReport(case_id, kind, claim, 'error', seed=ctx.seed)
    try:
        report.status, report.crystal, report.monodromy, report.diagnostics = func(case, ctx)
    except InconclusiveError as exc:
        report.status = 'inconclusive'
        report.diagnostics = {'reason': str(exc), 'location': exc.location,
                              'type': type(exc).__name__}
    except CactusError as exc:
        report.diagnostics = {'reason': str(exc), 'type': type(exc).__name__}
    except Exception as exc:
        report.diagnostics = {'reason': str(exc), 'traceback': traceback.format_exc()}
    report.elapsed = time.monotonic() - start
    log.info("%s (%s): %s in %.2fs", case_id, kind, report.status, report.elapsed)
    return report


def run_cases(cases, ctx=None, workers=None):
    """Run cases in parallel; reports come back sorted by case id"""
    ctx = ctx or HarnessContext()
    ids = [str(case.get('id', case.get('kind'))) for case in cases]
    if len(set(ids)) != len(ids):
        raise SettingsError("Duplicate case ids in suite")
    reports = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(run_case, case, ctx) for case in cases}
        for future in concurrent.futures.as_completed(futures):
            reports.append(future.result())
    reports.sort(key=lambda report: report.case_id)
    return reports


def suite_status(reports):
    """Worst status of a suite: error/mismatch, then inconclusive, then equal"""
    statuses = {report.status for report in reports}
    for status in ('error', 'mismatch', 'inconclusive'):
        if status in statuses:
            return status
    return 'equal'


def exit_code(status):
    return {'equal': 0, 'mismatch': 1, 'error': 1, 'inconclusive': 2}[status]


def select_suite(suites, name):
    try:
        return suites[name]
    except KeyError as exc:
        raise SettingsError(f"Unknown suite {name}; known: {sorted(suites)}") from exc


def context_from_settings(settings, seed=None):
    """Tolerances and numeric defaults from the [gaudin] section"""
    gaudin = section(settings, 'gaudin')
    gaudin.pop('tolerances', None)
    return HarnessContext(tolerances(settings), resolve_seed(seed, settings), gaudin)

