#!/usr/bin/env python3
#
# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

"""Gaudin service: eigenlines, monodromy and the pentagon loop"""

import sys

import numpy as np
from kernelci.legacy.cli import Command, parse_opts

from cactus_crystals.cli import (
    Args,
    exit_status,
    parse_floats,
    settings_path,
    split_list,
)
from cactus_crystals.eigenlines import eigenlines
from cactus_crystals.errors import UsageError
from cactus_crystals.families import gaudin_hamiltonians, shift_of_argument_family
from cactus_crystals.harness import chain_map, external_generator, internal_subset
from cactus_crystals.monodromy import (
    compare_external,
    compare_internal,
    default_chi,
    pentagon_numeric,
)
from cactus_crystals.representations import TensorSpace, build_irrep, parse_highest_weight
from cactus_crystals.rootdata import format_weight
from cactus_crystals.settings import (
    load_experiment,
    load_settings,
    resolve_seed,
    tolerances,
)
from base import Service

SERVICE_NAME = 'gaudin'

SPINS = {
    'name': '--spins',
    'help': "Highest weights of the factors: '1,1,1' for sl2, '1,0;0,1' for sl3",
}

MU = {
    'name': '--mu',
    'help': "Weight of the singular vectors, e.g. 1 (sl2) or 1,1 (sl3)",
}

CHI = {
    'name': '--chi',
    'help': "Regular Cartan element in simple coroot coordinates, e.g. 1,1",
}


def parse_spins(tag, text):
    items = split_list(text, ';') if ';' in text or tag != 'sl2' else split_list(text)
    if not items:
        raise UsageError("--spins needs at least one highest weight")
    return [parse_highest_weight(tag, item) for item in items]


class GaudinService(Service):

    def __init__(self, settings, args):
        super().__init__(settings, args, SERVICE_NAME)
        self._tol = tolerances(settings)

    def _seed(self, args, fallback=None):
        explicit = args.seed if args.seed is not None else fallback
        return resolve_seed(explicit, self._all_settings)

    def _param(self, value, key, default):
        return value if value is not None else self._settings.get(key, default)

    def _default_chi(self, tag):
        return tuple(self._settings.get('default_chi', {}).get(tag, default_chi(tag)))


class GaudinEigenlines(GaudinService):

    def _run(self, args):
        tag = args.algebra
        spins = parse_spins(tag, args.spins)
        space = TensorSpace([build_irrep(tag, lam) for lam in spins])
        chi = parse_floats(args.chi, 'chi') if args.chi else None
        if len(spins) == 1:
            family = shift_of_argument_family(space, chi or self._default_chi(tag))
        else:
            z = parse_floats(args.z, 'z') if args.z else tuple(
                float(k) for k in range(len(spins)))
            family = gaudin_hamiltonians(space, z, chi)
        defect = family.check_commuting(self._tol.commutator)
        if args.mu:
            mu = parse_highest_weight(tag, args.mu)
            single = chi is None and len(spins) > 1
            block = space.singular_block(mu) if single else space.weight_block(mu)
        elif chi is None and len(spins) > 1:
            raise UsageError("Gaudin eigenlines without --chi need --mu")
        else:
            block = np.eye(space.dim)
        lines = eigenlines(family, block, self._tol, np.random.default_rng(self._seed(args)))
        result = lines.to_json()
        result.update({
            'algebra': tag,
            'spins': [format_weight(lam) for lam in spins],
            'names': family.names,
            'commutator_defect': defect,
            'size': len(lines),
        })
        self._emit(result, args.output)
        return True


class GaudinMonodromy(GaudinService):

    def _setup(self, args):
        experiment = load_experiment(args.config) if args.config else {}
        if experiment.get('tolerances'):
            self._tol = self._tol.update(experiment['tolerances'])

        def pick(key):
            value = getattr(args, key)
            return value if value is not None else experiment.get(key)

        params = {
            'algebra': pick('algebra') or 'sl2',
            'spins': pick('spins'),
            'mu': pick('mu'),
            'generator': pick('generator'),
            'base': pick('base_z'),
            'delta': pick('delta_star'),
            'chi': pick('chi'),
            'seed': self._seed(args, experiment.get('seed')),
            'output': args.output,
        }
        for key in ('spins', 'generator'):
            if params[key] is None:
                raise UsageError(f"monodromy needs a {key} (option or --config)")
        for key in ('spins', 'mu'):
            if isinstance(params[key], (list, tuple)):
                sep = ';' if params['algebra'] != 'sl2' else ','
                params[key] = sep.join(str(x) for x in params[key])
            elif params[key] is not None:
                params[key] = str(params[key])
        return params

    def _run(self, params):
        tag = params['algebra']
        spins = parse_spins(tag, params['spins'])
        if len(spins) == 1:
            result = self._internal(tag, spins[0], params)
        else:
            result = self._external(tag, spins, params)
        result.update({'algebra': tag, 'seed': params['seed'],
                       'spins': [format_weight(lam) for lam in spins]})
        result['status'] = 'equal' if result['equal'] else 'mismatch'
        self.log.info(f"{params['generator']} on {params['spins']}: {result['status']}")
        self._emit(result, params['output'])
        return result['status']

    def _external(self, tag, spins, params):
        if len(set(spins)) != 1:
            raise UsageError("External monodromy needs equal highest weights")
        if params['mu'] is None:
            raise UsageError("External monodromy needs --mu")
        n = len(spins)
        mu = parse_highest_weight(tag, params['mu'])
        generator = external_generator(params['generator'], n)
        base = params['base']
        if isinstance(base, str):
            base = parse_floats(base, 'base')
        comparison = compare_external(
            tag, spins[0], n, mu, generator,
            base=tuple(base) if base is not None else None,
            delta=float(self._param(params['delta'], 'delta', 1e-2)),
            caterpillar_eps=float(self._settings.get('caterpillar_eps', 1e-2)),
            tol=self._tol, seed=params['seed'])
        run = comparison.run
        return {
            'generator': params['generator'],
            'mu': format_weight(mu),
            'permutation': list(run.result.permutation),
            'labels': [' > '.join(format_weight(w) for w in chain) for chain in run.chains],
            'monodromy': chain_map(comparison.eigen),
            'crystal': chain_map(comparison.crystal),
            'equal': comparison.equal,
            'min_overlap': run.result.min_overlap,
            'fidelities': run.result.fidelities,
        }

    def _internal(self, tag, lam, params):
        chi = params['chi']
        if isinstance(chi, str):
            chi = parse_floats(chi, 'chi')
        chi = chi or self._default_chi(tag)
        subset = internal_subset(tag, params['generator'])
        comparison = compare_internal(tag, lam, subset, chi, self._tol, params['seed'])
        return {
            'generator': params['generator'],
            'permutation': list(comparison.result.permutation),
            'labels': [comparison.ec.labelling[k] for k in sorted(comparison.ec.labelling)],
            'monodromy': {str(k): v for k, v in sorted(comparison.eigen.items())},
            'crystal': {str(k): v for k, v in sorted(comparison.crystal.items())},
            'equal': comparison.equal,
            'fidelities': comparison.result.fidelities,
        }


class GaudinPentagon(GaudinService):

    def _run(self, args):
        tag = args.algebra
        lam = parse_highest_weight(tag, args.weight)
        chi = parse_floats(args.chi, 'chi') if args.chi else self._default_chi(tag)
        result = pentagon_numeric(
            tag, lam, chi,
            eps=float(self._param(args.eps, 'pentagon_eps', 1e-2)),
            big=float(self._param(args.big, 'pentagon_big', 1e2)),
            tol=self._tol, seed=self._seed(args))
        closed = (result.identity and result.reversed_identity
                  and result.product_fidelity >= self._tol.handoff_fidelity)
        self._emit({
            'algebra': tag,
            'lambda': format_weight(lam),
            'identity': result.identity,
            'reversed_identity': result.reversed_identity,
            'product_fidelity': result.product_fidelity,
            'min_overlap': result.min_overlap,
            'steps': len(result.trail),
            'status': 'equal' if closed else 'mismatch',
        }, args.output)
        return 'equal' if closed else 'mismatch'


class cmd_eigenlines(Command):
    help = "Joint eigenlines of the Gaudin (n > 1) or shift of argument (n = 1) family"
    args = [SPINS]
    opt_args = [
        Args.algebra,
        MU,
        CHI,
        {'name': '--z', 'help': "Distinct marked points, e.g. 0,1,3"},
        Args.seed,
        Args.output,
        Args.verbose,
    ]

    def __call__(self, settings, args):
        return GaudinEigenlines(settings, args).run(args)


class cmd_monodromy(Command):
    help = """\
Monodromy of a cactus generator compared with the crystal action.  With
several spins the generator is external (s12, s_p_q) and acts on singular
vectors of weight --mu; with a single spin it is internal (sI, s1, s12).\
"""
    opt_args = [
        dict(Args.algebra, default=None),
        SPINS,
        MU,
        {'name': '--gen', 'dest': 'generator', 'help': "Cactus generator"},
        {'name': '--base', 'dest': 'base_z', 'help': "Increasing base configuration, e.g. 0,1,2"},
        {'name': '--delta', 'dest': 'delta_star', 'type': float, 'help': "Cluster width delta*"},
        CHI,
        {'name': '--config', 'help': "Experiment file (JSON or TOML)"},
        Args.seed,
        Args.output,
        Args.verbose,
    ]

    def __call__(self, settings, args):
        return GaudinMonodromy(settings, args).run(args)


class cmd_pentagon(Command):
    help = "Transport around the pentagon of limit points for three factors"
    opt_args = [
        Args.algebra,
        {
            'name': '--lambda',
            'dest': 'weight',
            'default': '1',
            'help': "Highest weight of each factor",
        },
        CHI,
        {'name': '--eps', 'type': float, 'help': "Small gap"},
        {'name': '--big', 'type': float, 'help': "Large gap"},
        Args.seed,
        Args.output,
        Args.verbose,
    ]

    def __call__(self, settings, args):
        return GaudinPentagon(settings, args).run(args)


if __name__ == '__main__':
    opts = parse_opts(SERVICE_NAME, globals())
    status = opts.command(load_settings(settings_path(opts)), opts)
    sys.exit(exit_status(status))
