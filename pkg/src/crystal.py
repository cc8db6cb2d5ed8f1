#!/usr/bin/env python3
#
# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

"""Crystal service: build crystals, tensor products, commutors and cactus
actions"""

import sys

from cactus_crystals.cactus import (
    check_morphism,
    check_symmetry,
    commutor,
    external_cactus_action,
    internal_cactus_action,
    parse_word,
)
from kernelci.legacy.cli import Command, parse_opts

from cactus_crystals.cli import Args, exit_status, settings_path, split_list
from cactus_crystals.crystal import (
    check_axioms,
    check_normal,
    components,
    generate_crystal,
    tensor_product,
)
from cactus_crystals.errors import RootDataError, UsageError
from cactus_crystals.report import render_dot, template_env
from cactus_crystals.rootdata import (
    build_root_system,
    character,
    decompose_character,
    format_weight,
    parse_weight,
    tensor_character,
)
from cactus_crystals.serialize import write_atomic
from cactus_crystals.settings import load_settings
from base import Service

SERVICE_NAME = 'crystal'

WEIGHT = {
    'name': '--lambda',
    'dest': 'weight',
    'help': "Highest weight as fundamental weight coordinates, e.g. 1,1",
}

FACTORS = {
    'name': '--factors',
    'help': "Highest weights of the tensor factors separated by ';', e.g. '1,0;0,1'",
}


def _factor_weights(rs, text):
    weights = [_dominant(rs, w, '--factors') for w in split_list(text, ';')]
    if not weights:
        raise UsageError("--factors needs at least one weight")
    return weights


def _dominant(rs, text, option):
    try:
        weight = parse_weight(text)
    except RootDataError as exc:
        raise UsageError(f"{option}: {exc}") from exc
    if len(weight) != rs.rank or not rs.is_dominant(weight) or not rs.is_integral(weight):
        raise UsageError(f"{option} {text} is not a dominant weight of {rs.type_label}")
    return weight


class CrystalService(Service):

    def __init__(self, settings, args):
        super().__init__(settings, args, SERVICE_NAME)

    def _setup(self, args):
        try:
            rs = build_root_system(args.type)
        except RootDataError as exc:
            raise UsageError(str(exc)) from exc
        weights = {}
        for option, dest in (('--lambda', 'weight'), ('--first', 'first'),
                             ('--second', 'second')):
            text = getattr(args, dest, None)
            if text is not None:
                weights[dest] = _dominant(rs, text, option)
        factors = getattr(args, 'factors', None)
        if factors is not None:
            weights['factors'] = _factor_weights(rs, factors)
        return {'args': args, 'rs': rs, 'weights': weights}


class CrystalBuild(CrystalService):

    def _run(self, ctx):
        args, rs = ctx['args'], ctx['rs']
        crystal = generate_crystal(rs, ctx['weights']['weight'])
        axioms = check_axioms(crystal)
        self.log.info(f"{crystal!r}: {len(crystal)} elements")
        if args.format == 'dot':
            text = render_dot(crystal, template_env(self._settings.get('templates_dir')))
            if args.output:
                write_atomic(args.output, text)
            else:
                sys.stdout.write(text)
        else:
            result = crystal.to_json()
            result['size'] = len(crystal)
            self._emit(result, args.output)
        return bool(axioms)


class CrystalTensor(CrystalService):

    def _run(self, ctx):
        args, rs = ctx['args'], ctx['rs']
        weights = ctx['weights']['factors']
        product = tensor_product(*(generate_crystal(rs, w) for w in weights))
        found = {}
        for top, _ in components(product):
            key = format_weight(product.wt(top))
            found[key] = found.get(key, 0) + 1
        char = character(rs, weights[0])
        for weight in weights[1:]:
            char = tensor_character(rs, char, character(rs, weight))
        oracle = {format_weight(w): m for w, m in decompose_character(rs, char).items()}
        normal = check_normal(product)
        status = 'equal' if found == oracle and normal else 'mismatch'
        self._emit({
            'factors': [format_weight(w) for w in weights],
            'size': len(product),
            'components': dict(sorted(found.items())),
            'oracle': dict(sorted(oracle.items())),
            'normal': bool(normal),
            'status': status,
        }, args.output)
        return status


class CrystalCommutor(CrystalService):

    def _run(self, ctx):
        args, rs = ctx['args'], ctx['rs']
        b1 = generate_crystal(rs, ctx['weights']['first'])
        b2 = generate_crystal(rs, ctx['weights']['second'])
        sigma = commutor(b1, b2)
        symmetric = check_symmetry(b1, b2)
        result = sigma.to_json()
        result['morphism'] = bool(check_morphism(sigma))
        result['symmetric'] = bool(symmetric)
        self._emit(result, args.output)
        return result['morphism'] and result['symmetric']


class CrystalCactus(CrystalService):

    def _run(self, ctx):
        args, rs = ctx['args'], ctx['rs']
        if args.flavor == 'internal':
            if 'weight' not in ctx['weights']:
                raise UsageError("internal words need --lambda")
            crystal = generate_crystal(rs, ctx['weights']['weight'])
            word = parse_word(args.word, 'internal', rs)
            perm = internal_cactus_action(word, crystal)
        else:
            if 'factors' not in ctx['weights']:
                raise UsageError("external words need --factors")
            factors = [generate_crystal(rs, w) for w in ctx['weights']['factors']]
            word = parse_word(args.word, 'external', n=len(factors))
            perm = external_cactus_action(word, factors)
        result = perm.to_json()
        result['word'] = str(word)
        result['flavor'] = args.flavor
        result['labels'] = [str(b) for b in perm.domain.keys]
        self._emit(result, args.output)
        return True


class cmd_build(Command):
    help = "Build the crystal B(lambda)"
    args = [Args.root_type, WEIGHT]
    opt_args = [
        {
            'name': '--format',
            'choices': ['json', 'dot'],
            'default': 'json',
            'help': "Output format",
        },
        Args.output,
        Args.verbose,
    ]

    def __call__(self, settings, args):
        return CrystalBuild(settings, args).run(args)


class cmd_tensor(Command):
    help = "Decompose a tensor product crystal and compare with the character"
    args = [Args.root_type, FACTORS]
    opt_args = [Args.output, Args.verbose]

    def __call__(self, settings, args):
        return CrystalTensor(settings, args).run(args)


class cmd_commutor(Command):
    help = "Crystal commutor B1 x B2 -> B2 x B1"
    args = [
        Args.root_type,
        {'name': '--first', 'help': "Highest weight of B1"},
        {'name': '--second', 'help': "Highest weight of B2"},
    ]
    opt_args = [Args.output, Args.verbose]

    def __call__(self, settings, args):
        return CrystalCommutor(settings, args).run(args)


class cmd_cactus(Command):
    help = """\
Action of a cactus word.  Internal letters: sI, s1, s12, s_1_2 (node sets);
external letters: s12, s_10_12 (1 <= p < q <= n).  The rightmost letter acts
first.\
"""
    args = [
        Args.root_type,
        {'name': '--word', 'help': "Cactus word, e.g. 's12 s1' or 's13*s12'"},
    ]
    opt_args = [
        {
            'name': '--flavor',
            'choices': ['internal', 'external'],
            'default': 'internal',
            'help': "Internal (xi_J on B(lambda)) or external (s_pq on B^n)",
        },
        WEIGHT,
        FACTORS,
        Args.output,
        Args.verbose,
    ]

    def __call__(self, settings, args):
        return CrystalCactus(settings, args).run(args)


if __name__ == '__main__':
    opts = parse_opts(SERVICE_NAME, globals())
    status = opts.command(load_settings(settings_path(opts)), opts)
    sys.exit(exit_status(status))
