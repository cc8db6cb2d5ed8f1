#!/usr/bin/env python3
#
# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

"""Moduli service: nested set charts and cactus path schedules"""

from fractions import Fraction
import sys

from kernelci.legacy.cli import Command, parse_opts

from cactus_crystals.cactus import parse_word
from cactus_crystals.cli import (
    Args,
    exit_status,
    parse_floats,
    settings_path,
    split_list,
)
from cactus_crystals.errors import UsageError
from cactus_crystals.moduli import (
    cactus_path_schedule,
    chart_to_configuration,
    parse_tree,
    pentagon_schedule,
    print_tree,
    tree_to_nested_set,
)
from cactus_crystals.settings import load_settings
from base import Service

SERVICE_NAME = 'moduli'


class ModuliChart(Service):

    def __init__(self, settings, args):
        super().__init__(settings, args, SERVICE_NAME)

    def _run(self, args):
        tree = parse_tree(args.tree)
        chart = tree_to_nested_set(tree)
        names = chart.coordinates()
        result = {
            'tree': print_tree(tree),
            'nested_sets': [sorted(p) for p in chart.nested_sets],
            'basis': [{'set': sorted(p), 'alpha': list(chart.basis[p])}
                      for p in chart.nested_sets],
            'coordinates': [sorted(p) for p in names],
        }
        if args.coords is not None:
            try:
                values = [Fraction(x) for x in split_list(args.coords)]
            except ValueError as exc:
                raise UsageError(f"Invalid chart coordinates: {args.coords}") from exc
            if len(values) != len(names):
                raise UsageError(f"{len(names)} chart coordinates expected, got {len(values)}")
            point = chart_to_configuration(chart, dict(zip(names, values)))
            result['point'] = point.to_json()
            self.log.info(f"{result['tree']}: {point}")
        self._emit(result, args.output)
        return True


class ModuliSchedule(Service):

    def __init__(self, settings, args):
        super().__init__(settings, args, SERVICE_NAME)

    def _run(self, args):
        gaudin = self._all_settings.get('gaudin', {})
        if args.pentagon:
            eps = args.eps if args.eps is not None else gaudin.get('pentagon_eps', 1e-2)
            big = args.big if args.big is not None else gaudin.get('pentagon_big', 1e2)
            schedule = pentagon_schedule(float(eps), float(big))
        else:
            if args.n is None or args.gen is None:
                raise UsageError("schedule needs --n and --gen (or --pentagon)")
            word = parse_word(args.gen, 'external', n=args.n, reduce=False)
            if len(word) != 1:
                raise UsageError(f"{args.gen} is not a single generator")
            base = parse_floats(args.base, 'base') if args.base else tuple(
                float(k) for k in range(args.n))
            delta = args.delta if args.delta is not None else gaudin.get('delta', 1e-2)
            schedule = cactus_path_schedule(args.n, word.letters[0], base, float(delta))
        self._emit(schedule, args.output)
        return True


class cmd_chart(Command):
    help = "Nested set chart of a bracketing and its point for given coordinates"
    args = [
        {'name': '--tree', 'help': "Bracketing of 1..n, e.g. '((12)3)4'"},
    ]
    opt_args = [
        {
            'name': '--coords',
            'help': "Chart coordinates in nested set order, e.g. '1/2,0'",
        },
        Args.output,
        Args.verbose,
    ]

    def __call__(self, settings, args):
        return ModuliChart(settings, args).run(args)


class cmd_schedule(Command):
    help = "Real parameter path of an external generator s_pq or of the pentagon"
    opt_args = [
        {'name': '--n', 'type': int, 'help': "Number of marked points"},
        {'name': '--gen', 'help': "External generator, e.g. s13"},
        {'name': '--base', 'help': "Increasing base configuration, e.g. 0,1,2"},
        {'name': '--delta', 'type': float, 'help': "Cluster width delta*"},
        {
            'name': '--pentagon',
            'action': 'store_true',
            'help': "Pentagon loop for n = 3 instead of a generator",
        },
        {'name': '--eps', 'type': float, 'help': "Pentagon small gap"},
        {'name': '--big', 'type': float, 'help': "Pentagon large gap"},
        Args.output,
        Args.verbose,
    ]

    def __call__(self, settings, args):
        return ModuliSchedule(settings, args).run(args)


if __name__ == '__main__':
    opts = parse_opts(SERVICE_NAME, globals())
    status = opts.command(load_settings(settings_path(opts)), opts)
    sys.exit(exit_status(status))
