#!/usr/bin/env python3
#
# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

"""Verify service: run suites of crystal and monodromy cases

The suites are defined in config/suites.yaml.  The JSON report goes to
stdout or --output, a JUnit XML file can be written with --junit and a text
summary is logged.
"""

import sys

from kernelci.legacy.cli import Command, parse_opts

from cactus_crystals.cli import Args, exit_status, settings_path
from cactus_crystals.errors import UsageError
from cactus_crystals.harness import (
    context_from_settings,
    run_case,
    run_cases,
    select_suite,
    suite_status,
)
from cactus_crystals.report import render_junit, render_summary, template_env
from cactus_crystals.serialize import write_atomic
from cactus_crystals.settings import load_settings, load_suites
from base import Service

SERVICE_NAME = 'verify'

SUITE = {
    'name': '--suite',
    'help': "Suite name in the suites file (default from settings, then 'desk')",
}

SUITES_FILE = {
    'name': '--suites',
    'help': "Path to the YAML suites file",
}


class Verify(Service):

    def __init__(self, settings, args):
        super().__init__(settings, args, SERVICE_NAME)
        self._template_env = template_env(self._settings.get('templates_dir'))

    def _setup(self, args):
        suites = load_suites(args.suites or self._settings.get('suites_file'))
        name = args.suite or self._settings.get('suite', 'desk')
        cases = select_suite(suites, name)
        ctx = context_from_settings(self._all_settings, args.seed)
        self.log.info(f"Suite {name}: {len(cases)} cases, seed {ctx.seed}")
        return {'args': args, 'suite': name, 'cases': cases, 'ctx': ctx}

    def _select(self, context):
        return context['cases']

    def _run(self, context):
        args = context['args']
        cases = self._select(context)
        reports = run_cases(cases, context['ctx'], self._workers(args))
        status = suite_status(reports)
        summary = render_summary(reports, context['suite'], status, self._template_env)
        for line in summary.rstrip('\n').split('\n'):
            self.log.info(line)
        if getattr(args, 'junit', None):
            write_atomic(args.junit, render_junit(reports, context['suite'],
                                                  self._template_env))
            self.log.info(f"JUnit report written to {args.junit}")
        self._emit({'suite': context['suite'], 'status': status,
                    'seed': context['ctx'].seed, 'cases': reports}, args.output)
        return status

    def _workers(self, args):
        workers = getattr(args, 'workers', None) or self._settings.get('workers')
        return int(workers) if workers else None


class VerifyCase(Verify):

    def _select(self, context):
        wanted = context['args'].case
        cases = [case for case in context['cases']
                 if str(case.get('id', case.get('kind'))) == wanted]
        if not cases:
            raise UsageError(f"No case {wanted} in suite {context['suite']}")
        return cases

    def _workers(self, args):
        return 1


class cmd_all(Command):
    help = "Run every case of a suite"
    opt_args = [
        SUITE,
        SUITES_FILE,
        {'name': '--junit', 'help': "Write a JUnit XML report to this file"},
        {'name': '--workers', 'type': int, 'help': "Number of worker threads"},
        Args.seed,
        Args.output,
        Args.verbose,
    ]

    def __call__(self, settings, args):
        return Verify(settings, args).run(args)


class cmd_case(Command):
    help = "Run a single case of a suite"
    args = [{'name': '--case', 'help': "Case id"}]
    opt_args = [SUITE, SUITES_FILE, Args.seed, Args.output, Args.verbose]

    def __call__(self, settings, args):
        return VerifyCase(settings, args).run(args)


if __name__ == '__main__':
    opts = parse_opts(SERVICE_NAME, globals())
    status = opts.command(load_settings(settings_path(opts)), opts)
    sys.exit(exit_status(status))
