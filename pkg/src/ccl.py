#!/usr/bin/env python3
#
# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

"""Command line entry point dispatching to the service scripts

    ccl crystal build --type A2 --lambda 1,1
    ccl verify all --suite desk

Exit codes: 0 success or equal, 1 mismatch or failure, 2 inconclusive,
3 usage error.
"""

import sys

import crystal
import gaudin
import moduli
import verify
from cactus_crystals.cli import USAGE_EXIT, exit_status, parse_argv, settings_path
from cactus_crystals.errors import SettingsError, UsageError
from cactus_crystals.settings import load_settings

GROUPS = {
    'crystal': crystal,
    'moduli': moduli,
    'gaudin': gaudin,
    'verify': verify,
}


def _usage():
    return f"usage: ccl {{{','.join(GROUPS)}}} <command> [options]"


def run(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ('-h', '--help'):
        print(_usage(), file=sys.stderr)
        return 0 if argv else USAGE_EXIT
    group = GROUPS.get(argv[0])
    if group is None:
        print(f"ccl: unknown command group {argv[0]}\n{_usage()}", file=sys.stderr)
        return USAGE_EXIT
    try:
        opts = parse_argv(group.SERVICE_NAME, vars(group), argv[1:])
        settings = load_settings(settings_path(opts))
        status = opts.command(settings, opts)
    except UsageError as exc:
        print(f"ccl: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except SettingsError as exc:
        print(f"ccl: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    return exit_status(status)


if __name__ == '__main__':
    sys.exit(run())
