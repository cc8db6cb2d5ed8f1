# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Command line helpers shared by the service scripts.

"""Command line

Every service script defines `cmd_<verb>` classes deriving from the kernelci
`Command`, each with a `help` string and `args` / `opt_args` lists of
argparse keyword dictionaries, and parses them with `parse_opts()`.  The
settings file is given with the global `--settings` option before the verb.
"""

import sys

from kernelci.legacy.cli import Args as KernelCIArgs, parse_opts

from cactus_crystals.errors import UsageError

EXIT_CODES = {
    True: 0,
    'equal': 0,
    False: 1,
    'mismatch': 1,
    'error': 1,
    'inconclusive': 2,
}

USAGE_EXIT = 3

HELP = ('-h', '--help')


class Args(KernelCIArgs):
    """Arguments of the ccl services"""

    seed = {
        'name': '--seed',
        'type': int,
        'help': "Random seed (default: CCL_SEED, then the settings file)",
    }

    output = {
        'name': '--output',
        'help': "Write the result to this file instead of stdout",
    }

    root_type = {
        'name': '--type',
        'help': "Cartan type, e.g. A2, B2 or G2",
    }

    algebra = {
        'name': '--g',
        'dest': 'algebra',
        'default': 'sl2',
        'choices': ['sl2', 'sl3'],
        'help': "Lie algebra of the numeric families",
    }


def _split_verb(argv):
    """Return the verb and the arguments following it"""
    tokens = iter(enumerate(argv))
    for pos, token in tokens:
        if token == '--settings':
            next(tokens, None)
        elif not token.startswith('-'):
            return token, argv[pos + 1:]
    return None, []


def _option_given(name, argv):
    return any(token == name or token.startswith(f"{name}=") for token in argv)


def check_arguments(prog, glob, argv):
    """Reject a missing or unknown verb and missing required options"""
    verb, rest = _split_verb(argv)
    if verb is None:
        raise UsageError(f"{prog}: a command is required")
    command = glob.get(f"cmd_{verb}")
    if command is None:
        raise UsageError(f"{prog}: unknown command {verb}")
    if any(token in HELP for token in rest):
        return
    missing = [arg['name'] for arg in command.args or []
               if not _option_given(arg['name'], rest)]
    if missing:
        raise UsageError(f"{prog} {verb}: missing {', '.join(missing)}")


def parse_argv(prog, glob, argv):
    """parse_opts() on an explicit argument list instead of sys.argv

    Errors reported by argparse are raised as UsageError, a help request
    exits with status 0 as usual.
    """
    argv = list(argv)
    if not any(token in HELP for token in argv):
        check_arguments(prog, glob, argv)
    saved = sys.argv
    sys.argv = [prog] + argv
    try:
        return parse_opts(prog, glob)
    except SystemExit as exc:
        if exc.code:
            raise UsageError(f"{prog}: invalid arguments {' '.join(argv)}") from exc
        raise
    finally:
        sys.argv = saved


def settings_path(opts):
    path = getattr(opts, 'settings', None)
    return path if isinstance(path, str) else None


def split_list(text, sep=','):
    return [item.strip() for item in text.split(sep) if item.strip()]


def parse_floats(text, what='value'):
    try:
        return tuple(float(x) for x in split_list(text))
    except ValueError as exc:
        raise UsageError(f"Invalid {what}: {text}") from exc


def exit_status(status):
    return EXIT_CODES.get(status, 1)
