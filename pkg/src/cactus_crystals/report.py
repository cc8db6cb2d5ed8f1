# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Report rendering with jinja2 templates.

import jinja2

import cactus_crystals
from cactus_crystals.serialize import jsonable


def template_env(templates_dir=None):
    return jinja2.Environment(
        loader=jinja2.FileSystemLoader(templates_dir or cactus_crystals.TEMPLATES_DIR),
        autoescape=jinja2.select_autoescape(['xml.jinja2']),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )


def _counts(reports):
    counts = {'equal': 0, 'mismatch': 0, 'inconclusive': 0, 'error': 0}
    for report in reports:
        counts[report.status] += 1
    return counts


def render_junit(reports, suite, env=None):
    env = env or template_env()
    return env.get_template('junit.xml.jinja2').render(
        suite=suite, reports=reports, counts=_counts(reports),
        elapsed=sum(r.elapsed for r in reports))


def render_summary(reports, suite, status, env=None):
    env = env or template_env()
    return env.get_template('summary.txt.jinja2').render(
        suite=suite, reports=reports, counts=_counts(reports), status=status)


def render_dot(crystal, env=None):
    env = env or template_env()
    data = jsonable(crystal.to_json())
    return env.get_template('crystal.dot.jinja2').render(crystal=data)
