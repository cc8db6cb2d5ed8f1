# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Settings (TOML) and suite presets (YAML).

import os
from dataclasses import dataclass, fields

import toml
import yaml

import cactus_crystals
from cactus_crystals.errors import SettingsError


@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds used by the eigenline engine"""
    step_overlap: float = 0.9
    handoff_fidelity: float = 0.99
    max_depth: int = 40
    residual: float = 1e-7
    commutator: float = 1e-8
    separation: float = 1e-9
    retries: int = 5
    handoff_halvings: int = 10
    initial_steps: int = 32

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise SettingsError(f"Unknown tolerance keys: {sorted(unknown)}")
        return cls(**data)

    def update(self, data):
        return Tolerances.from_dict({**self.as_dict(), **(data or {})})

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def load_settings(path=None):
    """Load the TOML settings file

    The path defaults to the CCL_SETTINGS environment variable and then to
    config/ccl.toml.  A missing file yields empty settings so the library
    defaults apply.
    """
    path = path or os.getenv('CCL_SETTINGS', cactus_crystals.SETTINGS_FILE)
    try:
        return toml.load(path)
    except FileNotFoundError:
        return {}
    except toml.TomlDecodeError as exc:
        raise SettingsError(f"Invalid settings file {path}: {exc}") from exc


def section(settings, name):
    """Return a service section merged over the [DEFAULT] values"""
    merged = dict(settings.get('DEFAULT', {}))
    merged.update(settings.get(name, {}))
    return merged


def tolerances(settings, name='gaudin'):
    return Tolerances.from_dict(section(settings, name).get('tolerances', {}))


def resolve_seed(explicit=None, settings=None):
    """Command line first, then CCL_SEED, then the settings default"""
    if explicit is not None:
        return int(explicit)
    env = os.getenv('CCL_SEED')
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise SettingsError(f"CCL_SEED is not an integer: {env}") from exc
    return int((settings or {}).get('DEFAULT', {}).get('default_seed', 0))


def load_experiment(path):
    """Load a single experiment description (JSON or TOML)"""
    with open(path, 'r') as exp_file:
        text = exp_file.read()
    if path.endswith('.toml'):
        return toml.loads(text)
    return yaml.safe_load(text)


def load_suites(path=None):
    path = path or cactus_crystals.SUITES_FILE
    with open(path, 'r') as suites_file:
        data = yaml.safe_load(suites_file)
    if not isinstance(data, dict) or 'suites' not in data:
        raise SettingsError(f"No suites defined in {path}")
    return data['suites']
