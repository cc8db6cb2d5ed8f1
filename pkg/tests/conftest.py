# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, 'src'))

from cactus_crystals.rootdata import build_root_system  # noqa: E402


@pytest.fixture(autouse=True)
def repo_root(monkeypatch):
    """Services resolve config/ relative to the working directory"""
    monkeypatch.chdir(ROOT)
    monkeypatch.delenv('CCL_SEED', raising=False)
    monkeypatch.delenv('CCL_SETTINGS', raising=False)
    return ROOT


@pytest.fixture
def a1():
    return build_root_system('A1')


@pytest.fixture
def a2():
    return build_root_system('A2')
