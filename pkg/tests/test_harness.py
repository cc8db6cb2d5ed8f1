# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

import pytest

from cactus_crystals import harness
from cactus_crystals.errors import (
    CactusError,
    SettingsError,
    SimpleSpectrumViolation,
    StepCollapse,
)
from cactus_crystals.harness import (
    HarnessContext,
    VerificationReport,
    chain_map,
    context_from_settings,
    exit_code,
    external_generator,
    internal_subset,
    run_case,
    run_cases,
    select_suite,
    suite_status,
)
from cactus_crystals.monodromy import CommutorSquare
from cactus_crystals.settings import load_settings, load_suites


@pytest.fixture
def quick():
    return select_suite(load_suites(), 'quick')


@pytest.mark.parametrize('case', [
    {'id': 'sizes', 'kind': 'crystal_sizes', 'type': 'B2', 'max_coord': 1},
    {'id': 'tensor', 'kind': 'tensor_decomposition', 'type': 'A2', 'max_coord': 1},
    {'id': 'xi', 'kind': 'schutzenberger', 'type': 'G2', 'weights': ['1,0']},
    {'id': 'internal', 'kind': 'internal_relations', 'type': 'A2', 'weights': ['1,1']},
    {'id': 'external', 'kind': 'external_relations', 'type': 'A1', 'weight': 1, 'n': 3},
    {'id': 'formula', 'kind': 'external_formula', 'type': 'A1', 'weight': 2, 'n': 3},
    {'id': 'hexagon', 'kind': 'hexagon', 'type': 'A1', 'triples': [[1, 1, 1]]},
])
def test_combinatorial_cases(case):
    report = run_case(case)
    assert report.status == 'equal', report.diagnostics
    assert report.case_id == case['id']
    assert report.to_json()['kind'] == case['kind']


def test_sizes_report():
    report = run_case({'id': 's', 'kind': 'crystal_sizes', 'type': 'A2', 'weights': ['1,1']})
    assert report.crystal == {'1,1': 8}
    assert report.crystal == report.monodromy


def test_unknown_kind():
    with pytest.raises(SettingsError):
        run_case({'id': 'x', 'kind': 'nothing'})


def test_error_status():
    report = run_case({'id': 'bad', 'kind': 'crystal_sizes', 'type': 'Q7'})
    assert report.status == 'error'
    assert report.diagnostics['type'] == 'RootDataError'


def test_mixed_spins_rejected():
    report = run_case({'id': 'mixed', 'kind': 'external_monodromy', 'algebra': 'sl2',
                       'spins': '1,2', 'mu': '1', 'generators': ['s12']})
    assert report.status == 'error'
    assert report.diagnostics['type'] == 'SettingsError'


def test_generators():
    assert external_generator('s13', 3) == (1, 3)
    assert internal_subset('sl3', 's12') == frozenset({1, 2})
    assert internal_subset('sl2', 'sI') == frozenset({1})
    with pytest.raises(SettingsError):
        external_generator('s12 s23', 3)


def test_chain_map():
    assert chain_map({((2,), (1,)): ((0,), (1,))}) == {'2 > 1': '0 > 1'}


def test_suite_status():
    def reports(*statuses):
        return [VerificationReport(str(k), 'hexagon', '', s) for k, s in enumerate(statuses)]

    assert suite_status(reports('equal', 'equal')) == 'equal'
    assert suite_status(reports('equal', 'inconclusive')) == 'inconclusive'
    assert suite_status(reports('inconclusive', 'mismatch')) == 'mismatch'
    assert suite_status(reports('mismatch', 'error')) == 'error'
    assert suite_status([]) == 'equal'
    assert [exit_code(s) for s in ('equal', 'mismatch', 'error', 'inconclusive')] == [0, 1, 1, 2]


def test_run_cases(quick):
    reports = run_cases(quick, HarnessContext(), workers=2)
    assert [r.case_id for r in reports] == sorted(case['id'] for case in quick)
    assert suite_status(reports) == 'equal'


def test_duplicate_ids():
    case = {'id': 'same', 'kind': 'crystal_sizes', 'type': 'A1'}
    with pytest.raises(SettingsError):
        run_cases([case, dict(case)])


def test_unknown_suite():
    with pytest.raises(SettingsError):
        select_suite(load_suites(), 'nothing')


def test_context_from_settings(monkeypatch):
    settings = load_settings()
    ctx = context_from_settings(settings)
    assert ctx.seed == 0
    assert ctx.tol.step_overlap == 0.9
    assert ctx.gaudin['delta'] == 1e-2
    assert 'tolerances' not in ctx.gaudin
    assert context_from_settings(settings, 7).seed == 7
    monkeypatch.setenv('CCL_SEED', '3')
    assert context_from_settings(settings).seed == 3


@pytest.mark.slow
def test_external_monodromy_reruns():
    report = run_case({'id': 'spins', 'kind': 'external_monodromy', 'algebra': 'sl2',
                       'spins': '1,1,1', 'mu': '1', 'generators': ['s12', 's13']})
    assert report.status == 'equal', report.diagnostics
    for name in ('s12', 's13'):
        assert report.diagnostics[name]['gauge_and_seed_stable']
        assert report.diagnostics[name]['delta_stable']


COMMUTOR_CASE = {'id': 'square', 'kind': 'commutor_square', 'algebra': 'sl2',
                 'first': '1', 'second': '1'}


@pytest.mark.parametrize('exc, status', [
    (StepCollapse("step below minimum", location={'t': 0.5}), 'inconclusive'),
    (SimpleSpectrumViolation("repeated label"), 'inconclusive'),
    (CactusError("broken"), 'error'),
])
def test_failure_statuses(monkeypatch, exc, status):
    def fail(*args, **kwargs):
        raise exc

    monkeypatch.setattr(harness, 'commutor_square', fail)
    report = run_case(COMMUTOR_CASE)
    assert report.status == status
    assert report.diagnostics['type'] == type(exc).__name__


def test_inconclusive_location(monkeypatch):
    def fail(*args, **kwargs):
        raise StepCollapse("step below minimum", location={'t': 0.5})

    monkeypatch.setattr(harness, 'commutor_square', fail)
    assert run_case(COMMUTOR_CASE).diagnostics['location'] == {'t': 0.5}


def test_mismatch_status(monkeypatch):
    monkeypatch.setattr(harness, 'commutor_square',
                        lambda *args, **kwargs: CommutorSquare({0: 1}, {0: 0}, True))
    report = run_case(COMMUTOR_CASE)
    assert report.status == 'mismatch'
    assert report.crystal != report.monodromy
