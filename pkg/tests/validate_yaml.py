#!/usr/bin/env python3
'''
Validate all yaml files in the config/ directory
'''

import os
import yaml
import sys

# parameters every case kind needs
REQUIRED = {
    'crystal_sizes': ['type'],
    'tensor_decomposition': ['type'],
    'schutzenberger': ['type'],
    'internal_relations': ['type'],
    'external_relations': ['type', 'weight', 'n'],
    'external_formula': ['type', 'weight', 'n'],
    'hexagon': ['type', 'triples'],
    'external_monodromy': ['algebra', 'spins', 'mu', 'generators'],
    'internal_monodromy': ['algebra', 'lambda', 'generators'],
    'eigenline_crystal': ['algebra', 'lambda'],
    'tensor_transport': ['algebra', 'first', 'second'],
    'commutor_square': ['algebra', 'first', 'second'],
    'pentagon': [],
}

# kinds that need either explicit weights or a coordinate bound
WEIGHT_GRID = ('crystal_sizes', 'tensor_decomposition', 'schutzenberger',
               'internal_relations')


def validate_case(suite, case):
    '''
    A case has an id, a known kind and the parameters of that kind
    '''
    case_id = case.get('id')
    if not case_id:
        raise yaml.YAMLError(f"Case without id in suite {suite}: {case}")
    kind = case.get('kind')
    if kind not in REQUIRED:
        raise yaml.YAMLError(f"Unknown kind {kind} for case {suite}/{case_id}")
    for key in REQUIRED[kind]:
        if key not in case:
            raise yaml.YAMLError(f"Missing {key} for case {suite}/{case_id}")
    if kind in WEIGHT_GRID and 'weights' not in case and 'max_coord' not in case:
        raise yaml.YAMLError(f"Case {suite}/{case_id} needs weights or max_coord")
    if kind == 'hexagon':
        for triple in case['triples']:
            if len(triple) != 3:
                raise yaml.YAMLError(f"Hexagon triple of {suite}/{case_id} is not a triple")
    if kind in ('external_monodromy', 'internal_monodromy') and not case['generators']:
        raise yaml.YAMLError(f"No generators for case {suite}/{case_id}")


def validate_suites(suites):
    '''
    Each suite is a non-empty list of cases with unique ids
    '''
    for name, cases in suites.items():
        if not isinstance(cases, list) or not cases:
            raise yaml.YAMLError(f"Suite {name} must be a non-empty list of cases")
        ids = set()
        for case in cases:
            validate_case(name, case)
            if case['id'] in ids:
                raise yaml.YAMLError(f"Duplicate case id {case['id']} in suite {name}")
            ids.add(case['id'])


def validate_yaml(dir='config'):
    '''
    Validate all yaml files in the config/ directory
    '''
    found = False
    for file in sorted(os.listdir(dir)):
        if file.endswith('.yaml'):
            print(f"Validating {file}")
            fpath = os.path.join(dir, file)
            with open(fpath, 'r') as stream:
                try:
                    data = yaml.safe_load(stream)
                    suites = data.get('suites')
                    if suites:
                        found = True
                        validate_suites(suites)
                except yaml.YAMLError as exc:
                    print(f'Error in {file}: {exc}')
                    sys.exit(1)
    if not found:
        print("Warning: no suites defined")
    if 'desk' not in suites_names(dir):
        print("Warning: the desk suite is missing")


def suites_names(dir='config'):
    names = set()
    for file in os.listdir(dir):
        if file.endswith('.yaml'):
            with open(os.path.join(dir, file), 'r') as stream:
                names.update((yaml.safe_load(stream) or {}).get('suites', {}) or {})
    return names


if __name__ == '__main__':
    if len(sys.argv) > 1:
        validate_yaml(sys.argv[1])
    else:
        validate_yaml()
