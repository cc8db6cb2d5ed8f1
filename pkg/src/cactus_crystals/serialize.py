# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Deterministic JSON output and atomic file writes.

from fractions import Fraction
import json
import math
import os
import re
import tempfile

import numpy as np


_FLOAT = re.compile(r'"\\u0000f([^"]*)"')


def jsonable(obj):
    """Convert results to plain JSON values with a fixed field order"""
    if hasattr(obj, 'to_json'):
        return jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _mark_floats(value):
    if isinstance(value, dict):
        return {k: _mark_floats(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_mark_floats(v) for v in value]
    if isinstance(value, float):
        if math.isfinite(value):
            return '\0f' + format(value, '.17g')
        return None
    return value


def dumps(obj):
    """Sorted keys, two-space indent and 17 significant digits per float"""
    text = json.dumps(_mark_floats(jsonable(obj)), indent=2, sort_keys=True)
    return _FLOAT.sub(lambda m: m.group(1), text) + '\n'


def write_atomic(path, text):
    """Write text to path through a temporary file in the same directory"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix='.ccl-')
    try:
        with os.fdopen(fd, 'w') as out:
            out.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def emit(obj, output=None):
    """JSON to the output file, or the JSON text when no file is given"""
    text = dumps(obj)
    if output:
        write_atomic(output, text)
    return text
