# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Joint eigenlines of commuting families and their transport along paths.

"""Eigenlines

A joint eigenbasis is obtained from the symmetric eigendecomposition of a
random real combination of the generators restricted to an invariant block.
Transport follows the lines along a one-parameter family, matching each
step by the assignment maximizing the overlaps |<v_old, v_new>| and halving
the step whenever a matched overlap falls below the threshold.
"""

from dataclasses import dataclass, field
import logging

import numpy as np
import scipy.optimize

from cactus_crystals.errors import SimpleSpectrumViolation, StepCollapse
from cactus_crystals.settings import Tolerances

log = logging.getLogger(__name__)


@dataclass
class EigenlineSet:
    """Unit vectors (columns, ambient coordinates) with their joint labels"""
    vectors: np.ndarray
    labels: np.ndarray
    weights: list
    params: dict = field(default_factory=dict)

    def __len__(self):
        return self.vectors.shape[1]

    def line(self, k):
        return self.vectors[:, k]

    def reorder(self, order):
        return EigenlineSet(self.vectors[:, order], self.labels[order],
                            [self.weights[k] for k in order], dict(self.params))

    def to_json(self):
        return {
            'params': self.params,
            'weights': [list(w) for w in self.weights],
            'labels': self.labels.tolist(),
        }


@dataclass
class Transported:
    lines: EigenlineSet
    trail: list = field(default_factory=list)
    steps: int = 0
    halvings: int = 0

    @property
    def min_overlap(self):
        return min((entry['overlap'] for entry in self.trail), default=1.0)


@dataclass
class MonodromyResult:
    """Permutation of eigenline indices with the diagnostics of the run"""
    permutation: tuple
    trail: list = field(default_factory=list)
    seed: int = None
    params: dict = field(default_factory=dict)
    fidelities: list = field(default_factory=list)

    def __len__(self):
        return len(self.permutation)

    def is_bijection(self):
        return sorted(self.permutation) == list(range(len(self.permutation)))

    @property
    def min_overlap(self):
        return min((entry['overlap'] for entry in self.trail), default=1.0)

    def to_json(self):
        return {
            'permutation': list(self.permutation),
            'seed': self.seed,
            'params': self.params,
            'min_overlap': self.min_overlap,
            'fidelities': list(self.fidelities),
            'steps': len(self.trail),
        }


def _fix_signs(vectors):
    for k in range(vectors.shape[1]):
        pivot = np.argmax(np.abs(vectors[:, k]))
        if vectors[pivot, k] < 0:
            vectors[:, k] = -vectors[:, k]
    return vectors


def _weights(family, vectors):
    space = family.space
    cartan = [space.delta('h', i) for i in space.rs.nodes]
    return [tuple(int(round(v @ h @ v)) for h in cartan) for v in vectors.T]


def _separated(labels, scales, separation):
    """All rows pairwise distinct in at least one scaled column"""
    k = labels.shape[0]
    for a in range(k):
        for b in range(a + 1, k):
            if np.all(np.abs(labels[a] - labels[b]) <= separation * scales):
                return False
    return True


def eigenlines(family, block, tol=None, rng=None):
    """Joint eigenlines of the family on the span of the block columns"""
    tol = tol or Tolerances()
    rng = rng if rng is not None else np.random.default_rng(0)
    size = block.shape[1]
    if size == 0:
        return EigenlineSet(np.zeros((block.shape[0], 0)), np.zeros((0, len(family))), [],
                            dict(family.params))
    restricted = family.restricted(block)
    norms = np.array([np.linalg.norm(a) for a in restricted])
    scales = np.maximum(1.0, norms)
    if size == 1:
        vectors = block.copy()
        labels = np.array([[a[0, 0] for a in restricted]])
        return EigenlineSet(_fix_signs(vectors), labels, _weights(family, vectors),
                            dict(family.params))
    for attempt in range(tol.retries):
        coeffs = rng.normal(size=len(restricted))
        combo = sum(c * a / n for c, a, n in zip(coeffs, restricted, norms) if n > 0)
        _, local = np.linalg.eigh((combo + combo.T) / 2)
        labels = np.array([[v @ a @ v for a in restricted] for v in local.T])
        residual = max(np.linalg.norm(a @ v - lab * v) / s
                       for v, row in zip(local.T, labels)
                       for a, lab, s in zip(restricted, row, scales))
        if residual <= tol.residual and _separated(labels, scales, tol.separation):
            break
        log.debug("eigenlines attempt %d rejected (residual %.3g)", attempt + 1, residual)
    else:
        raise SimpleSpectrumViolation(
            f"Family {family.params} does not separate a block of dimension {size}",
            location=family.params)
    order = np.lexsort(np.round(labels, 8).T[::-1])
    vectors = _fix_signs(block @ local[:, order])
    return EigenlineSet(vectors, labels[order], _weights(family, vectors), dict(family.params))


def match_lines(source, target):
    """Assignment k -> j maximizing |<source_k, target_j>|

    Returns the assignment, the matched overlaps and the signs of the
    matched inner products.
    """
    overlaps = source.T @ target
    rows, cols = scipy.optimize.linear_sum_assignment(-np.abs(overlaps))
    assignment = np.empty(len(rows), dtype=int)
    assignment[rows] = cols
    matched = overlaps[rows, cols]
    values = np.empty(len(rows))
    values[rows] = np.abs(matched)
    signs = np.empty(len(rows))
    signs[rows] = np.where(matched < 0, -1.0, 1.0)
    return assignment, values, signs


def transport(family_at, lines, block, tol=None, rng=None, t0=0.0, t1=1.0, label=''):
    """Follow lines from family_at(t0) to family_at(t1)

    The output keeps the input order: line k of the result is the
    continuation of line k of the input.
    """
    tol = tol or Tolerances()
    rng = rng if rng is not None else np.random.default_rng(0)
    current = lines.vectors.copy()
    result = Transported(lines)
    if len(lines) == 0 or t0 == t1:
        return result
    base_step = (t1 - t0) / tol.initial_steps
    step, depth, t = base_step, 0, t0
    latest = lines
    while (t1 - t) * np.sign(t1 - t0) > 0:
        t_next = t + step
        if (t_next - t1) * np.sign(t1 - t0) > 0:
            t_next = t1
        candidate = eigenlines(family_at(t_next), block, tol, rng)
        assignment, values, signs = match_lines(current, candidate.vectors)
        if values.min() >= tol.step_overlap:
            current = candidate.vectors[:, assignment] * signs
            latest = EigenlineSet(current, candidate.labels[assignment],
                                  [candidate.weights[j] for j in assignment],
                                  dict(candidate.params))
            result.trail.append({'t': float(t_next), 'step': float(t_next - t),
                                 'overlap': float(values.min())})
            result.steps += 1
            t = t_next
            if depth and abs(step) < abs(base_step):
                step *= 2
                depth -= 1
            continue
        step /= 2
        depth += 1
        result.halvings += 1
        if depth > tol.max_depth:
            raise StepCollapse(f"Step size collapsed while transporting {label} at t={t}",
                               location=float(t))
    result.lines = latest
    log.debug("transport %s: %d steps, %d halvings, min overlap %.4f",
              label, result.steps, result.halvings, result.min_overlap)
    return result


def flip_matching(lines, operator, threshold):
    """Index map k -> j with operator @ line_k parallel to line_j"""
    images = operator @ lines.vectors
    assignment, values, _ = match_lines(images, lines.vectors)
    if values.min() < threshold:
        raise SimpleSpectrumViolation(
            f"Operator does not permute the eigenlines (overlap {values.min():.4f})",
            location=lines.params)
    return tuple(int(j) for j in assignment), float(values.min())
