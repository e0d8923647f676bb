# coding=utf-8
r"""
pygmreduce
Copyright (C) 2021 PlayerG9

This program is free software: you can redistribute it and/or modify it under
the terms of the GNU Lesser General Public License as published by the Free
Software Foundation, either version 3 of the License, or (at your option) any
later version.

This program is distributed in the hope that it will be useful, but WITHOUT
ANY WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS
FOR A PARTICULAR PURPOSE. See the GNU Lesser General Public License for more
details.

You should have received a copy of the GNU Lesser General Public License
along with this program. If not, see <http://www.gnu.org/licenses/>.
"""
"""
Sequential reduction: repeatedly merge the pair with the lowest score.
"""

import itertools
import logging

import numpy as np

from ._base import Criterion, CriterionKind, EXCLUDED
from ._criteria import CRITERIA
from ._errors import ReductionStuck
from ._gaussmix import (
    mixture_to_dict, moment_preserving_merge, normalize)
from ._quad import QuadSpec, kl_numeric
from ._util.pool import parallel_map

_log = logging.getLogger(__name__)


class ReductionStep(object):
    """One merge of a reduction.

    :ivar int order_before: The order of the mixture before the merge.

    :ivar tuple pair: The merged indices ``(j, k)`` with ``j < k``.

    :ivar float score: The score of the merged pair; :data:`EXCLUDED` when
        the last pair was merged although the criterion excludes it, which
        :meth:`to_dict` writes as ``None``.

    :ivar kl_to_true: The KL divergence of the original mixture from the
        mixture after the merge, or ``None`` if not tracked.
    """
    __slots__ = ('order_before', 'pair', 'score', 'kl_to_true')

    def __init__(self, order_before, pair, score, kl_to_true=None):
        self.order_before = order_before
        self.pair = pair
        self.score = score
        self.kl_to_true = kl_to_true

    def __repr__(self):
        return 'ReductionStep(%d, %r, %r, %r)' % (
            self.order_before, self.pair, self.score, self.kl_to_true)

    def to_dict(self):
        return {
            'order_before': self.order_before,
            'pair': list(self.pair),
            'score': None if self.score == EXCLUDED else self.score,
            'kl_to_true': self.kl_to_true}


class ReductionTrace(object):
    """The path of a reduction from the original order to the target.

    :ivar list steps: The :class:`ReductionStep` instances in order.

    :ivar final_mixture: The mixture after the last step.

    :ivar criterion: The :class:`~pygmreduce.CriterionKind` used.
    """
    def __init__(self, criterion, steps, final_mixture):
        self.criterion = criterion
        self.steps = list(steps)
        self.final_mixture = final_mixture

    def __repr__(self):
        return 'ReductionTrace(%s, steps=%d, order=%d)' % (
            self.criterion.value, len(self.steps), self.final_mixture.order)

    def to_dict(self):
        return {
            'criterion': self.criterion.value,
            'steps': [step.to_dict() for step in self.steps],
            'final_mixture': mixture_to_dict(self.final_mixture)}


class _PairScores(object):
    """The scores of all pairs of a mixture.

    Scores live in the upper triangle of a square matrix; everything else is
    :data:`EXCLUDED`. After a merge, only pairs involving the merged
    component are rescored if the criterion allows it.
    """
    def __init__(self, criterion, mixture, threads=1):
        self._criterion = criterion
        self._threads = threads
        self._scores = self._score_all(mixture)

    def _score(self, mixture, pairs):
        self._criterion.prepare(mixture)
        return parallel_map(
            lambda pair: self._criterion.score(mixture, *pair),
            pairs, self._threads)

    def _score_all(self, mixture):
        n = len(mixture)
        scores = np.full((n, n), EXCLUDED)
        pairs = list(itertools.combinations(range(n), 2))
        for (j, k), value in zip(pairs, self._score(mixture, pairs)):
            scores[j, k] = value
        return scores

    def best(self):
        """The pair with the lowest score, ties broken by the smallest
        ``(j, k)``.

        :return: the tuple ``((j, k), score)``; the score is
            :data:`EXCLUDED` if every pair is
        """
        index = int(np.argmin(self._scores))
        j, k = divmod(index, self._scores.shape[1])
        return (j, k), float(self._scores[j, k])

    def merged(self, mixture, j, k):
        """Updates the scores after ``j`` and ``k`` were merged into ``j``.

        :param GaussianMixture mixture: The mixture after the merge.
        """
        if not self._criterion.CACHEABLE:
            self._scores = self._score_all(mixture)
            return

        scores = np.delete(np.delete(self._scores, k, axis=0), k, axis=1)
        n = len(mixture)
        pairs = [(min(i, j), max(i, j)) for i in range(n) if i != j]
        for pair, value in zip(pairs, self._score(mixture, pairs)):
            scores[pair] = value
        self._scores = scores


def _criterion(kind, reference, quad, options):
    if isinstance(kind, Criterion):
        return kind
    cls = CRITERIA[CriterionKind.parse(kind)]
    if not cls.NEEDS_REFERENCE:
        reference = None
    return cls(reference=reference, quad=quad, **options)


def _excluded(criterion, mixture, pair, trace=None):
    """Handles a best pair that is excluded.

    With a single pair left the merge is the moment-matched Gaussian
    whatever the criterion, so the pair is merged anyway; otherwise the
    reduction is stuck.
    """
    if len(mixture) > 2:
        raise ReductionStuck(criterion.kind.value, trace)
    _log.warning('%s excludes the last pair %r; merging it',
                 criterion.kind.value, pair)


def _merge(mixture, j, k):
    return normalize(mixture.replace_pair(
        j, k, moment_preserving_merge(mixture[j], mixture[k])))


def reduce_step(m, kind, threads=1, **options):
    """Merges the best pair of ``m`` under a criterion.

    :param GaussianMixture m: The mixture; its order must be at least 2.

    :param kind: A :class:`~pygmreduce.CriterionKind`, its command line name
        or a prepared :class:`~pygmreduce.Criterion`.

    :param int threads: The number of threads used to score pairs.

    :param options: Passed to the criterion constructor.

    :return: the tuple ``(mixture, (j, k), score)``; the mixture is
        normalized

    :raises ValueError: if the order is below 2

    :raises ReductionStuck: if every pair is excluded and more than two
        components are left
    """
    if len(m) < 2:
        raise ValueError('cannot reduce a mixture of order %d' % len(m))
    criterion = _criterion(kind, None, None, options)
    (j, k), score = _PairScores(criterion, m, threads).best()
    if score == EXCLUDED:
        _excluded(criterion, m, (j, k))
    return _merge(m, j, k), (j, k), score


def reduce_to(m, target_order, kind, track_kl=False, quad=None, threads=1,
              **options):
    """Reduces ``m`` to ``target_order`` components.

    :param GaussianMixture m: The original mixture.

    :param int target_order: The order to reach.

    :param kind: A :class:`~pygmreduce.CriterionKind`, its command line name
        or a prepared :class:`~pygmreduce.Criterion`.

    :param bool track_kl: Whether to record the KL divergence of the
        normalized ``m`` from every intermediate mixture.

    :param QuadSpec quad: The quadrature used for tracking and for numeric
        criteria. If not specified, the default box of ``m`` is used, so all
        orders are integrated over the same domain.

    :param int threads: The number of threads used to score pairs.

    :param options: Passed to the criterion constructor.

    :return: a :class:`ReductionTrace`

    :raises ValueError: if ``target_order`` is out of range

    :raises ReductionStuck: if every pair is excluded while more than two
        components are left; the exception carries the partial trace
    """
    if not 1 <= target_order <= len(m):
        raise ValueError('target order %r outside [1, %d]' % (
            target_order, len(m)))
    if target_order == len(m):
        kind = kind.kind if isinstance(kind, Criterion) else kind
        return ReductionTrace(CriterionKind.parse(kind), [], m)

    # Merges renormalize, so scores and divergences refer to the normalized
    # input
    reference = normalize(m)
    criterion = _criterion(kind, reference, quad, options)
    if track_kl and quad is None:
        quad = QuadSpec.for_mixture(reference)

    steps = []
    current = reference
    scores = _PairScores(criterion, current, threads)
    while len(current) > target_order:
        (j, k), score = scores.best()
        if score == EXCLUDED:
            _excluded(
                criterion, current, (j, k),
                ReductionTrace(criterion.kind, steps, current))
        order_before = len(current)
        current = _merge(current, j, k)
        kl = kl_numeric(reference, current, quad) if track_kl else None
        _log.debug(
            'order %d: merged (%d, %d) with score %g', order_before, j, k,
            score)
        steps.append(ReductionStep(order_before, (j, k), score, kl))
        if len(current) > target_order:
            scores.merged(current, j, k)

    _log.info('reduced order %d to %d with %s', len(m), len(current),
              criterion.kind.value)
    return ReductionTrace(criterion.kind, steps, current)
