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

import enum
import logging
import math

from ._errors import UnboundedRatio

#: The score of a pair that must not be merged.
EXCLUDED = math.inf


class CriterionKind(enum.Enum):
    """The pair criteria known to the reducer.

    The values are the names used on the command line.
    """
    PEARSON_CHI2 = 'pearson'
    KITAGAWA_WKL = 'kitagawa'
    RUNNALLS_BOUND = 'runnalls'
    SALMOND_TRACE = 'salmond'
    WILLIAMS_ISD = 'isd'
    NUMERIC_KL = 'numkl'

    @classmethod
    def parse(cls, value):
        """Looks up a kind by its command line name, its member name or the
        kind itself.

        :raises ValueError: if the name is unknown
        """
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            pass
        try:
            return cls[str(value).upper()]
        except KeyError:
            raise ValueError('unknown criterion %r; choose one of %s' % (
                value, ', '.join(k.value for k in cls)))


class Criterion(object):
    """A cost for merging a pair of components of a mixture.

    Lower scores are better. A pair scored :data:`EXCLUDED` is never merged.

    Scoring happens in two phases: :meth:`prepare` is called once with the
    mixture about to be scored, then :meth:`score` is called for any number
    of pairs, possibly from several threads. Implementations must not modify
    their state in :meth:`score`.

    :param reference: The full-order mixture the reduction started from.
        Criteria that measure the distance to the original density use it;
        others ignore it. If not specified, the mixture being scored is
        used.

    :param quad: The :class:`~pygmreduce.QuadSpec` used by criteria that
        integrate numerically. If not specified, the default box of the
        reference mixture is used.

    :param kwargs: Any criterion specific options. These should be prefixed
        with the command line name of the criterion thus: ``numkl_``.

        Supported values are:

        ``numkl_box_k``
            The box multiplier used when ``quad`` is not given.
    """
    #: The :class:`CriterionKind` implemented.
    KIND = None

    #: Whether the scores of pairs not involving a merged component remain
    #: valid after a merge.
    CACHEABLE = True

    #: Whether the score depends on the original mixture.
    NEEDS_REFERENCE = False

    def __init__(self, reference=None, quad=None, **kwargs):
        self._reference = reference
        self._quad = quad
        self._log = logging.getLogger(__name__)

        prefix = self.KIND.value + '_'
        self._options = {
            key[len(prefix):]: value
            for key, value in kwargs.items()
            if key.startswith(prefix)}

    def __repr__(self):
        return '%s()' % type(self).__name__

    @property
    def kind(self):
        """The :class:`CriterionKind` of this criterion.
        """
        return self.KIND

    @property
    def reference(self):
        """The reference mixture, or ``None``.
        """
        return self._reference

    def prepare(self, mixture):
        """Prepares for scoring pairs of ``mixture``.

        This must be called again whenever the mixture changes.

        :param GaussianMixture mixture: The mixture about to be scored.
        """
        self._prepare(mixture)

    def score(self, mixture, j, k):
        """Scores merging components ``j`` and ``k`` of ``mixture``.

        :param GaussianMixture mixture: The mixture passed to
            :meth:`prepare`.

        :param int j: The first index.

        :param int k: The second index; ``j < k``.

        :return: the score, or :data:`EXCLUDED` if the pair must not be
            merged

        :raises ValueError: if the indices are out of range
        """
        if not 0 <= j < k < len(mixture):
            raise ValueError('invalid pair (%r, %r) for order %d' % (
                j, k, len(mixture)))
        try:
            value = self._score(mixture, j, k)
        except UnboundedRatio as e:
            self._log.debug('pair (%d, %d) excluded: %s', j, k, e)
            return EXCLUDED
        if math.isnan(value):
            self._log.debug('pair (%d, %d) excluded: score is nan', j, k)
            return EXCLUDED
        return value

    def _prepare(self, mixture):
        """The implementation of the :meth:`prepare` method.

        The default implementation does nothing.
        """
        pass

    def _score(self, mixture, j, k):
        """The implementation of the :meth:`score` method.

        This is a criterion dependent implementation. It may raise
        :class:`~pygmreduce.UnboundedRatio` to exclude the pair.
        """
        raise NotImplementedError()
