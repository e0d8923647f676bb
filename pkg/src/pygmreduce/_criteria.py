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

from ._base import CriterionKind, EXCLUDED
from ._kitagawa import KitagawaWKL
from ._numkl import NumericKL
from ._pearson import PearsonChi2
from ._runnalls import RunnallsBound
from ._salmond import SalmondTrace
from ._williams import WilliamsISD


#: The criterion implementation for every kind.
CRITERIA = {
    cls.KIND: cls
    for cls in (
        PearsonChi2, KitagawaWKL, RunnallsBound, SalmondTrace, WilliamsISD,
        NumericKL)}


def criterion_for(kind, *args, **kwargs):
    """Creates the criterion for ``kind``.

    :param kind: A :class:`CriterionKind` or its command line name.

    :param args: Passed to the constructor.

    :param kwargs: Passed to the constructor.
    """
    return CRITERIA[CriterionKind.parse(kind)](*args, **kwargs)


def score_pair(kind, mixture, j, k, **kwargs):
    """Scores merging components ``j`` and ``k`` of ``mixture``.

    :param kind: A :class:`CriterionKind` or its command line name.

    :param GaussianMixture mixture: The mixture.

    :param int j: The first index.

    :param int k: The second index; ``j < k``.

    :param kwargs: Passed to the criterion constructor.

    :return: the score, or :data:`EXCLUDED`

    :raises ValueError: if the indices are out of range
    """
    criterion = criterion_for(kind, **kwargs)
    if not 0 <= j < k < len(mixture):
        raise ValueError('invalid pair (%r, %r) for order %d' % (
            j, k, len(mixture)))
    criterion.prepare(mixture)
    return criterion.score(mixture, j, k)


__all__ = ['CRITERIA', 'EXCLUDED', 'criterion_for', 'score_pair']
