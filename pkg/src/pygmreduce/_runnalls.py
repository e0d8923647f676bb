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

from . import _base
from ._gaussmix import moment_preserving_merge


def runnalls_bound(cj, ck):
    """The upper bound on the KL increase caused by merging two components.

    :param GaussianComponent cj: The first component.

    :param GaussianComponent ck: The second component.

    :raises NumericError: if a covariance is singular
    """
    merged = moment_preserving_merge(cj, ck)
    return 0.5 * (
        merged.weight * merged.logdet
        - cj.weight * cj.logdet - ck.weight * ck.logdet)


class RunnallsBound(_base.Criterion):
    KIND = _base.CriterionKind.RUNNALLS_BOUND

    def _score(self, mixture, j, k):
        return runnalls_bound(mixture[j], mixture[k])
