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

import numpy as np

from . import _base
from ._gaussmix import mixture_moments
from ._util import linalg


def salmond_trace(cj, ck, mix_cov):
    """The increase of within-component variance caused by a merge,
    measured against the covariance of the whole mixture.

    :param GaussianComponent cj: The first component.

    :param GaussianComponent ck: The second component.

    :param mix_cov: The covariance of the current mixture.

    :raises NumericError: if ``mix_cov`` is singular
    """
    a, b = cj.weight, ck.weight
    d = cj.mean - ck.mean
    delta_w = (a * b / (a + b)) * np.outer(d, d)
    lower = linalg.cholesky(linalg.symmetrize(mix_cov), 'mixture covariance')
    return float(np.trace(linalg.chol_solve(lower, delta_w)))


class SalmondTrace(_base.Criterion):
    # The mixture covariance is recomputed after every merge, so every pair
    # is rescored
    KIND = _base.CriterionKind.SALMOND_TRACE
    CACHEABLE = False

    def __init__(self, *args, **kwargs):
        super(SalmondTrace, self).__init__(*args, **kwargs)
        self._mix_cov = None

    def _prepare(self, mixture):
        self._mix_cov = mixture_moments(mixture)[1]

    def _score(self, mixture, j, k):
        if self._mix_cov is None:
            raise RuntimeError('prepare must be called before score')
        return salmond_trace(mixture[j], mixture[k], self._mix_cov)
