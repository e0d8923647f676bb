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
from ._errors import NumericError


def kitagawa_wkl(cj, ck):
    """The weighted symmetric KL-type distance of two components.

    In more than one dimension the matrix products are read as traces.

    :param GaussianComponent cj: The first component.

    :param GaussianComponent ck: The second component.

    :raises NumericError: if a covariance is singular
    """
    pj, pk = cj.precision, ck.precision
    d = ck.mean - cj.mean
    value = (
        np.trace(pk.dot(cj.cov)) + np.trace(pj.dot(ck.cov))
        + d.dot((pk + pj).dot(d)))
    return cj.weight * ck.weight * float(value)


class KitagawaWKL(_base.Criterion):
    KIND = _base.CriterionKind.KITAGAWA_WKL

    def _score(self, mixture, j, k):
        try:
            return kitagawa_wkl(mixture[j], mixture[k])
        except NumericError as e:
            raise NumericError(str(e), (j, k))
