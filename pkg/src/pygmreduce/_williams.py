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
The integrated squared difference of two mixtures.

The closed form rests on the product identity
``int phi(x | a, A) phi(x | b, B) dx = phi(a | b, A + B)``.
"""

import math

import numpy as np

from . import _base
from ._gaussmix import GaussianMixture, LOG_2PI, moment_preserving_merge
from ._util import linalg


def _product_integrals(g, f):
    """``sum_a sum_b w_a w_b phi(mu_a | mu_b, Sigma_a + Sigma_b)``.
    """
    terms = []
    for a in g:
        for b in f:
            lower = linalg.cholesky(linalg.symmetrize(a.cov + b.cov))
            maha = linalg.mahalanobis(lower, a.mean - b.mean)
            terms.append(a.weight * b.weight * math.exp(
                -0.5 * (a.dim * LOG_2PI + linalg.logdet(lower) + maha)))
    return math.fsum(terms)


def williams_isd(g, f):
    """The integrated squared difference ``int (g - f)^2 dx`` in closed form.

    Weights are used as given, so sub-mixtures need not be normalized.

    :param GaussianMixture g: The first mixture.

    :param GaussianMixture f: The second mixture.

    :raises ValueError: if the dimensions differ
    """
    if g.dim != f.dim:
        raise ValueError('mixtures have different dimensions')
    value = (
        _product_integrals(g, g) + _product_integrals(f, f)
        - 2.0 * _product_integrals(g, f))
    return max(value, 0.0)


class WilliamsISD(_base.Criterion):
    # Only the pair and its merge differ between the mixture and the reduced
    # one, so the pair score is the distance between those three terms
    KIND = _base.CriterionKind.WILLIAMS_ISD

    def _score(self, mixture, j, k):
        cj, ck = mixture[j], mixture[k]
        merged = moment_preserving_merge(cj, ck)
        return williams_isd(
            GaussianMixture((cj, ck)), GaussianMixture((merged,)))
