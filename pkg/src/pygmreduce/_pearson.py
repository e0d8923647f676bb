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
The Pearson chi-square criterion.

For a pair ``q = a phi_j + b phi_k`` with ``a + b = 1`` and its
moment-preserving merge ``p``, the divergence ``int q^2 / p dx - 1`` expands
into two self terms ``int phi_j^2 / p`` and ``int phi_k^2 / p`` and one cross
term ``int phi_j phi_k / p``, each of which has a closed form whenever the
corresponding precision difference is positive definite.
"""

import numpy as np

from . import _base
from ._errors import NumericError, UnboundedRatio
from ._gaussmix import merge_geometry
from ._util import linalg

#: Negative scores down to this value are rounding noise and clamp to zero.
NEGATIVE_TOL = -1e-10


def _pd_factor(a, what):
    try:
        return linalg.cholesky(linalg.symmetrize(a))
    except NumericError:
        raise UnboundedRatio('%s is not positive definite' % what)


def ratio_integral_cross(fj, fk, geom):
    """Computes ``int f_j f_k / p_jk dx``.

    The weights of the components are not included.

    :param GaussianComponent fj: The first component.

    :param GaussianComponent fk: The second component.

    :param MergeGeometry geom: The geometry of merging ``fj`` and ``fk``.

    :raises UnboundedRatio: if ``geom.W`` is not positive definite
    """
    if not geom.w_pd:
        raise UnboundedRatio('W is not positive definite')
    w_chol = _pd_factor(geom.W, 'W')
    v_chol = linalg.cholesky(geom.V)
    gap_chol = _pd_factor(geom.V - geom.sigma_jk, 'V - sigma_jk')
    sum_chol = linalg.cholesky(linalg.symmetrize(fj.cov + fk.cov))

    log_value = 0.5 * (
        linalg.logdet(v_chol) - fj.logdet - fk.logdet - linalg.logdet(w_chol)
        + linalg.mahalanobis(gap_chol, geom.zeta - geom.xi)
        - linalg.mahalanobis(sum_chol, fj.mean - fk.mean))
    return float(np.exp(log_value))


def ratio_integral_self(fj, geom):
    """Computes ``int f_j^2 / p_jk dx``.

    :param GaussianComponent fj: One of the merged components.

    :param MergeGeometry geom: The geometry of the pair under consideration.

    :raises UnboundedRatio: if ``2 Sigma_j^-1 - V^-1`` is not positive
        definite
    """
    w_bar = 2.0 * fj.precision - geom.v_precision
    w_chol = _pd_factor(w_bar, '2 Sigma_j^-1 - V^-1')
    v_chol = linalg.cholesky(geom.V)
    gap_chol = _pd_factor(geom.V - 0.5 * fj.cov, 'V - Sigma_j / 2')

    log_value = (
        0.5 * linalg.logdet(v_chol) - fj.logdet - 0.5 * linalg.logdet(w_chol)
        + 0.5 * linalg.mahalanobis(gap_chol, fj.mean - geom.xi))
    return float(np.exp(log_value))


def pearson_chi2(cj, ck, where=None):
    """The Pearson divergence of a pair from its moment-preserving merge.

    The pair weights are renormalized to sum to one.

    :param GaussianComponent cj: The first component.

    :param GaussianComponent ck: The second component.

    :param where: The pair identity used in error messages.

    :raises UnboundedRatio: if the ratio of the pair and its merge is not
        integrable

    :raises NumericError: if the result is clearly negative
    """
    geom = merge_geometry(cj, ck, where)
    total = cj.weight + ck.weight
    a, b = cj.weight / total, ck.weight / total

    value = (
        a * a * ratio_integral_self(cj, geom)
        + b * b * ratio_integral_self(ck, geom)
        + 2.0 * a * b * ratio_integral_cross(cj, ck, geom)
        - 1.0)
    if value < 0.0:
        if value < NEGATIVE_TOL:
            raise NumericError(
                'Pearson divergence %g is negative' % value, where)
        value = 0.0
    return value


class PearsonChi2(_base.Criterion):
    KIND = _base.CriterionKind.PEARSON_CHI2

    def _score(self, mixture, j, k):
        return pearson_chi2(mixture[j], mixture[k], (j, k))
