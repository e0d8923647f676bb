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
Cholesky based helpers.

A matrix is positive definite exactly when its Cholesky factorization
succeeds; no eigenvalue decompositions are used anywhere.
"""

import numpy as np
import scipy.linalg

from .._errors import NumericError


def symmetrize(a):
    """Returns ``(a + a.T) / 2``.
    """
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def cholesky(a, where=None):
    """Returns the lower Cholesky factor of ``a``.

    :param a: A symmetric matrix.

    :param where: Forwarded to :class:`NumericError` on failure.

    :raises NumericError: if ``a`` is not positive definite
    """
    try:
        return scipy.linalg.cholesky(a, lower=True, check_finite=True)
    except (np.linalg.LinAlgError, ValueError):
        raise NumericError('matrix is not positive definite', where)


def is_pd(a):
    """Whether ``a`` admits a Cholesky factorization.
    """
    try:
        scipy.linalg.cholesky(a, lower=True, check_finite=True)
    except (np.linalg.LinAlgError, ValueError):
        return False
    return True


def logdet(lower):
    """The log-determinant of ``L L^T`` given the lower factor ``L``.
    """
    return 2.0 * float(np.sum(np.log(np.diag(lower))))


def chol_solve(lower, b):
    """Solves ``(L L^T) x = b`` given the lower factor ``L``.
    """
    return scipy.linalg.cho_solve((lower, True), b, check_finite=False)


def chol_inv(lower):
    """The inverse of ``L L^T``, symmetrized.
    """
    return symmetrize(chol_solve(lower, np.eye(lower.shape[0])))


def mahalanobis(lower, diff):
    """``diff^T (L L^T)^{-1} diff`` for one vector or for rows of ``diff``.

    :return: a float for a 1-dimensional ``diff``, otherwise an array with
        one value per row
    """
    diff = np.asarray(diff, dtype=float)
    z = scipy.linalg.solve_triangular(
        lower, diff.T, lower=True, check_finite=False)
    if diff.ndim == 1:
        return float(z.dot(z))
    return np.sum(z * z, axis=0)
