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
Gaussian components and mixtures.

Components and mixtures are immutable values: their arrays are read-only and
derived quantities, such as the Cholesky factor, are computed once on first
use.
"""

import json
import math

import numpy as np
from scipy.special import logsumexp

from ._errors import NumericError
from ._util import serialized_output
from ._util import linalg

#: ``log(2 pi)``
LOG_2PI = math.log(2.0 * math.pi)

#: Relative tolerance for the symmetry of a covariance passed to
#: :class:`GaussianComponent`.
SYMMETRY_TOL = 1e-12

#: Relative tolerance for the symmetry of a covariance read from a file.
PARSE_SYMMETRY_TOL = 1e-9


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


def _asymmetry(a):
    scale = max(1.0, float(np.max(np.abs(a))))
    return float(np.max(np.abs(a - a.T))) / scale


class GaussianComponent(object):
    """One weighted term ``weight * N(mean, cov)`` of a mixture.

    :param float weight: The weight; it must be positive.

    :param mean: The mean vector. A scalar is read as a 1-dimensional mean.

    :param cov: The covariance matrix. A scalar is read as a ``1 x 1``
        matrix. It must be symmetric to within :data:`SYMMETRY_TOL`
        relative; the stored matrix is exactly symmetric.

    :param bool require_pd: Whether ``cov`` must admit a Cholesky
        factorization. Noise terms of a state-space model may pass ``False``
        to allow singular covariances such as ``Q = 0``; such components
        cannot be evaluated as densities.

    :raises ValueError: if the weight is not positive, the shapes do not
        agree or the covariance is not symmetric

    :raises NumericError: if ``require_pd`` and ``cov`` is not positive
        definite
    """
    def __init__(self, weight, mean, cov, require_pd=True):
        weight = float(weight)
        if not weight > 0.0 or not math.isfinite(weight):
            raise ValueError('component weight must be positive, got %r' % (
                weight,))
        mean = np.atleast_1d(np.asarray(mean, dtype=float))
        if mean.ndim != 1:
            raise ValueError('mean must be a vector')
        cov = np.asarray(cov, dtype=float)
        if cov.ndim == 0:
            cov = cov.reshape(1, 1)
        if cov.shape != (mean.size, mean.size):
            raise ValueError('covariance shape %s does not match mean of '
                             'length %d' % (cov.shape, mean.size))
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(cov)):
            raise ValueError('mean and covariance must be finite')
        if _asymmetry(cov) > SYMMETRY_TOL:
            raise ValueError('covariance is not symmetric')

        self._weight = weight
        self._mean = _frozen(mean)
        self._cov = _frozen(linalg.symmetrize(cov))
        self._chol = None
        self._precision = None
        if require_pd:
            self._chol = _frozen(linalg.cholesky(self._cov))

    def __repr__(self):
        return 'GaussianComponent(weight=%r, mean=%r, cov=%r)' % (
            self._weight, self._mean.tolist(), self._cov.tolist())

    @property
    def weight(self):
        """The weight of this component.
        """
        return self._weight

    @property
    def mean(self):
        """The mean vector, read-only.
        """
        return self._mean

    @property
    def cov(self):
        """The covariance matrix, read-only.
        """
        return self._cov

    @property
    def dim(self):
        """The dimension.
        """
        return self._mean.size

    @property
    def chol(self):
        """The lower Cholesky factor of :attr:`cov`.

        :raises NumericError: if the covariance is singular
        """
        if self._chol is None:
            self._chol = _frozen(linalg.cholesky(self._cov))
        return self._chol

    @property
    def precision(self):
        """The inverse of :attr:`cov`.
        """
        if self._precision is None:
            self._precision = _frozen(linalg.chol_inv(self.chol))
        return self._precision

    @property
    def logdet(self):
        """``log det cov``.
        """
        return linalg.logdet(self.chol)

    def with_weight(self, weight):
        """Returns a copy of this component with a different weight.
        """
        other = GaussianComponent.__new__(GaussianComponent)
        other.__dict__.update(self.__dict__)
        weight = float(weight)
        if not weight > 0.0:
            raise ValueError('component weight must be positive')
        other._weight = weight
        return other

    def log_pdf(self, x):
        """The log of the unweighted density at the rows of ``x``.

        :param x: An ``(n, dim)`` array.

        :return: an ``(n,)`` array
        """
        maha = linalg.mahalanobis(self.chol, x - self._mean)
        return -0.5 * (self.dim * LOG_2PI + self.logdet + maha)


class GaussianMixture(object):
    """An ordered, non-empty list of Gaussian components of equal dimension.

    The constructor does not rescale weights; use :func:`normalize` to obtain
    a mixture whose weights sum to one.

    :param components: The components.

    :raises ValueError: if ``components`` is empty or the dimensions differ
    """
    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise ValueError('a mixture needs at least one component')
        dim = components[0].dim
        for c in components:
            if c.dim != dim:
                raise ValueError(
                    'component dimension %d does not match %d' % (c.dim, dim))
        self._components = components
        self._dim = dim

    def __repr__(self):
        return 'GaussianMixture(dim=%d, order=%d)' % (self._dim, self.order)

    def __len__(self):
        return len(self._components)

    def __iter__(self):
        return iter(self._components)

    def __getitem__(self, index):
        return self._components[index]

    @property
    def dim(self):
        """The dimension of every component.
        """
        return self._dim

    @property
    def components(self):
        """The components as a tuple.
        """
        return self._components

    @property
    def order(self):
        """The number of components.
        """
        return len(self._components)

    @property
    def weights(self):
        """The weights as an array.
        """
        return np.array([c.weight for c in self._components])

    @property
    def total_weight(self):
        """The compensated sum of the weights.
        """
        return math.fsum(c.weight for c in self._components)

    def replace_pair(self, j, k, merged):
        """Returns a mixture with components ``j`` and ``k`` replaced.

        The merged component takes the position of the smaller index and the
        other one is removed; all other components keep their order.

        :param int j: An index.

        :param int k: Another index.

        :param GaussianComponent merged: The replacement.
        """
        j, k = min(j, k), max(j, k)
        components = list(self._components)
        components[j] = merged
        del components[k]
        return GaussianMixture(components)


class MergeGeometry(object):
    """The quantities derived from a candidate merge of two components.

    :ivar xi: The moment-preserving merged mean.

    :ivar V: The moment-preserving merged covariance.

    :ivar zeta: The precision-weighted mean
        ``sigma_jk (Sigma_j^-1 mu_j + Sigma_k^-1 mu_k)``.

    :ivar sigma_jk: ``(Sigma_j^-1 + Sigma_k^-1)^-1``.

    :ivar W: ``Sigma_j^-1 + Sigma_k^-1 - V^-1``.

    :ivar eta: ``W^-1 (sigma_jk^-1 zeta - V^-1 xi)``; ``nan`` if ``W`` is
        singular.

    :ivar bool w_pd: Whether ``W`` admits a Cholesky factorization.

    :ivar merged: The merged :class:`GaussianComponent`.
    """
    __slots__ = (
        'xi', 'V', 'zeta', 'sigma_jk', 'W', 'eta', 'w_pd', 'merged',
        'v_precision')

    def __init__(self, xi, V, zeta, sigma_jk, W, eta, w_pd, merged,
                 v_precision):
        self.xi = _frozen(xi)
        self.V = _frozen(V)
        self.zeta = _frozen(zeta)
        self.sigma_jk = _frozen(sigma_jk)
        self.W = _frozen(W)
        self.eta = _frozen(eta)
        self.w_pd = bool(w_pd)
        self.merged = merged
        self.v_precision = _frozen(v_precision)


def _points(m, x):
    """Converts ``x`` to an ``(n, dim)`` array and reports whether a single
    point was passed.

    A flat array of length ``dim`` is one point. For ``dim == 1`` a flat
    array of any other length is ``n`` points; for higher dimensions it is
    rejected.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.ndim == 1:
        if x.size != m.dim:
            if m.dim == 1:
                return x.reshape(-1, 1), False
            raise ValueError('point of length %d does not match dimension '
                             '%d' % (x.size, m.dim))
        return x.reshape(1, -1), True
    if x.ndim != 2 or x.shape[1] != m.dim:
        raise ValueError('points of shape %s do not match dimension %d' % (
            x.shape, m.dim))
    return x, False


def log_density(m, x):
    """The log-density of a mixture.

    :param GaussianMixture m: The mixture.

    :param x: A point of length ``m.dim`` or an ``(n, m.dim)`` array. For
        1-dimensional mixtures a flat array is read as ``n`` points.

    :return: a float for a single point, otherwise an ``(n,)`` array; far
        outside the support the value is finite but hugely negative

    :raises ValueError: if the dimension does not match
    """
    pts, single = _points(m, x)
    terms = np.stack([
        math.log(c.weight) + c.log_pdf(pts) for c in m.components])
    with np.errstate(divide='ignore', under='ignore'):
        values = logsumexp(terms, axis=0)
    return float(values[0]) if single else values


def density(m, x):
    """The density ``sum_i w_i phi(x | mu_i, Sigma_i)`` of a mixture.

    Underflow yields ``0``, never ``nan``.

    :param GaussianMixture m: The mixture.

    :param x: See :func:`log_density`.
    """
    with np.errstate(under='ignore'):
        return np.exp(log_density(m, x))


def mixture_moments(m):
    """The mean and covariance of the whole mixture.

    The weights are divided by their total, which is ``1`` for normalized
    mixtures.

    :param GaussianMixture m: The mixture.

    :return: the tuple ``(mean, cov)``
    """
    total = m.total_weight
    mean = sum(c.weight * c.mean for c in m.components) / total
    cov = np.zeros((m.dim, m.dim))
    for c in m.components:
        d = c.mean - mean
        cov += c.weight * (c.cov + np.outer(d, d))
    return mean, linalg.symmetrize(cov / total)


def moment_preserving_merge(cj, ck):
    """Merges two components into one with the same first two moments.

    :param GaussianComponent cj: The first component.

    :param GaussianComponent ck: The second component.

    :return: a :class:`GaussianComponent` with weight ``w_j + w_k``

    :raises ValueError: if the dimensions differ
    """
    if cj.dim != ck.dim:
        raise ValueError('cannot merge components of different dimension')
    a, b = cj.weight, ck.weight
    w = a + b
    xi = (a * cj.mean + b * ck.mean) / w
    dj = cj.mean - xi
    dk = ck.mean - xi
    V = (a * (cj.cov + np.outer(dj, dj)) + b * (ck.cov + np.outer(dk, dk))) / w
    return GaussianComponent(w, xi, linalg.symmetrize(V))


def merge_geometry(cj, ck, where=None):
    """Computes the :class:`MergeGeometry` of a candidate pair.

    Inverses are Cholesky solves. ``W`` is formed explicitly because whether
    it is positive definite is part of the result.

    :param GaussianComponent cj: The first component.

    :param GaussianComponent ck: The second component.

    :param where: The pair identity used in error messages.

    :raises NumericError: if either covariance is singular
    """
    try:
        pj, pk = cj.precision, ck.precision
    except NumericError:
        raise NumericError('singular component covariance', where)
    merged = moment_preserving_merge(cj, ck)
    a = linalg.symmetrize(pj + pk)
    sigma_jk = linalg.chol_inv(linalg.cholesky(a, where))
    zeta = sigma_jk.dot(pj.dot(cj.mean) + pk.dot(ck.mean))
    v_precision = merged.precision
    W = linalg.symmetrize(a - v_precision)
    w_pd = linalg.is_pd(W)
    try:
        eta = np.linalg.solve(W, a.dot(zeta) - v_precision.dot(merged.mean))
    except np.linalg.LinAlgError:
        eta = np.full(cj.dim, np.nan)
    return MergeGeometry(
        merged.mean, merged.cov, zeta, sigma_jk, W, eta, w_pd, merged,
        v_precision)


def normalize(m):
    """Rescales the weights of a mixture to sum to one.

    The rescaling uses a compensated sum and puts the remaining rounding
    residual on the largest weight, so the new weights sum to exactly one.

    :param GaussianMixture m: The mixture.

    :raises ValueError: if the total weight is not positive
    """
    total = m.total_weight
    if not total > 0.0:
        raise ValueError('total weight must be positive')
    weights = [c.weight / total for c in m.components]
    residual = 1.0 - math.fsum(weights)
    if residual:
        i = max(range(len(weights)), key=weights.__getitem__)
        weights[i] += residual
    return GaussianMixture(
        c.with_weight(w) for c, w in zip(m.components, weights))


def mixture_to_dict(m):
    """Converts a mixture to its JSON representation.
    """
    return {
        'dim': m.dim,
        'components': [
            {
                'weight': c.weight,
                'mean': c.mean.tolist(),
                'cov': c.cov.tolist()}
            for c in m.components]}


def mixture_from_dict(data, require_pd=True):
    """Parses the JSON representation of a mixture.

    Covariances must be symmetric to within :data:`PARSE_SYMMETRY_TOL`
    relative and are re-symmetrized. Weights are kept as given.

    :param dict data: The decoded JSON object.

    :param bool require_pd: Passed to :class:`GaussianComponent`.

    :raises ValueError: if the data is malformed
    """
    try:
        dim = int(data['dim'])
        items = data['components']
    except (KeyError, TypeError):
        raise ValueError('mixture needs "dim" and "components"')
    if dim < 1:
        raise ValueError('dim must be positive')
    components = []
    for i, item in enumerate(items):
        try:
            cov = np.atleast_2d(np.asarray(item['cov'], dtype=float))
            mean = np.atleast_1d(np.asarray(item['mean'], dtype=float))
            weight = item['weight']
        except (KeyError, TypeError):
            raise ValueError('component %d needs weight, mean and cov' % i)
        if mean.size != dim or cov.shape != (dim, dim):
            raise ValueError('component %d does not have dimension %d' % (
                i, dim))
        if _asymmetry(cov) > PARSE_SYMMETRY_TOL:
            raise ValueError('component %d covariance is not symmetric' % i)
        components.append(GaussianComponent(
            weight, mean, linalg.symmetrize(cov), require_pd=require_pd))
    return GaussianMixture(components)


def load_mixture(path):
    """Reads a mixture from a JSON file.
    """
    with open(path, 'r') as f:
        try:
            data = json.load(f)
        except ValueError as e:
            raise ValueError('%s: %s' % (path, e))
    return mixture_from_dict(data)


def save_mixture(m, path):
    """Writes a mixture to a JSON file.
    """
    with serialized_output(path) as f:
        json.dump(mixture_to_dict(m), f, indent=1)
        f.write('\n')
