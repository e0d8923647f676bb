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
Reference quadrature over 1- and 2-dimensional boxes.

Integrands are vectorised: they receive an ``(n, d)`` array of points and
return an ``(n,)`` array of values.
"""

import math

import numpy as np
from scipy.special import roots_legendre

from ._errors import ConvergenceError
from ._gaussmix import log_density

#: Number of panels the 1-dimensional adaptive rule starts from.
INITIAL_PANELS = 64

#: Density values below this are treated as zero by :func:`kl_numeric`.
TINY = 1e-300

#: Nodes per panel of the composite rule returned by :func:`fixed_rule`.
PANEL_NODES = 20


class QuadSpec(object):
    """The domain and accuracy of a quadrature.

    :param lo: The lower corner of the box.

    :param hi: The upper corner of the box.

    :param float rel_tol: The relative tolerance of the adaptive 1-dimensional
        rule.

    :param int max_depth: The maximum number of interval halvings.

    :param int nodes_per_axis: The number of Gauss-Legendre nodes per axis of
        the 2-dimensional tensor rule.

    :param float abs_tol: An absolute floor for the tolerance, so that
        integrals which are zero up to rounding terminate.

    :raises ValueError: if the box is empty, the dimension is not 1 or 2, or
        a setting is not positive
    """
    def __init__(self, lo, hi, rel_tol=1e-9, max_depth=40,
                 nodes_per_axis=400, abs_tol=1e-14):
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1 or lo.size not in (1, 2):
            raise ValueError('quadrature boxes must be 1- or 2-dimensional')
        if not np.all(lo < hi):
            raise ValueError('lower corner must be below upper corner')
        if not (rel_tol > 0 and max_depth > 0 and nodes_per_axis > 0
                and abs_tol >= 0):
            raise ValueError('quadrature settings must be positive')
        self.lo = lo
        self.hi = hi
        self.rel_tol = float(rel_tol)
        self.max_depth = int(max_depth)
        self.nodes_per_axis = int(nodes_per_axis)
        self.abs_tol = float(abs_tol)

    def __repr__(self):
        return 'QuadSpec(lo=%r, hi=%r, rel_tol=%r, nodes_per_axis=%r)' % (
            self.lo.tolist(), self.hi.tolist(), self.rel_tol,
            self.nodes_per_axis)

    @property
    def dim(self):
        """The dimension of the box.
        """
        return self.lo.size

    @classmethod
    def for_mixture(cls, m, k=10.0, **kwargs):
        """Creates a specification covering :func:`default_box` of ``m``.

        :param GaussianMixture m: The mixture.

        :param float k: The box multiplier.

        :param kwargs: Passed to the constructor.
        """
        lo, hi = default_box(m, k)
        return cls(lo, hi, **kwargs)


def default_box(m, k=10.0):
    """The box spanned by ``mu_i +- k sqrt(diag Sigma_i)`` over all components.

    :param GaussianMixture m: The mixture.

    :param float k: The multiplier.

    :return: the tuple ``(lo, hi)``

    :raises ValueError: if ``k`` is not positive
    """
    if not k > 0:
        raise ValueError('box multiplier must be positive')
    means = np.array([c.mean for c in m.components])
    sds = np.sqrt(np.array([np.diag(c.cov) for c in m.components]))
    return (means - k * sds).min(axis=0), (means + k * sds).max(axis=0)


def _simpson(f, a, b, spec):
    """Breadth-first adaptive Simpson rule on ``[a, b]``.

    All intervals of one level are refined with a single call to ``f``.
    """
    def call(x):
        return np.asarray(f(x.reshape(-1, 1)), dtype=float).reshape(-1)

    edges = np.linspace(a, b, INITIAL_PANELS + 1)
    left, right = edges[:-1], edges[1:]
    mid = 0.5 * (left + right)
    values = call(np.concatenate((left, mid, right)))
    fl, fm, fr = np.split(values, 3)
    whole = (right - left) / 6.0 * (fl + 4.0 * fm + fr)

    estimate = math.fsum(whole)
    tol = max(spec.rel_tol * abs(estimate), spec.abs_tol)
    tols = tol * (right - left) / (b - a)

    accepted_at = []
    accepted = []
    for depth in range(spec.max_depth):
        lm = 0.5 * (left + mid)
        rm = 0.5 * (mid + right)
        flm, frm = np.split(call(np.concatenate((lm, rm))), 2)
        h = right - left
        sl = h / 12.0 * (fl + 4.0 * flm + fm)
        sr = h / 12.0 * (fm + 4.0 * frm + fr)
        err = sl + sr - whole
        ok = np.abs(err) <= 15.0 * tols
        accepted_at.append(left[ok])
        accepted.append((sl + sr + err / 15.0)[ok])

        rest = ~ok
        if not rest.any():
            break
        left, mid, right = (
            np.concatenate((left[rest], mid[rest])),
            np.concatenate((lm[rest], rm[rest])),
            np.concatenate((mid[rest], right[rest])))
        fl, fm, fr = (
            np.concatenate((fl[rest], fm[rest])),
            np.concatenate((flm[rest], frm[rest])),
            np.concatenate((fm[rest], fr[rest])))
        whole = np.concatenate((sl[rest], sr[rest]))
        tols = np.concatenate((tols[rest], tols[rest])) * 0.5

    else:
        best = math.fsum(np.concatenate(accepted + [whole]))
        raise ConvergenceError(
            'adaptive Simpson rule did not converge within depth %d' % (
                spec.max_depth,), best)

    # Sum in a fixed order: by position on the axis
    at = np.concatenate(accepted_at)
    parts = np.concatenate(accepted)
    return math.fsum(parts[np.argsort(at, kind='stable')])


def _legendre(lo, hi, n):
    """Gauss-Legendre nodes and weights for ``[lo, hi]``.
    """
    x, w = roots_legendre(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def fixed_rule(spec):
    """A fixed quadrature rule for the box of ``spec``.

    In 1 dimension this is a composite Gauss-Legendre rule with about
    ``nodes_per_axis`` panels of :data:`PANEL_NODES` nodes; in 2 dimensions
    it is the tensor rule used by :func:`integrate`. The rule does not depend
    on the integrand, which keeps objectives built on it smooth.

    :param QuadSpec spec: The domain.

    :return: the tuple ``(nodes, weights)`` of shapes ``(n, d)`` and ``(n,)``
    """
    if spec.dim == 1:
        panels = max(1, spec.nodes_per_axis // 10)
        edges = np.linspace(spec.lo[0], spec.hi[0], panels + 1)
        nodes, weights = zip(*(
            _legendre(a, b, PANEL_NODES) for a, b in zip(edges, edges[1:])))
        return np.concatenate(nodes).reshape(-1, 1), np.concatenate(weights)

    (x, wx), (y, wy) = (
        _legendre(spec.lo[i], spec.hi[i], spec.nodes_per_axis)
        for i in range(2))
    xx, yy = np.meshgrid(x, y, indexing='ij')
    nodes = np.column_stack((xx.ravel(), yy.ravel()))
    return nodes, np.outer(wx, wy).ravel()


def integrate(f, spec):
    """Integrates ``f`` over the box of ``spec``.

    In 1 dimension an adaptive Simpson rule is refined until the relative
    tolerance is met; in 2 dimensions a Gauss-Legendre tensor rule with
    ``nodes_per_axis`` nodes per axis is used. Both are deterministic for a
    fixed specification.

    :param callable f: The vectorised integrand.

    :param QuadSpec spec: The domain and accuracy.

    :raises ConvergenceError: if the adaptive rule runs out of depth
    """
    if spec.dim == 1:
        return _simpson(f, spec.lo[0], spec.hi[0], spec)

    nodes, weights = fixed_rule(spec)
    values = np.asarray(f(nodes), dtype=float).reshape(-1)
    return math.fsum(weights * values)


def kl_integrand(g, f):
    """The integrand ``g log(g / f)`` with tail guards.

    Where ``g`` is below :data:`TINY` the contribution is zero; where only
    ``f`` is, ``f`` is floored at :data:`TINY`.
    """
    log_tiny = math.log(TINY)

    def integrand(x):
        lg = log_density(g, x)
        lf = np.maximum(log_density(f, x), log_tiny)
        with np.errstate(under='ignore'):
            gv = np.exp(lg)
        return np.where(lg < log_tiny, 0.0, gv * (lg - lf))

    return integrand


def kl_numeric(g, f, spec):
    """The Kullback-Leibler divergence ``int g log(g / f) dx``.

    :param GaussianMixture g: The reference density.

    :param GaussianMixture f: The approximation.

    :param QuadSpec spec: The domain and accuracy.
    """
    return integrate(kl_integrand(g, f), spec)


def isd_numeric(g, f, spec):
    """The integrated squared difference ``int (g - f)^2 dx``.
    """
    def integrand(x):
        with np.errstate(under='ignore'):
            d = np.exp(log_density(g, x)) - np.exp(log_density(f, x))
        return d * d

    return integrate(integrand, spec)


def pearson_numeric(q, p, spec):
    """The Pearson divergence ``int q^2 / p dx - 1``.

    :param GaussianMixture q: The numerator density.

    :param GaussianMixture p: The reference density.
    """
    def integrand(x):
        with np.errstate(under='ignore', over='ignore'):
            return np.exp(2.0 * log_density(q, x) - log_density(p, x))

    return integrate(integrand, spec) - 1.0
