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
Global KL minimization over all parameters of a reduced mixture.

Weights are parameterized on the simplex by normalized exponentials (the
first logit is fixed at zero) and covariances by lower triangular factors
whose diagonal is stored as a logarithm, so every parameter vector describes
a valid mixture.
"""

import logging
import math

import numpy as np
import scipy.linalg
import scipy.optimize
from scipy.special import logsumexp

from ._base import CriterionKind
from ._gaussmix import (
    GaussianComponent, GaussianMixture, LOG_2PI, log_density, normalize)
from ._quad import QuadSpec, TINY, fixed_rule, kl_numeric
from ._reduce import reduce_to
from ._util.pool import parallel_map

_log = logging.getLogger(__name__)


class GlobalFitConfig(object):
    """Settings of :func:`global_kl_fit`.

    :param int max_iter: The iteration limit of each local optimization.

    :param float grad_tol: The gradient norm at which an optimization stops.

    :param int restarts: The number of local optimizations. The first starts
        at the initial mixture, the others at seeded perturbations of it.

    :param QuadSpec quad: The integration domain and accuracy. If not
        specified, the default box of the target mixture is used.

    :param int seed: The seed of the restart perturbations.

    :param float perturbation: The standard deviation of the restart
        perturbations in parameter space.

    :param int threads: The number of restarts run concurrently.

    :raises ValueError: if a setting is not positive
    """
    def __init__(self, max_iter=500, grad_tol=1e-7, restarts=3, quad=None,
                 seed=0, perturbation=0.1, threads=1):
        if not (max_iter > 0 and grad_tol > 0 and restarts > 0):
            raise ValueError('fit settings must be positive')
        self.max_iter = int(max_iter)
        self.grad_tol = float(grad_tol)
        self.restarts = int(restarts)
        self.quad = quad
        self.seed = int(seed)
        self.perturbation = float(perturbation)
        self.threads = int(threads)


class FitResult(object):
    """The outcome of :func:`global_kl_fit`.

    :ivar mixture: The fitted mixture.

    :ivar float kl: Its KL divergence from the target.

    :ivar float init_kl: The KL divergence of the initial mixture.

    :ivar bool converged: Whether the optimization that produced
        :attr:`mixture` met its gradient tolerance.
    """
    def __init__(self, mixture, kl, init_kl, converged):
        self.mixture = mixture
        self.kl = kl
        self.init_kl = init_kl
        self.converged = converged

    def __repr__(self):
        return 'FitResult(order=%d, kl=%g, converged=%r)' % (
            self.mixture.order, self.kl, self.converged)


class _Layout(object):
    """Packs and unpacks mixture parameters.
    """
    def __init__(self, order, dim):
        self.order = order
        self.dim = dim
        self.tril = np.tril_indices(dim)
        self.diag = np.flatnonzero(self.tril[0] == self.tril[1])
        self.n_chol = dim * (dim + 1) // 2

    def pack(self, m):
        weights = m.weights / m.total_weight
        logits = np.log(weights[1:]) - math.log(weights[0])
        parts = [logits]
        for c in m.components:
            lower = c.chol[self.tril].copy()
            lower[self.diag] = np.log(lower[self.diag])
            parts.extend((c.mean, lower))
        return np.concatenate(parts)

    def unpack(self, theta):
        logits = np.concatenate(([0.0], theta[:self.order - 1]))
        log_weights = logits - logsumexp(logits)
        offset = self.order - 1
        params = []
        for i in range(self.order):
            mean = theta[offset:offset + self.dim]
            offset += self.dim
            values = theta[offset:offset + self.n_chol].copy()
            offset += self.n_chol
            values[self.diag] = np.exp(values[self.diag])
            lower = np.zeros((self.dim, self.dim))
            lower[self.tril] = values
            params.append((log_weights[i], mean, lower))
        return params

    def mixture(self, theta):
        return normalize(GaussianMixture(
            GaussianComponent(
                math.exp(log_weight), mean, lower.dot(lower.T))
            for log_weight, mean, lower in self.unpack(theta)))


class _Objective(object):
    """``KL(g || f_theta)`` on a fixed quadrature rule.
    """
    def __init__(self, g, layout, spec):
        self._layout = layout
        nodes, weights = fixed_rule(spec)
        log_g = log_density(g, nodes)
        keep = log_g >= math.log(TINY)
        self._nodes = nodes[keep]
        self._mass = weights[keep] * np.exp(log_g[keep])
        self._constant = math.fsum(self._mass * log_g[keep])

    def __call__(self, theta):
        terms = []
        for log_weight, mean, lower in self._layout.unpack(theta):
            z = scipy.linalg.solve_triangular(
                lower, (self._nodes - mean).T, lower=True, check_finite=False)
            terms.append(
                log_weight - 0.5 * (
                    self._layout.dim * LOG_2PI
                    + 2.0 * np.sum(np.log(np.diag(lower)))
                    + np.sum(z * z, axis=0)))
        log_f = np.maximum(logsumexp(np.stack(terms), axis=0), math.log(TINY))
        value = self._constant - math.fsum(self._mass * log_f)
        return value if math.isfinite(value) else np.inf


def global_kl_fit(g, target_order, config=None, init=None):
    """Fits a mixture of ``target_order`` components minimizing ``KL(g || f)``.

    Each restart is a quasi-Newton (BFGS) run on an objective evaluated with
    a fixed quadrature rule. The best run is then scored with
    :func:`~pygmreduce.kl_numeric`; if it does not improve on the initial
    mixture, the initial mixture is returned.

    :param GaussianMixture g: The mixture to approximate; at most
        2-dimensional.

    :param int target_order: The number of components of the fit.

    :param GlobalFitConfig config: The settings.

    :param GaussianMixture init: The starting point. If not specified, the
        sequential Pearson reduction of ``g`` is used.

    :return: a :class:`FitResult`

    :raises ValueError: if the orders or dimensions do not fit
    """
    config = config or GlobalFitConfig()
    if not 1 <= target_order <= len(g):
        raise ValueError('target order %r outside [1, %d]' % (
            target_order, len(g)))
    if g.dim > 2:
        raise ValueError('global fit needs numeric integration, which '
                         'supports at most 2 dimensions')
    spec = config.quad or QuadSpec.for_mixture(g)
    if init is None:
        init = reduce_to(
            g, target_order, CriterionKind.PEARSON_CHI2).final_mixture
    if len(init) != target_order or init.dim != g.dim:
        raise ValueError('initial mixture does not match the target')

    layout = _Layout(target_order, g.dim)
    objective = _Objective(g, layout, spec)
    theta0 = layout.pack(init)

    def run(restart):
        start = theta0
        if restart:
            rng = np.random.default_rng([config.seed, restart])
            start = theta0 + rng.normal(
                scale=config.perturbation, size=theta0.size)
        result = scipy.optimize.minimize(
            objective, start, method='BFGS',
            options={'maxiter': config.max_iter, 'gtol': config.grad_tol})
        _log.debug('restart %d: objective %g after %d iterations (%s)',
                   restart, result.fun, result.nit, result.message)
        return result

    results = parallel_map(run, range(config.restarts), config.threads)
    best = min(range(len(results)), key=lambda i: (results[i].fun, i))
    result = results[best]

    init_kl = kl_numeric(g, init, spec)
    fitted = layout.mixture(result.x)
    kl = kl_numeric(g, fitted, spec)
    converged = bool(result.success)
    if not converged:
        _log.warning('global fit to order %d did not converge: %s',
                     target_order, result.message)
    if not kl <= init_kl:
        _log.info('global fit did not improve on the initial mixture')
        return FitResult(init, init_kl, init_kl, converged)

    _log.info('global fit to order %d: KL %g (initial %g)',
              target_order, kl, init_kl)
    return FitResult(fitted, kl, init_kl, converged)
