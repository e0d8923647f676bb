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
Gaussian-sum filtering and smoothing for linear state-space models

    x_n = F x_{n-1} + G v_n
    y_n = H x_n + w_n

with Gaussian mixture noises ``v_n`` and ``w_n``.

The filter runs a bank of Kalman updates, one per pair of predicted
component and noise component, and caps the posterior order with the
sequential reducer. The smoother combines the forward predictions with a
backward Gaussian-sum information filter.
"""

import csv
import json
import logging
import math

import numpy as np
from scipy.special import logsumexp

from ._base import CriterionKind
from ._errors import NumericError, ReductionStuck
from ._gaussmix import (
    GaussianComponent, GaussianMixture, LOG_2PI, mixture_from_dict,
    mixture_moments, mixture_to_dict, normalize)
from ._reduce import reduce_to
from ._util import linalg, serialized_output

_log = logging.getLogger(__name__)

#: The variance of the default diffuse prior.
PRIOR_VARIANCE = 1e4

#: The noise parameters of the level-shift trend model.
TREND_PARAMETERS = {
    'tau2': 0.000254, 'xi2': 1.189, 'alpha': 0.989, 'sigma2': 1.027}


class LinearStateSpaceModel(object):
    """A time-invariant linear model with mixture noises.

    :param F: The ``(dx, dx)`` transition matrix.

    :param G: The ``(dx, dv)`` system noise matrix.

    :param H: The ``(dy, dx)`` observation matrix.

    :param GaussianMixture sys_noise: The system noise over ``dv``
        dimensions.

    :param GaussianMixture obs_noise: The observation noise over ``dy``
        dimensions.

    Both noise mixtures are normalized. Their covariances may be singular,
    except that the observation noise covariances must be positive definite
    for smoothing.

    :raises ValueError: if the dimensions do not agree
    """
    def __init__(self, F, G, H, sys_noise, obs_noise):
        F, G, H = (np.atleast_2d(np.asarray(a, dtype=float)) for a in (F, G, H))
        dx = F.shape[0]
        if F.shape != (dx, dx):
            raise ValueError('F must be square')
        if G.shape[0] != dx or H.shape[1] != dx:
            raise ValueError('G and H must match the state dimension %d' % dx)
        if sys_noise.dim != G.shape[1]:
            raise ValueError('system noise dimension %d does not match G' % (
                sys_noise.dim,))
        if obs_noise.dim != H.shape[0]:
            raise ValueError(
                'observation noise dimension %d does not match H' % (
                    obs_noise.dim,))
        for a in (F, G, H):
            a.flags.writeable = False
        self._F, self._G, self._H = F, G, H
        self._sys_noise = normalize(sys_noise)
        self._obs_noise = normalize(obs_noise)

    @property
    def F(self):
        return self._F

    @property
    def G(self):
        return self._G

    @property
    def H(self):
        return self._H

    @property
    def sys_noise(self):
        return self._sys_noise

    @property
    def obs_noise(self):
        return self._obs_noise

    @property
    def state_dim(self):
        return self._F.shape[0]

    @property
    def obs_dim(self):
        return self._H.shape[0]

    def to_dict(self):
        return {
            'F': self._F.tolist(),
            'G': self._G.tolist(),
            'H': self._H.tolist(),
            'sys_noise': mixture_to_dict(self._sys_noise),
            'obs_noise': mixture_to_dict(self._obs_noise)}

    @classmethod
    def from_dict(cls, data):
        """Parses the JSON representation of a model.

        :raises ValueError: if the data is malformed
        """
        try:
            return cls(
                data['F'], data['G'], data['H'],
                mixture_from_dict(data['sys_noise'], require_pd=False),
                mixture_from_dict(data['obs_noise'], require_pd=False))
        except (KeyError, TypeError):
            raise ValueError('model needs F, G, H, sys_noise and obs_noise')


class FilterRun(object):
    """The stored densities of a filter run.

    :ivar list predicted: ``p(x_n | Y_{n-1})`` for every step.

    :ivar list filtered: ``p(x_n | Y_n)`` for every step, after reduction.

    :ivar smoothed: ``p(x_n | Y_N)`` for every step, or ``None``.

    :ivar float log_likelihood: The sum of :attr:`step_log_likelihoods`.

    :ivar list step_log_likelihoods: ``log p(y_n | Y_{n-1})``.

    :ivar int cap: The maximum order of the stored posteriors.

    :ivar criterion: The :class:`~pygmreduce.CriterionKind` used to reduce.

    :ivar observations: The ``(N, dy)`` array of observations.
    """
    def __init__(self, predicted, filtered, step_log_likelihoods, cap,
                 criterion, observations, smoothed=None, options=None):
        self.predicted = tuple(predicted)
        self.filtered = tuple(filtered)
        self.step_log_likelihoods = tuple(step_log_likelihoods)
        self.log_likelihood = math.fsum(self.step_log_likelihoods)
        self.cap = cap
        self.criterion = criterion
        self.observations = np.array(observations, dtype=float)
        self.observations.flags.writeable = False
        self.smoothed = None if smoothed is None else tuple(smoothed)
        self.options = dict(options or {})

    def __len__(self):
        return len(self.filtered)

    def with_smoothed(self, smoothed):
        """Returns a copy of this run with :attr:`smoothed` set.
        """
        return FilterRun(
            self.predicted, self.filtered, self.step_log_likelihoods,
            self.cap, self.criterion, self.observations, smoothed,
            self.options)

    def means(self, which='filtered'):
        """The overall means of one of the stored sequences.

        :param str which: ``'predicted'``, ``'filtered'`` or ``'smoothed'``.

        :return: an ``(N, dx)`` array
        """
        mixtures = getattr(self, which)
        if mixtures is None:
            raise ValueError('run has no %s densities' % which)
        return np.array([mixture_moments(m)[0] for m in mixtures])

    def to_dict(self):
        def dump(mixtures):
            if mixtures is None:
                return None
            return [mixture_to_dict(m) for m in mixtures]

        return {
            'cap': self.cap,
            'criterion': self.criterion.value,
            'log_likelihood': self.log_likelihood,
            'step_log_likelihoods': list(self.step_log_likelihoods),
            'observations': self.observations.tolist(),
            'predicted': dump(self.predicted),
            'filtered': dump(self.filtered),
            'smoothed': dump(self.smoothed)}


def trend_model(tau2, xi2, alpha, sigma2):
    """The random-walk trend model with a two-component system noise.

    ``F = G = H = [1]``, ``v_n ~ alpha N(0, tau2) + (1 - alpha) N(0, xi2)``
    and ``w_n ~ N(0, sigma2)``.

    :raises ValueError: if a variance is not positive or ``alpha`` is not in
        ``(0, 1)``
    """
    if not (tau2 > 0 and xi2 > 0 and sigma2 > 0):
        raise ValueError('variances must be positive')
    if not 0 < alpha < 1:
        raise ValueError('alpha must be in (0, 1), got %r' % (alpha,))
    one = [[1.0]]
    return LinearStateSpaceModel(
        one, one, one,
        GaussianMixture((
            GaussianComponent(alpha, [0.0], [[tau2]]),
            GaussianComponent(1.0 - alpha, [0.0], [[xi2]]))),
        GaussianMixture((GaussianComponent(1.0, [0.0], [[sigma2]]),)))


def default_prior(model, variance=PRIOR_VARIANCE):
    """A single zero-mean Gaussian with covariance ``variance * I``.
    """
    dx = model.state_dim
    return GaussianMixture((
        GaussianComponent(1.0, np.zeros(dx), variance * np.eye(dx)),))


def _from_log_weights(log_weights, means, covs, where):
    """Builds a normalized mixture, dropping terms whose weight underflows.
    """
    log_weights = np.asarray(log_weights)
    total = logsumexp(log_weights)
    if not math.isfinite(total):
        raise NumericError('all mixture weights vanished', where)
    weights = np.exp(log_weights - total)
    keep = np.flatnonzero(weights > 0.0)
    if keep.size < weights.size:
        _log.warning('dropped %d underflowed components at %s',
                     weights.size - keep.size, where)
    components = []
    for i in keep:
        try:
            components.append(GaussianComponent(weights[i], means[i], covs[i]))
        except NumericError:
            raise NumericError('covariance is not positive definite', where)
    return normalize(GaussianMixture(components)), total


def predict_step(posterior, model):
    """Propagates a posterior through the transition.

    :param GaussianMixture posterior: ``p(x_{n-1} | Y_{n-1})``.

    :param LinearStateSpaceModel model: The model.

    :return: ``p(x_n | Y_{n-1})`` with ``q * len(posterior)`` components
    """
    F, G = model.F, model.G
    components = []
    for post in posterior:
        mean = F.dot(post.mean)
        cov = F.dot(post.cov).dot(F.T)
        for noise in model.sys_noise:
            components.append(GaussianComponent(
                post.weight * noise.weight,
                mean + G.dot(noise.mean),
                linalg.symmetrize(cov + G.dot(noise.cov).dot(G.T))))
    return normalize(GaussianMixture(components))


def filter_step(predicted, y, model, step=None):
    """Conditions a prediction on an observation.

    Each pair of predicted component and observation noise component gets a
    Kalman update with a Joseph form covariance; its weight is multiplied by
    the innovation density.

    :param GaussianMixture predicted: ``p(x_n | Y_{n-1})``.

    :param y: The observation ``y_n``.

    :param LinearStateSpaceModel model: The model.

    :param step: The step index used in error messages.

    :return: the tuple ``(posterior, step_log_likelihood)``

    :raises NumericError: if an innovation covariance is not positive definite
    """
    H = model.H
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.size != model.obs_dim:
        raise ValueError('observation of length %d does not match %d' % (
            y.size, model.obs_dim))
    eye = np.eye(model.state_dim)
    log_weights, means, covs = [], [], []
    for pred in predicted:
        hv = H.dot(pred.cov)
        for noise in model.obs_noise:
            s_chol = linalg.cholesky(
                linalg.symmetrize(hv.dot(H.T) + noise.cov), step)
            e = y - H.dot(pred.mean) - noise.mean
            gain = linalg.chol_solve(s_chol, hv).T
            ikh = eye - gain.dot(H)
            means.append(pred.mean + gain.dot(e))
            covs.append(linalg.symmetrize(
                ikh.dot(pred.cov).dot(ikh.T)
                + gain.dot(noise.cov).dot(gain.T)))
            log_weights.append(
                math.log(pred.weight) + math.log(noise.weight)
                - 0.5 * (model.obs_dim * LOG_2PI + linalg.logdet(s_chol)
                         + linalg.mahalanobis(s_chol, e)))
    return _from_log_weights(log_weights, means, covs, step)


def _cap(mixture, cap, kind, step, threads, options):
    if len(mixture) <= cap:
        return mixture
    try:
        return reduce_to(
            mixture, cap, kind, threads=threads, **options).final_mixture
    except ReductionStuck:
        _log.error('reduction stuck at step %s', step)
        raise
    except NumericError as e:
        raise NumericError('reduction failed: %s' % e, step)


def run_filter(model, ys, prior=None, cap=16, kind=CriterionKind.PEARSON_CHI2,
               cap_after_predict=False, threads=1, **options):
    """Runs the Gaussian-sum filter over a series.

    :param LinearStateSpaceModel model: The model.

    :param ys: The observations, one vector per step. For scalar
        observations a flat sequence is accepted.

    :param GaussianMixture prior: ``p(x_0)``. If not specified,
        :func:`default_prior` is used.

    :param int cap: The maximum order of the filtered densities.

    :param kind: The reduction criterion.

    :param bool cap_after_predict: Whether to also reduce the predicted
        densities.

    :param int threads: The number of threads used to score pairs.

    :param options: Passed to the criterion constructor.

    :return: a :class:`FilterRun` without smoothed densities

    :raises ValueError: if ``cap`` is below 1 or ``ys`` is empty
    """
    if cap < 1:
        raise ValueError('cap must be at least 1')
    ys = np.asarray(ys, dtype=float)
    if ys.ndim == 1:
        ys = ys.reshape(-1, 1) if model.obs_dim == 1 else ys.reshape(1, -1)
    if not len(ys):
        raise ValueError('no observations')
    kind = CriterionKind.parse(kind)
    posterior = prior if prior is not None else default_prior(model)
    if posterior.dim != model.state_dim:
        raise ValueError('prior dimension does not match the model')

    predicted, filtered, log_liks = [], [], []
    for n, y in enumerate(ys):
        pred = predict_step(posterior, model)
        if cap_after_predict:
            pred = _cap(pred, cap, kind, n, threads, options)
        posterior, log_lik = filter_step(pred, y, model, n)
        posterior = _cap(posterior, cap, kind, n, threads, options)
        predicted.append(pred)
        filtered.append(posterior)
        log_liks.append(log_lik)

    run = FilterRun(
        predicted, filtered, log_liks, cap, kind, ys,
        options=dict(options, cap_after_predict=cap_after_predict,
                     threads=threads))
    _log.info('filtered %d steps with cap %d: log-likelihood %.6f',
              len(ys), cap, run.log_likelihood)
    return run


class _Terms(object):
    """A sum of ``exp(c - x^T L x / 2 + h^T x)`` terms over the state.
    """
    __slots__ = ('log_scales', 'precisions', 'shifts')

    def __init__(self, log_scales, precisions, shifts):
        self.log_scales = list(log_scales)
        self.precisions = list(precisions)
        self.shifts = list(shifts)

    def __len__(self):
        return len(self.log_scales)


def _likelihood_terms(y, model, step):
    """``p(y_n | x_n)`` as information terms.
    """
    H = model.H
    terms = _Terms((), (), ())
    for noise in model.obs_noise:
        try:
            r_chol = noise.chol
        except NumericError:
            raise NumericError(
                'smoothing needs positive definite observation noise', step)
        e = y - noise.mean
        r_inv_h = linalg.chol_solve(r_chol, H)
        terms.log_scales.append(
            math.log(noise.weight)
            - 0.5 * (model.obs_dim * LOG_2PI + linalg.logdet(r_chol)
                     + linalg.mahalanobis(r_chol, e)))
        terms.precisions.append(linalg.symmetrize(H.T.dot(r_inv_h)))
        terms.shifts.append(r_inv_h.T.dot(e))
    return terms


def _times(terms, other):
    """The product of two term sums.
    """
    out = _Terms((), (), ())
    for c, lam, h in zip(terms.log_scales, terms.precisions, terms.shifts):
        for c2, lam2, h2 in zip(
                other.log_scales, other.precisions, other.shifts):
            out.log_scales.append(c + c2)
            out.precisions.append(lam + lam2)
            out.shifts.append(h + h2)
    return out


def _gaussian_integral(c, lam, h, mean, cov):
    """Integrates ``N(x | mean, cov) exp(c - x^T lam x / 2 + h^T x)``.

    :return: the tuple ``(log_value, lam_m, h_m)`` where ``lam_m`` and
        ``h_m`` describe the result as a function of ``mean``
    """
    m = np.eye(lam.shape[0]) + lam.dot(cov)
    sign, log_det = np.linalg.slogdet(m)
    if sign <= 0:
        raise NumericError('information update is singular')
    lam_m = linalg.symmetrize(np.linalg.solve(m, lam))
    h_m = np.linalg.solve(m, h)
    log_value = (
        c - 0.5 * log_det - 0.5 * mean.dot(lam_m).dot(mean) + h_m.dot(mean)
        + 0.5 * h.dot(cov).dot(h_m))
    return log_value, lam_m, h_m


def _propagate(terms, model):
    """Integrates the term sum against the transition density.
    """
    F, G = model.F, model.G
    out = _Terms((), (), ())
    for c, lam, h in zip(terms.log_scales, terms.precisions, terms.shifts):
        for noise in model.sys_noise:
            shift = G.dot(noise.mean)
            log_value, lam_m, h_m = _gaussian_integral(
                c, lam, h, shift, G.dot(noise.cov).dot(G.T))
            out.log_scales.append(math.log(noise.weight) + log_value)
            out.precisions.append(linalg.symmetrize(F.T.dot(lam_m).dot(F)))
            out.shifts.append(F.T.dot(h_m - lam_m.dot(shift)))
    return out


def _reduce_terms(terms, cap, kind, step, threads, options):
    """Caps the number of backward terms.

    Terms with positive definite precision are read as weighted Gaussians
    and reduced like any mixture. Otherwise the terms with the largest
    scale are kept.
    """
    if len(terms) <= cap:
        return terms
    dim = terms.precisions[0].shape[0]
    chols = []
    for lam in terms.precisions:
        if not linalg.is_pd(lam):
            _log.warning('backward terms at step %s are not normalizable; '
                         'keeping the %d largest', step, cap)
            keep = sorted(np.argsort(terms.log_scales, kind='stable')[-cap:])
            return _Terms(
                [terms.log_scales[i] for i in keep],
                [terms.precisions[i] for i in keep],
                [terms.shifts[i] for i in keep])
        chols.append(linalg.cholesky(lam))

    log_weights, means, covs = [], [], []
    for c, h, lower in zip(terms.log_scales, terms.shifts, chols):
        mean = linalg.chol_solve(lower, h)
        log_weights.append(
            c + 0.5 * h.dot(mean) + 0.5 * dim * LOG_2PI
            - 0.5 * linalg.logdet(lower))
        means.append(mean)
        covs.append(linalg.chol_inv(lower))
    mixture, log_total = _from_log_weights(log_weights, means, covs, step)
    mixture = _cap(mixture, cap, kind, step, threads, options)

    out = _Terms((), (), ())
    for comp in mixture:
        precision = comp.precision
        out.log_scales.append(
            log_total + math.log(comp.weight)
            - 0.5 * (comp.mean.dot(precision).dot(comp.mean)
                     + dim * LOG_2PI + comp.logdet))
        out.precisions.append(precision)
        out.shifts.append(precision.dot(comp.mean))
    return out


def _combine(predicted, terms, step):
    """``p(x_n | Y_{n-1})`` times the backward terms, normalized.
    """
    eye = np.eye(predicted.dim)
    log_weights, means, covs = [], [], []
    for pred in predicted:
        for c, lam, h in zip(
                terms.log_scales, terms.precisions, terms.shifts):
            log_value = _gaussian_integral(c, lam, h, pred.mean, pred.cov)[0]
            m = eye + pred.cov.dot(lam)
            log_weights.append(math.log(pred.weight) + log_value)
            means.append(np.linalg.solve(m, pred.mean + pred.cov.dot(h)))
            covs.append(linalg.symmetrize(np.linalg.solve(m, pred.cov)))
    return _from_log_weights(log_weights, means, covs, step)[0]


def run_smoother(run, model, threads=None):
    """Fixed-interval smoothing by the two-filter formula.

    A backward Gaussian-sum information filter computes
    ``p(y_n, ..., y_N | x_n)`` as a sum of Gaussian-shaped terms, capped like
    the forward filter, and each step multiplies it with the forward
    prediction ``p(x_n | Y_{n-1})``. The last smoothed density is the last
    filtered one.

    :param FilterRun run: The output of :func:`run_filter`; it must have been
        run on ``ys`` given here.

    :param LinearStateSpaceModel model: The model of the run.

    :param int threads: The number of threads used to score pairs. If not
        specified, the value of the filter run is used.

    :return: a copy of ``run`` with smoothed densities

    :raises NumericError: if a combined covariance is not positive definite
    """
    if threads is None:
        threads = run.options.get('threads', 1)
    options = {
        key: value for key, value in run.options.items()
        if key not in ('threads', 'cap_after_predict')}
    ys = run.observations
    last = len(ys) - 1
    smoothed = [None] * len(ys)
    smoothed[last] = run.filtered[last]

    terms = _reduce_terms(
        _likelihood_terms(ys[last], model, last), run.cap, run.criterion,
        last, threads, options)
    for n in range(last - 1, -1, -1):
        try:
            terms = _times(
                _propagate(terms, model), _likelihood_terms(ys[n], model, n))
        except NumericError as e:
            if e.where is not None:
                raise
            raise NumericError(str(e), n)
        terms = _reduce_terms(
            terms, run.cap, run.criterion, n, threads, options)
        smoothed[n] = _cap(
            _combine(run.predicted[n], terms, n), run.cap, run.criterion, n,
            threads, options)

    _log.info('smoothed %d steps with cap %d', len(ys), run.cap)
    return run.with_smoothed(smoothed)


def load_model(path):
    """Reads a :class:`LinearStateSpaceModel` from a JSON file.
    """
    with open(path, 'r') as f:
        try:
            data = json.load(f)
        except ValueError as e:
            raise ValueError('%s: %s' % (path, e))
    return LinearStateSpaceModel.from_dict(data)


def save_model(model, path):
    """Writes a :class:`LinearStateSpaceModel` to a JSON file.
    """
    with serialized_output(path) as f:
        json.dump(model.to_dict(), f, indent=1)
        f.write('\n')


def load_series(path):
    """Reads observations from a CSV file, one vector per row.

    A first row that does not parse as numbers is taken as a header.

    :return: an ``(N, dy)`` array

    :raises ValueError: if a row is malformed or the rows differ in length
    """
    rows = []
    with open(path, 'r', newline='') as f:
        for i, row in enumerate(csv.reader(f)):
            if not row or not any(cell.strip() for cell in row):
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                if i == 0:
                    continue
                raise ValueError('%s: row %d is not numeric' % (path, i + 1))
    if not rows:
        raise ValueError('%s: no observations' % path)
    if len(set(len(row) for row in rows)) != 1:
        raise ValueError('%s: rows differ in length' % path)
    return np.array(rows)


def save_series(ys, path, header=None):
    """Writes observations to a CSV file.

    :param ys: An ``(N, dy)`` array or a flat sequence of scalars.

    :param header: An optional list of column names.
    """
    ys = np.asarray(ys, dtype=float)
    if ys.ndim == 1:
        ys = ys.reshape(-1, 1)
    with serialized_output(path) as f:
        writer = csv.writer(f, lineterminator='\n')
        if header:
            writer.writerow(header)
        for row in ys:
            writer.writerow([repr(float(v)) for v in row])


def save_run(run, path):
    """Writes a :class:`FilterRun` to a JSON file.
    """
    with serialized_output(path) as f:
        json.dump(run.to_dict(), f)
        f.write('\n')
