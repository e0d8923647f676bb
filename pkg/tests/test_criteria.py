# coding=utf-8
import math

import numpy as np
import pytest

from pygmreduce import (
    CriterionKind, EXCLUDED, GaussianComponent, GaussianMixture, NumericKL,
    QuadSpec, UnboundedRatio, WilliamsISD, criterion_for, integrate,
    isd_numeric, kitagawa_wkl, kl_numeric, merge_geometry,
    moment_preserving_merge, pearson_chi2, pearson_numeric,
    ratio_integral_cross, ratio_integral_self, reduce_to, runnalls_bound,
    salmond_trace, score_pair, williams_isd)

from conftest import mixture, random_pair


def _ratio_shapes(cj, ck, geom):
    """The Gaussian shapes ``(fa, fb, mean, cov)`` of the three ratio
    integrands ``fa fb / p``.
    """
    shapes = []
    for c in (cj, ck):
        cov = np.linalg.inv(2.0 * c.precision - geom.v_precision)
        shapes.append((c, c, cov.dot(
            2.0 * c.precision.dot(c.mean)
            - geom.v_precision.dot(geom.xi)), cov))
    cov = np.linalg.inv(geom.W)
    shapes.append((cj, ck, cov.dot(
        cj.precision.dot(cj.mean) + ck.precision.dot(ck.mean)
        - geom.v_precision.dot(geom.xi)), cov))
    return shapes


def _whitened_integral(fa, fb, p, mean, cov, k=10.0):
    """Integrates ``fa fb / p`` after mapping ``x = mean + L u`` with
    ``L L^T = cov``, so the integrand is a standard Gaussian shape in ``u``.
    """
    lower = np.linalg.cholesky(cov)
    dim = mean.size
    spec = QuadSpec([-k] * dim, [k] * dim, rel_tol=1e-12, nodes_per_axis=200)

    def integrand(u):
        x = mean + u.dot(lower.T)
        return np.exp(fa.log_pdf(x) + fb.log_pdf(x) - p.log_pdf(x))

    return abs(np.linalg.det(lower)) * integrate(integrand, spec)


def _pearson_by_quadrature(cj, ck, geom):
    total = cj.weight + ck.weight
    a, b = cj.weight / total, ck.weight / total
    (fj, _, mj, sj), (fk, _, mk, sk), (_, _, mx, sx) = _ratio_shapes(
        cj, ck, geom)
    p = geom.merged
    return (
        a * a * _whitened_integral(fj, fj, p, mj, sj)
        + b * b * _whitened_integral(fk, fk, p, mk, sk)
        + 2.0 * a * b * _whitened_integral(cj, ck, p, mx, sx)
        - 1.0)


def _pair_mixtures(cj, ck):
    return GaussianMixture((cj, ck)), GaussianMixture(
        (moment_preserving_merge(cj, ck),))


def _bounded_pairs(rng, dim, count, attempts=20):
    """Draws pairs until ``count`` of them have a positive definite ``W``
    and a finite Pearson divergence.
    """
    pairs = []
    for _ in range(attempts * count):
        cj, ck = random_pair(rng, dim)
        geom = merge_geometry(cj, ck)
        if not geom.w_pd:
            continue
        try:
            value = pearson_chi2(cj, ck)
        except UnboundedRatio:
            continue
        pairs.append((cj, ck, geom, value))
        if len(pairs) == count:
            return pairs
    pytest.fail('drew only %d bounded pairs of %d' % (len(pairs), count))


def _check_pearson_against_quadrature(rng, dim, count):
    for cj, ck, geom, value in _bounded_pairs(rng, dim, count):
        assert value == pytest.approx(
            _pearson_by_quadrature(cj, ck, geom), rel=1e-6, abs=1e-9)


def _check_runnalls_dominates(rng, dim, count):
    for _ in range(count):
        cj, ck = random_pair(rng, dim)
        q, p = _pair_mixtures(cj, ck)
        kl = kl_numeric(q, p, QuadSpec.for_mixture(q))
        assert runnalls_bound(cj, ck) >= kl - 1e-8


def test_ratio_cross_identical():
    c = GaussianComponent(0.5, [1.0, -1.0], [[2.0, 0.3], [0.3, 1.0]])
    assert ratio_integral_cross(c, c, merge_geometry(c, c)) == pytest.approx(
        1.0, rel=1e-12)


def test_ratio_self_identical():
    c = GaussianComponent(0.5, [1.0, -1.0], [[2.0, 0.3], [0.3, 1.0]])
    assert ratio_integral_self(c, merge_geometry(c, c)) == pytest.approx(
        1.0, rel=1e-12)


def test_ratio_integrals_1d_quadrature():
    cj = GaussianComponent(0.5, [0.0], [[1.0]])
    ck = GaussianComponent(0.5, [5.0], [[1.0]])
    geom = merge_geometry(cj, ck)
    p = geom.merged
    spec = QuadSpec([-40.0], [40.0])

    cross = integrate(
        lambda x: np.exp(cj.log_pdf(x) + ck.log_pdf(x) - p.log_pdf(x)), spec)
    assert ratio_integral_cross(cj, ck, geom) == pytest.approx(
        cross, rel=1e-8)

    own = integrate(lambda x: np.exp(2.0 * cj.log_pdf(x) - p.log_pdf(x)), spec)
    assert ratio_integral_self(cj, geom) == pytest.approx(own, rel=1e-8)


def test_ratio_integral_cross_2d_quadrature(rng):
    for cj, ck, geom, _ in _bounded_pairs(rng, 2, 5):
        _, _, (_, _, mean, cov) = _ratio_shapes(cj, ck, geom)
        numeric = _whitened_integral(cj, ck, geom.merged, mean, cov)
        assert ratio_integral_cross(cj, ck, geom) == pytest.approx(
            numeric, rel=1e-8)


def test_ratio_self_unbounded():
    cj = GaussianComponent(0.01, [0.0], [[1.0]])
    ck = GaussianComponent(0.99, [0.0], [[0.01]])
    geom = merge_geometry(cj, ck)
    with pytest.raises(UnboundedRatio):
        ratio_integral_self(cj, geom)
    with pytest.raises(UnboundedRatio):
        pearson_chi2(cj, ck)
    m = GaussianMixture((cj, ck))
    assert score_pair(CriterionKind.PEARSON_CHI2, m, 0, 1) == EXCLUDED


def test_pearson_identical():
    c = GaussianComponent(0.4, [1.0, 2.0], [[1.0, 0.2], [0.2, 3.0]])
    assert pearson_chi2(c, c) == pytest.approx(0.0, abs=1e-12)


def test_pearson_1d_quadrature():
    cj = GaussianComponent(0.5, [0.0], [[1.0]])
    ck = GaussianComponent(0.5, [5.0], [[1.0]])
    q, p = _pair_mixtures(cj, ck)
    numeric = pearson_numeric(q, p, QuadSpec([-40.0], [40.0]))
    assert pearson_chi2(cj, ck) == pytest.approx(numeric, rel=1e-6)


def test_pearson_uses_renormalized_weights():
    cj = GaussianComponent(0.5, [0.0], [[1.0]])
    ck = GaussianComponent(0.5, [2.0], [[1.5]])
    value = pearson_chi2(cj, ck)
    assert pearson_chi2(cj.with_weight(0.05), ck.with_weight(0.05)) == (
        pytest.approx(value, rel=1e-12))


def test_pearson_symmetric(rng):
    for dim in (1, 2, 3):
        cj, ck = random_pair(rng, dim)
        try:
            value = pearson_chi2(cj, ck)
        except UnboundedRatio:
            continue
        assert pearson_chi2(ck, cj) == pytest.approx(value, rel=1e-12)


def test_pearson_matches_quadrature_quick(rng):
    _check_pearson_against_quadrature(rng, 1, 10)
    _check_pearson_against_quadrature(rng, 2, 4)


@pytest.mark.slow
def test_pearson_matches_quadrature(rng):
    _check_pearson_against_quadrature(rng, 1, 100)
    _check_pearson_against_quadrature(rng, 2, 100)


def test_kitagawa_values():
    c = GaussianComponent(0.3, [1.0], [[1.0]])
    assert kitagawa_wkl(c, c.with_weight(0.2)) == pytest.approx(
        2.0 * 0.3 * 0.2)
    cj = GaussianComponent(0.5, [0.0], [[1.0]])
    ck = GaussianComponent(0.5, [0.0], [[4.0]])
    assert kitagawa_wkl(cj, ck) == pytest.approx(1.0625)


def test_runnalls_values():
    c = GaussianComponent(0.3, [1.0, 0.0], [[1.0, 0.5], [0.5, 2.0]])
    assert runnalls_bound(c, c) == pytest.approx(0.0, abs=1e-12)
    cj = GaussianComponent(0.5, [0.0], [[1.0]])
    ck = GaussianComponent(0.5, [2.0], [[1.0]])
    assert runnalls_bound(cj, ck) == pytest.approx(0.5 * math.log(2.0))


def test_runnalls_dominates_numeric_kl_quick(rng):
    _check_runnalls_dominates(rng, 1, 10)
    _check_runnalls_dominates(rng, 2, 4)


@pytest.mark.slow
def test_runnalls_dominates_numeric_kl(rng):
    _check_runnalls_dominates(rng, 1, 100)
    _check_runnalls_dominates(rng, 2, 100)


def test_salmond_values():
    cj = GaussianComponent(0.5, [0.0], [[1.0]])
    ck = GaussianComponent(0.5, [2.0], [[1.0]])
    assert salmond_trace(cj, ck, [[2.0]]) == pytest.approx(0.5)
    assert salmond_trace(cj, cj, [[2.0]]) == 0.0


def test_salmond_scale_invariant(rng):
    cj, ck = random_pair(rng, 2)
    mix_cov = np.array([[2.0, 0.5], [0.5, 1.0]])
    value = salmond_trace(cj, ck, mix_cov)
    c = 3.0
    scaled = [
        GaussianComponent(x.weight, c * x.mean, c * c * x.cov)
        for x in (cj, ck)]
    assert salmond_trace(scaled[0], scaled[1], c * c * mix_cov) == (
        pytest.approx(value, rel=1e-12))


def test_williams_identical(table3):
    assert williams_isd(table3, table3) == pytest.approx(0.0, abs=1e-12)


def test_williams_separated():
    g = mixture((1.0, [0.0], [[1.0]]))
    f = mixture((1.0, [50.0], [[1.0]]))
    assert williams_isd(g, f) == pytest.approx(
        2.0 / math.sqrt(4.0 * math.pi), rel=1e-12)


def test_williams_matches_quadrature(table1, table1_quad):
    reduced = reduce_to(table1, 8, 'pearson').final_mixture
    assert williams_isd(table1, reduced) == pytest.approx(
        isd_numeric(table1, reduced, table1_quad), abs=1e-8)


def test_williams_criterion_scores_pair_against_merge():
    m = mixture(
        (0.3, [0.0], [[1.0]]), (0.3, [1.0], [[2.0]]), (0.4, [4.0], [[1.0]]))
    criterion = WilliamsISD()
    criterion.prepare(m)
    q, p = _pair_mixtures(m[0], m[2])
    assert criterion.score(m, 0, 2) == pytest.approx(williams_isd(q, p))


def test_score_pair_identical():
    c = GaussianComponent(0.25, [0.0], [[1.0]])
    m = GaussianMixture((c, c, GaussianComponent(0.5, [3.0], [[2.0]])))
    assert score_pair('pearson', m, 0, 1) == pytest.approx(0.0, abs=1e-12)
    assert score_pair('numkl', m, 0, 1) == pytest.approx(0.0, abs=1e-8)


def test_score_pair_bad_indices(table1):
    with pytest.raises(ValueError):
        score_pair('pearson', table1, 3, 3)
    with pytest.raises(ValueError):
        score_pair('kitagawa', table1, 0, 16)


@pytest.mark.parametrize('kind', [
    'pearson', 'kitagawa', 'runnalls', 'salmond', 'isd'])
def test_criteria_symmetric(kind, rng):
    cj, ck = random_pair(rng, 2)
    other = GaussianComponent(0.5, [3.0, 3.0], np.eye(2))
    forward = GaussianMixture((cj, ck, other))
    backward = GaussianMixture((ck, cj, other))
    assert score_pair(kind, backward, 0, 1) == pytest.approx(
        score_pair(kind, forward, 0, 1), rel=1e-12, abs=1e-15)


def test_numkl_uses_reference(table1):
    reduced = reduce_to(table1, 10, 'pearson').final_mixture
    against_reference = NumericKL(reference=table1)
    against_reference.prepare(reduced)
    standalone = NumericKL()
    standalone.prepare(reduced)
    assert against_reference.score(reduced, 0, 1) != standalone.score(
        reduced, 0, 1)


def test_criterion_options_are_prefixed():
    criterion = criterion_for('numkl', numkl_box_k=4.0, pearson_other=1)
    assert criterion._options == {'box_k': 4.0}
    assert criterion.NEEDS_REFERENCE and not criterion.CACHEABLE


def test_criterion_kind_parse():
    assert CriterionKind.parse('isd') is CriterionKind.WILLIAMS_ISD
    assert CriterionKind.parse('pearson_chi2') is CriterionKind.PEARSON_CHI2
    assert CriterionKind.parse(CriterionKind.SALMOND_TRACE) is (
        CriterionKind.SALMOND_TRACE)
    with pytest.raises(ValueError):
        CriterionKind.parse('hellinger')
