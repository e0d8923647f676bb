# coding=utf-8
import json
import math

import numpy as np
import pytest

from pygmreduce import (
    GaussianComponent, GaussianMixture, NumericError, density, load_mixture,
    log_density, merge_geometry, mixture_from_dict, mixture_moments,
    mixture_to_dict, moment_preserving_merge, normalize, save_mixture)
from pygmreduce import _fixtures

from conftest import mixture, random_component


def test_component_rejects_bad_input():
    with pytest.raises(ValueError):
        GaussianComponent(0.0, [0.0], [[1.0]])
    with pytest.raises(ValueError):
        GaussianComponent(1.0, [0.0, 0.0], [[1.0]])
    with pytest.raises(ValueError):
        GaussianComponent(1.0, [0.0, 0.0], [[1.0, 0.5], [0.4, 1.0]])
    with pytest.raises(NumericError):
        GaussianComponent(1.0, [0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])


def test_component_allows_singular_noise():
    c = GaussianComponent(1.0, [0.0], [[0.0]], require_pd=False)
    assert c.cov[0, 0] == 0.0
    with pytest.raises(NumericError):
        c.chol


def test_component_is_read_only():
    c = GaussianComponent(1.0, [0.0], [[1.0]])
    with pytest.raises(ValueError):
        c.mean[0] = 1.0


def test_mixture_rejects_mixed_dimensions():
    with pytest.raises(ValueError):
        GaussianMixture(())
    with pytest.raises(ValueError):
        mixture((0.5, [0.0], [[1.0]]), (0.5, [0.0, 0.0], np.eye(2)))


def test_density_standard_normal(standard_normal):
    assert density(standard_normal, 0.0) == pytest.approx(
        0.3989422804, abs=1e-10)


def test_density_table1_is_sum_of_terms(table1):
    expected = math.fsum(
        c.weight * math.exp(-0.5 * c.mean[0] ** 2 / c.cov[0, 0])
        / math.sqrt(2.0 * math.pi * c.cov[0, 0])
        for c in table1)
    assert density(table1, [0.0]) == pytest.approx(expected, rel=1e-13)


def test_density_underflows_to_zero(table1):
    value = density(table1, 1e6)
    assert value == 0.0
    log_value = log_density(table1, 1e6)
    assert math.isfinite(log_value)
    assert log_value < -1e10


def test_density_vectorised(table3):
    points = np.array([[0.0, 0.0], [1.0, -2.0], [3.0, 3.0]])
    values = density(table3, points)
    assert values.shape == (3,)
    for x, value in zip(points, values):
        assert density(table3, x) == pytest.approx(value, rel=1e-14)


def test_density_dimension_mismatch(table3):
    with pytest.raises(ValueError):
        density(table3, [0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        density(table3, [0.0])
    with pytest.raises(ValueError):
        density(table3, np.zeros((2, 3)))


def test_density_flat_array_1d(table1):
    value = density(table1, [0.5])
    assert isinstance(value, float)

    xs = np.array([-1.0, 0.5, 2.0])
    values = density(table1, xs)
    assert values.shape == (3,)
    np.testing.assert_allclose(values, density(table1, xs.reshape(-1, 1)))
    assert values[1] == pytest.approx(value, rel=1e-14)


def test_moments_single_component():
    m = mixture((1.0, [1.0, 2.0], [[2.0, 0.3], [0.3, 1.0]]))
    mean, cov = mixture_moments(m)
    np.testing.assert_array_equal(mean, [1.0, 2.0])
    np.testing.assert_allclose(cov, [[2.0, 0.3], [0.3, 1.0]])


def test_moments_symmetric_pair():
    m = mixture((0.5, [1.0], [[1.0]]), (0.5, [-1.0], [[1.0]]))
    mean, cov = mixture_moments(m)
    assert mean[0] == pytest.approx(0.0, abs=1e-15)
    assert cov[0, 0] == pytest.approx(2.0)


def test_merge_identical():
    c = GaussianComponent(0.3, [1.0, -1.0], [[2.0, 0.5], [0.5, 1.0]])
    merged = moment_preserving_merge(c, c)
    assert merged.weight == pytest.approx(0.6)
    np.testing.assert_allclose(merged.mean, c.mean)
    np.testing.assert_allclose(merged.cov, c.cov)


def test_merge_symmetric_pair():
    merged = moment_preserving_merge(
        GaussianComponent(0.5, [1.0], [[1.0]]),
        GaussianComponent(0.5, [-1.0], [[1.0]]))
    assert merged.weight == 1.0
    assert merged.mean[0] == 0.0
    assert merged.cov[0, 0] == pytest.approx(2.0)


def test_merge_matches_moments_and_is_symmetric(rng):
    for dim in (1, 2, 3):
        cj = random_component(rng, dim)
        ck = random_component(rng, dim)
        merged = moment_preserving_merge(cj, ck)
        mean, cov = mixture_moments(GaussianMixture((cj, ck)))
        np.testing.assert_allclose(merged.mean, mean, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(merged.cov, cov, rtol=1e-12, atol=1e-12)

        other = moment_preserving_merge(ck, cj)
        assert other.weight == pytest.approx(merged.weight, abs=1e-12)
        np.testing.assert_allclose(other.mean, merged.mean, atol=1e-12)
        np.testing.assert_allclose(other.cov, merged.cov, atol=1e-12)


def test_merge_preserves_mixture_moments(table3):
    mean, cov = mixture_moments(table3)
    merged = table3.replace_pair(
        2, 5, moment_preserving_merge(table3[2], table3[5]))
    assert len(merged) == len(table3) - 1
    assert merged[2].weight == pytest.approx(
        table3[2].weight + table3[5].weight)
    mean2, cov2 = mixture_moments(merged)
    np.testing.assert_allclose(mean2, mean, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(cov2, cov, rtol=1e-10)


def test_geometry_identical():
    c = GaussianComponent(0.5, [1.0, 2.0], [[2.0, 0.5], [0.5, 1.0]])
    geom = merge_geometry(c, c)
    assert geom.w_pd
    np.testing.assert_allclose(geom.xi, c.mean)
    np.testing.assert_allclose(geom.zeta, c.mean)
    np.testing.assert_allclose(geom.eta, c.mean)
    np.testing.assert_allclose(geom.V, c.cov)
    np.testing.assert_allclose(geom.W, c.precision, rtol=1e-12)


def test_geometry_hand_values():
    geom = merge_geometry(
        GaussianComponent(0.5, [0.0], [[1.0]]),
        GaussianComponent(0.5, [5.0], [[1.0]]))
    assert geom.xi[0] == pytest.approx(2.5)
    assert geom.V[0, 0] == pytest.approx(7.25)
    assert geom.zeta[0] == pytest.approx(2.5)
    assert geom.sigma_jk[0, 0] == pytest.approx(0.5)
    assert geom.W[0, 0] == pytest.approx(2.0 - 1.0 / 7.25)
    assert geom.w_pd


def test_geometry_separated_narrow_pair():
    geom = merge_geometry(
        GaussianComponent(0.5, [-10.0, 0.0], np.eye(2) * 1e-3),
        GaussianComponent(0.5, [10.0, 0.0], np.eye(2) * 1e-3))
    assert geom.w_pd


def test_geometry_singular_component():
    c = GaussianComponent(0.5, [0.0], [[0.0]], require_pd=False)
    with pytest.raises(NumericError) as info:
        merge_geometry(c, GaussianComponent(0.5, [0.0], [[1.0]]), (0, 1))
    assert info.value.where == (0, 1)


def test_normalize():
    m = normalize(mixture((0.2, [0.0], [[1.0]]), (0.2, [1.0], [[1.0]])))
    np.testing.assert_array_equal(m.weights, [0.5, 0.5])


def test_normalize_sums_to_one(rng):
    for _ in range(20):
        m = normalize(GaussianMixture(
            random_component(rng, 1, rng.uniform(1e-3, 10.0))
            for _ in range(rng.integers(2, 30))))
        assert math.fsum(m.weights) == pytest.approx(1.0, abs=1e-15)


def test_normalize_keeps_normalized_weights():
    m = mixture((0.25, [0.0], [[1.0]]), (0.75, [1.0], [[1.0]]))
    np.testing.assert_array_equal(normalize(m).weights, m.weights)


def test_table1_printed_weights():
    raw = _fixtures.table1(normalized=False)
    assert len(raw) == 16
    assert raw.total_weight == pytest.approx(1.0, abs=1e-3)
    assert _fixtures.table1().total_weight == pytest.approx(1.0, abs=1e-15)


def test_json_round_trip(table3, tmp_path):
    path = str(tmp_path / 'table3.json')
    save_mixture(table3, path)
    loaded = load_mixture(path)
    assert mixture_to_dict(loaded) == mixture_to_dict(table3)
    with open(path) as f:
        assert json.load(f)['dim'] == 2


def test_json_resymmetrizes():
    m = mixture_from_dict({'dim': 2, 'components': [{
        'weight': 1.0, 'mean': [0.0, 0.0],
        'cov': [[1.0, 0.5], [0.5 + 1e-12, 1.0]]}]})
    assert m[0].cov[0, 1] == m[0].cov[1, 0]


@pytest.mark.parametrize('data', [
    {},
    {'dim': 1},
    {'dim': 1, 'components': [{'weight': 1.0, 'mean': [0.0]}]},
    {'dim': 2, 'components': [
        {'weight': 1.0, 'mean': [0.0], 'cov': [[1.0]]}]},
    {'dim': 2, 'components': [
        {'weight': 1.0, 'mean': [0.0, 0.0], 'cov': [[1.0, 0.5], [0.4, 1.0]]}]},
])
def test_json_rejects_malformed(data):
    with pytest.raises(ValueError):
        mixture_from_dict(data)
