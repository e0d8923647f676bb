# coding=utf-8
import numpy as np
import pytest

from pygmreduce._errors import NumericError
from pygmreduce._util import linalg


def _lower():
    return linalg.cholesky(np.array([[4.0, 1.0], [1.0, 2.0]]))


def test_mahalanobis_single_vector():
    diff = np.array([1.0, -2.0])
    value = linalg.mahalanobis(_lower(), diff)
    assert isinstance(value, float)
    expected = diff.dot(np.linalg.solve([[4.0, 1.0], [1.0, 2.0]], diff))
    assert value == pytest.approx(expected, rel=1e-12)


def test_mahalanobis_single_vector_1d():
    value = linalg.mahalanobis(linalg.cholesky(np.array([[4.0]])), [3.0])
    assert isinstance(value, float)
    assert value == pytest.approx(2.25, rel=1e-12)


def test_mahalanobis_rows():
    rows = np.array([[1.0, -2.0], [0.0, 0.0], [0.5, 3.0]])
    values = linalg.mahalanobis(_lower(), rows)
    assert values.shape == (3,)
    for row, value in zip(rows, values):
        assert value == pytest.approx(
            linalg.mahalanobis(_lower(), row), rel=1e-12, abs=1e-15)


def test_cholesky_rejects_indefinite():
    with pytest.raises(NumericError):
        linalg.cholesky(np.array([[1.0, 2.0], [2.0, 1.0]]))
