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
Benchmark mixtures and the synthetic level-shift series.

The weights are stored as printed; the 1-dimensional ones sum to ``0.9999``.
"""

import numpy as np

from ._gaussmix import GaussianComponent, GaussianMixture, normalize

#: The 16-component 1-dimensional benchmark as ``(weight, mean, variance)``.
TABLE1 = (
    (0.30, 0.0, 0.5),
    (0.15, 5.0, 1.0),
    (0.15, -4.0, 1.0),
    (0.05, 0.2, 9.0),
    (0.05, -1.5, 2.0),
    (0.0686, 1.03982, 4.39842),
    (0.03472, -1.55209, 3.78821),
    (0.07578, -1.35090, 2.78963),
    (0.00101, -0.25711, 1.18460),
    (0.00011, 2.00426, 1.14186),
    (0.01699, 1.44357, 1.00000),
    (0.00003, -2.15010, 1.02979),
    (0.05787, -0.58808, 1.21395),
    (0.00039, 1.57966, 1.35196),
    (0.02193, 1.87170, 1.12458),
    (0.02257, 0.55285, 1.05299),
)

#: The 10-component 2-dimensional benchmark as
#: ``(weight, mu1, mu2, s11, s22, s21)``.
TABLE3 = (
    (0.30, 0, 0, 1, 1, 0),
    (0.20, 2, 0, 4, 2, 0),
    (0.16, 3, 3, 2, 2, -0.5),
    (0.11, -4, -4, 4, 4, 2),
    (0.08, -1, 1, 9, 9, 4.0),
    (0.06, 2, -4, 4, 9, 2),
    (0.04, 0, 2, 4, 1, -0.5),
    (0.03, -2, 4, 9, 9, 0),
    (0.01, -2, 0, 2, 1, 0),
    (0.01, 1, -2, 1, 1, 0),
)

#: The seed of :func:`level_shift_series`.
LEVEL_SHIFT_SEED = 1987

#: ``(start, level)`` of every segment of the level-shift series.
LEVEL_SHIFTS = ((0, 0.0), (130, 4.0), (270, 1.5))


def table1(normalized=True):
    """The 1-dimensional benchmark mixture.

    :param bool normalized: Whether to rescale the printed weights.
    """
    m = GaussianMixture(
        GaussianComponent(w, [mu], [[var]]) for w, mu, var in TABLE1)
    return normalize(m) if normalized else m


def table3(normalized=True):
    """The 2-dimensional benchmark mixture.

    :param bool normalized: Whether to rescale the printed weights.
    """
    m = GaussianMixture(
        GaussianComponent(w, [m1, m2], [[s11, s21], [s21, s22]])
        for w, m1, m2, s11, s22, s21 in TABLE3)
    return normalize(m) if normalized else m


def level_shift_levels(length=400):
    """The noise-free piecewise-constant level.
    """
    levels = np.empty(length)
    for (start, level), (end, _) in zip(
            LEVEL_SHIFTS, LEVEL_SHIFTS[1:] + ((length, None),)):
        levels[start:end] = level
    return levels


def level_shift_series(length=400, seed=LEVEL_SHIFT_SEED):
    """A level with two shifts observed in unit Gaussian noise.

    :param int length: The number of observations.

    :param int seed: The seed of the noise.

    :return: an array of ``length`` values
    """
    rng = np.random.default_rng(seed)
    return level_shift_levels(length) + rng.standard_normal(length)
