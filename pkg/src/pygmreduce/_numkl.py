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

from . import _base
from ._gaussmix import moment_preserving_merge
from ._quad import QuadSpec, kl_numeric


class NumericKL(_base.Criterion):
    """Scores a pair by the numerically integrated KL divergence of the
    reference mixture from the mixture with the pair merged.
    """
    KIND = _base.CriterionKind.NUMERIC_KL
    CACHEABLE = False
    NEEDS_REFERENCE = True

    def __init__(self, *args, **kwargs):
        super(NumericKL, self).__init__(*args, **kwargs)
        self._target = None
        self._spec = None

    def _prepare(self, mixture):
        self._target = (
            mixture if self._reference is None else self._reference)
        self._spec = self._quad
        if self._spec is None:
            self._spec = QuadSpec.for_mixture(
                self._target, self._options.get('box_k', 10.0))

    def _score(self, mixture, j, k):
        if self._target is None:
            raise RuntimeError('prepare must be called before score')
        reduced = mixture.replace_pair(
            j, k, moment_preserving_merge(mixture[j], mixture[k]))
        return kl_numeric(self._target, reduced, self._spec)
