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
Exceptions raised by the numerical parts of the package.

Argument errors are plain :class:`ValueError` instances.
"""


class NumericError(ArithmeticError):
    """A matrix that must be positive definite is not, or a covariance is
    singular.

    :param str message: A description of the failure.

    :param where: Where the failure happened, e.g. a pair of component
        indices or a time step.
    """
    def __init__(self, message, where=None):
        if where is not None:
            message = '%s (at %s)' % (message, where)
        super(NumericError, self).__init__(message)
        self.where = where


class UnboundedRatio(NumericError):
    """The ratio ``q(x) / p(x)`` of a pair and its merge is not integrable.

    Pair criteria translate this into an excluded pair.
    """


class ReductionStuck(RuntimeError):
    """Every remaining pair is excluded by the criterion.

    :param str criterion: The name of the criterion.

    :param trace: The partial :class:`~pygmreduce.ReductionTrace`, or
        ``None``.
    """
    def __init__(self, criterion, trace=None):
        super(ReductionStuck, self).__init__(
            'all pairs are excluded by criterion %s' % criterion)
        self.criterion = criterion
        self.trace = trace


class ConvergenceError(ArithmeticError):
    """Adaptive quadrature exhausted its depth before reaching tolerance.

    :param str message: A description of the failure.

    :param float estimate: The best estimate available.
    """
    def __init__(self, message, estimate):
        super(ConvergenceError, self).__init__(message)
        self.estimate = estimate
