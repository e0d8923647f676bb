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
from ._info import __author__, __version__

from ._base import Criterion, CriterionKind, EXCLUDED
from ._criteria import CRITERIA, criterion_for, score_pair
from ._errors import (
    ConvergenceError, NumericError, ReductionStuck, UnboundedRatio)
from ._fit import FitResult, GlobalFitConfig, global_kl_fit
from ._gaussmix import (
    GaussianComponent, GaussianMixture, MergeGeometry, density, load_mixture,
    log_density, merge_geometry, mixture_from_dict, mixture_moments,
    mixture_to_dict, moment_preserving_merge, normalize, save_mixture)
from ._kitagawa import KitagawaWKL, kitagawa_wkl
from ._numkl import NumericKL
from ._pearson import (
    PearsonChi2, pearson_chi2, ratio_integral_cross, ratio_integral_self)
from ._quad import (
    QuadSpec, default_box, integrate, isd_numeric, kl_numeric,
    pearson_numeric)
from ._reduce import ReductionStep, ReductionTrace, reduce_step, reduce_to
from ._runnalls import RunnallsBound, runnalls_bound
from ._salmond import SalmondTrace, salmond_trace
from ._ssm import (
    FilterRun, LinearStateSpaceModel, default_prior, filter_step,
    load_model, load_series, predict_step, run_filter, run_smoother,
    save_model, save_run, save_series, trend_model)
from ._williams import WilliamsISD, williams_isd
