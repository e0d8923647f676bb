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
The ``pygmreduce`` command line.

Every subcommand reads and writes the JSON and CSV formats of the library;
``-`` or an omitted output path writes to standard output.

Exit codes are ``0`` on success, ``2`` for bad arguments or input files,
``3`` for numeric failures and ``4`` when a reduction gets stuck or a
quadrature does not converge.
"""

import argparse
import contextlib
import csv
import json
import logging
import os
import sys

import numpy as np

from . import _fixtures
from ._base import CriterionKind
from ._errors import ConvergenceError, NumericError, ReductionStuck
from ._fit import GlobalFitConfig, global_kl_fit
from ._gaussmix import (
    density, load_mixture, mixture_to_dict, normalize, save_mixture)
from ._info import __version__
from ._quad import QuadSpec, default_box, kl_numeric
from ._reduce import reduce_to
from ._ssm import (
    TREND_PARAMETERS, default_prior, load_model, load_series, run_filter,
    run_smoother, save_model, save_series, trend_model)
from ._util import serialized_output

_log = logging.getLogger(__name__)

#: Criteria compared by default; numeric KL is opt-in since it integrates
#: for every pair.
DEFAULT_CRITERIA = (
    CriterionKind.PEARSON_CHI2, CriterionKind.KITAGAWA_WKL,
    CriterionKind.RUNNALLS_BOUND, CriterionKind.SALMOND_TRACE,
    CriterionKind.WILLIAMS_ISD)

#: Grid points per axis by dimension.
DEFAULT_POINTS = {1: 401, 2: 201}

EXIT_OK = 0
EXIT_ARGUMENTS = 2
EXIT_NUMERIC = 3
EXIT_STUCK = 4


class GridSpec(object):
    """A rectangular evaluation grid.

    :param lo: The lower corner.

    :param hi: The upper corner.

    :param int points: The number of points per axis, including both ends.
        If not specified, :data:`DEFAULT_POINTS` is used.

    :raises ValueError: if the grid is not 1- or 2-dimensional, or empty
    """
    def __init__(self, lo, hi, points=None):
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError('grid corners do not match')
        if lo.size not in DEFAULT_POINTS:
            raise ValueError(
                'unsupported dimension %d; grids are 1- or 2-dimensional' % (
                    lo.size,))
        if not np.all(lo < hi):
            raise ValueError('lower grid corner must be below upper corner')
        points = DEFAULT_POINTS[lo.size] if points is None else int(points)
        if points < 2:
            raise ValueError('a grid needs at least 2 points per axis')
        self.lo = lo
        self.hi = hi
        self.points = points

    @property
    def dim(self):
        return self.lo.size

    def axes(self):
        """The coordinates along every axis.
        """
        return [
            np.linspace(a, b, self.points) for a, b in zip(self.lo, self.hi)]

    def nodes(self):
        """All grid points in row-major order as an ``(n, dim)`` array.
        """
        mesh = np.meshgrid(*self.axes(), indexing='ij')
        return np.column_stack([a.ravel() for a in mesh])


def _add_global_options(parser, suppress=False):
    """Adds the options shared by all subcommands.

    Subcommands suppress the defaults so that a value given before the
    subcommand name is not overwritten.
    """
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        '--seed', type=int, default=default(None),
        help='seed of the level-shift noise and of the fit restarts')
    parser.add_argument(
        '--quad-tol', type=float, default=default(1e-9),
        help='relative tolerance of the 1-dimensional quadrature')
    parser.add_argument(
        '--quad-nodes', type=int, default=default(400),
        help='Gauss-Legendre nodes per axis of the 2-dimensional quadrature')
    parser.add_argument(
        '--quad-box-k', type=float, default=default(10.0),
        help='half-width of the integration box in standard deviations')
    parser.add_argument(
        '--threads', type=int, default=default(1),
        help='number of worker threads')
    parser.add_argument(
        '-v', '--verbose', action='count', default=default(0),
        help='log more; repeat for debug output')


def _criterion(value):
    try:
        return CriterionKind.parse(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _criteria(value):
    return [_criterion(item.strip()) for item in value.split(',') if item]


def _orders(value):
    """Parses ``3``, ``1-15`` or ``1,2,4``.
    """
    orders = set()
    try:
        for item in value.split(','):
            lo, _, hi = item.partition('-')
            orders.update(range(int(lo), int(hi or lo) + 1))
    except ValueError:
        raise argparse.ArgumentTypeError('invalid order list %r' % value)
    return sorted(orders)


def _vector(value):
    try:
        return [float(item) for item in value.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError('invalid vector %r' % value)


def _parser():
    parser = argparse.ArgumentParser(
        prog='pygmreduce',
        description='Gaussian mixture reduction and Gaussian-sum filtering.')
    parser.add_argument(
        '--version', action='version',
        version='%(prog)s ' + '.'.join(str(v) for v in __version__))
    _add_global_options(parser)
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    def command(name, help):
        sub = commands.add_parser(name, help=help, description=help)
        _add_global_options(sub, suppress=True)
        return sub

    sub = command('fixtures', 'write the benchmark mixtures and series')
    sub.add_argument('--out', default='.', help='output directory')
    sub.add_argument(
        '--length', type=int, default=400,
        help='length of the level-shift series')

    sub = command('reduce', 'reduce a mixture to a given order')
    sub.add_argument('--in', dest='input', required=True,
                     help='mixture JSON file')
    sub.add_argument('--to', dest='order', type=int, required=True,
                     help='target order')
    sub.add_argument('--criterion', type=_criterion,
                     default=CriterionKind.PEARSON_CHI2,
                     help='pair criterion (default: pearson)')
    sub.add_argument('--track-kl', action='store_true',
                     help='record the KL divergence at every order')
    sub.add_argument('--out', help='reduced mixture JSON file')
    sub.add_argument('--trace', help='reduction trace JSON file')

    sub = command('compare', 'tabulate KL divergence by order and criterion')
    sub.add_argument('--in', dest='input', required=True,
                     help='mixture JSON file')
    sub.add_argument('--criteria', type=_criteria,
                     default=list(DEFAULT_CRITERIA),
                     help='comma separated criteria')
    sub.add_argument('--orders', type=_orders,
                     help='orders such as 1-15 (default: all below the '
                          'mixture order)')
    sub.add_argument('--optimal', action='store_true',
                     help='add a column of global KL fits')
    sub.add_argument('--restarts', type=int, default=3,
                     help='restarts of every global fit')
    sub.add_argument('--out', help='CSV file')

    sub = command('eval-grid', 'evaluate densities on a grid')
    sub.add_argument('--in', dest='input', required=True,
                     help='mixture JSON file')
    sub.add_argument('--compare', help='second mixture JSON file')
    sub.add_argument('--lo', type=_vector,
                     help='lower corner, comma separated; write --lo=-1,-2 '
                          'for negative values (default: the integration box)')
    sub.add_argument('--hi', type=_vector,
                     help='upper corner (default: the integration box)')
    sub.add_argument('--points', type=int, help='points per axis')
    sub.add_argument('--out', help='CSV file')

    for name, help in (
            ('filter', 'run the Gaussian-sum filter'),
            ('smooth', 'run the Gaussian-sum filter and smoother')):
        sub = command(name, help)
        sub.add_argument('--model', required=True, help='model JSON file')
        sub.add_argument('--data', required=True, help='observation CSV file')
        sub.add_argument('--cap', type=int, default=16,
                         help='maximum posterior order')
        sub.add_argument('--criterion', type=_criterion,
                         default=CriterionKind.PEARSON_CHI2,
                         help='pair criterion (default: pearson)')
        sub.add_argument('--cap-after-predict', action='store_true',
                         help='also reduce the predicted densities')
        sub.add_argument('--prior-var', type=float,
                         help='variance of the diffuse prior')
        sub.add_argument('--out', help='run JSON file')

    return parser


@contextlib.contextmanager
def _output(path):
    """Yields a text file for ``path`` or standard output.
    """
    if path in (None, '-'):
        yield sys.stdout
        sys.stdout.flush()
    else:
        with serialized_output(path) as f:
            yield f


def _write_json(data, path):
    with _output(path) as f:
        json.dump(data, f, indent=1)
        f.write('\n')


def _format(value):
    return '' if value is None else '%.9g' % value


def _quad(args, m):
    """The integration domain of ``m`` configured by the global options.
    """
    return QuadSpec.for_mixture(
        m, args.quad_box_k, rel_tol=args.quad_tol,
        nodes_per_axis=args.quad_nodes)


def _load(path):
    """Loads a mixture as given and normalized.
    """
    m = load_mixture(path)
    return m, normalize(m)


def cmd_fixtures(args):
    """Writes ``table1.json``, ``table3.json``, ``levelshift.csv`` and
    ``trend_model.json`` to the output directory.
    """
    if not os.path.isdir(args.out):
        os.makedirs(args.out)
    seed = _fixtures.LEVEL_SHIFT_SEED if args.seed is None else args.seed
    save_mixture(
        _fixtures.table1(normalized=False),
        os.path.join(args.out, 'table1.json'))
    save_mixture(
        _fixtures.table3(normalized=False),
        os.path.join(args.out, 'table3.json'))
    save_series(
        _fixtures.level_shift_series(args.length, seed),
        os.path.join(args.out, 'levelshift.csv'), header=['y'])
    save_model(
        trend_model(**TREND_PARAMETERS),
        os.path.join(args.out, 'trend_model.json'))
    _log.info('wrote fixtures to %s', args.out)
    return EXIT_OK


def cmd_reduce(args):
    """Reduces a mixture and writes the result and optionally the trace.

    If the target is the order of the input, the input is written unchanged.
    """
    given, m = _load(args.input)
    quad = _quad(args, m) if m.dim <= 2 else None
    try:
        trace = reduce_to(
            m, args.order, args.criterion, track_kl=args.track_kl,
            quad=quad, threads=args.threads)
    except ReductionStuck as e:
        if args.trace and e.trace is not None:
            _write_json(e.trace.to_dict(), args.trace)
        raise

    if args.trace:
        _write_json(trace.to_dict(), args.trace)
    if args.track_kl and trace.steps:
        _log.info('KL divergence at order %d: %.9g',
                  args.order, trace.steps[-1].kl_to_true)
    _write_json(
        mixture_to_dict(trace.final_mixture if trace.steps else given),
        args.out)
    return EXIT_OK


def _criterion_column(m, kind, orders, quad, threads):
    """The KL divergence at every order of one greedy path.
    """
    try:
        trace = reduce_to(
            m, min(orders), kind, track_kl=True, quad=quad, threads=threads)
    except ReductionStuck as e:
        _log.warning('%s got stuck; leaving lower orders empty', kind.value)
        trace = e.trace
    kl = {len(m): 0.0}
    for step in trace.steps:
        kl[step.order_before - 1] = step.kl_to_true
    return [kl.get(order) for order in orders]


def cmd_compare(args):
    """Writes a CSV table with one row per order and one column per
    criterion, holding the KL divergence of the original from the reduced
    mixture.
    """
    _, m = _load(args.input)
    orders = args.orders or list(range(1, len(m)))
    if not orders or orders[0] < 1 or orders[-1] > len(m):
        raise ValueError('orders must lie in [1, %d]' % len(m))
    quad = _quad(args, m)

    header = ['order'] + [kind.value for kind in args.criteria]
    columns = [
        _criterion_column(m, kind, orders, quad, args.threads)
        for kind in args.criteria]
    if args.optimal:
        header.append('optimal')
        config = GlobalFitConfig(
            restarts=args.restarts, quad=quad, seed=args.seed or 0,
            threads=args.threads)
        columns.append([
            global_kl_fit(m, order, config).kl for order in orders])

    with _output(args.out) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for i, order in enumerate(orders):
            writer.writerow(
                [order] + [_format(column[i]) for column in columns])
    return EXIT_OK


def cmd_eval_grid(args):
    """Writes the density of a mixture, and optionally of a second one, at
    every point of a grid.
    """
    _, m = _load(args.input)
    if m.dim not in DEFAULT_POINTS:
        raise ValueError(
            'unsupported dimension %d; grids are 1- or 2-dimensional' % m.dim)
    other = None
    if args.compare:
        other = _load(args.compare)[1]
        if other.dim != m.dim:
            raise ValueError('compared mixture has dimension %d, not %d' % (
                other.dim, m.dim))
    lo, hi = default_box(m, args.quad_box_k)
    grid = GridSpec(
        lo if args.lo is None else args.lo,
        hi if args.hi is None else args.hi, args.points)
    if grid.dim != m.dim:
        raise ValueError('grid dimension %d does not match %d' % (
            grid.dim, m.dim))

    nodes = grid.nodes()
    columns = [density(m, nodes)]
    header = ['x', 'y'][:m.dim] + ['density']
    if other is not None:
        columns.append(density(other, nodes))
        header.append('compare')
    with _output(args.out) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in np.column_stack([nodes] + columns):
            writer.writerow([_format(v) for v in row])
    return EXIT_OK


def _run(args, smooth):
    model = load_model(args.model)
    ys = load_series(args.data)
    prior = None
    if args.prior_var is not None:
        if not args.prior_var > 0:
            raise ValueError('prior variance must be positive')
        prior = default_prior(model, args.prior_var)
    run = run_filter(
        model, ys, prior, args.cap, args.criterion,
        cap_after_predict=args.cap_after_predict, threads=args.threads)
    if smooth:
        run = run_smoother(run, model)
    _write_json(run.to_dict(), args.out)
    if args.out not in (None, '-'):
        print('log-likelihood: %.9g' % run.log_likelihood)
    return EXIT_OK


def cmd_filter(args):
    """Runs the filter and writes the run.
    """
    return _run(args, False)


def cmd_smooth(args):
    """Runs the filter and smoother and writes the run.
    """
    return _run(args, True)


COMMANDS = {
    'fixtures': cmd_fixtures,
    'reduce': cmd_reduce,
    'compare': cmd_compare,
    'eval-grid': cmd_eval_grid,
    'filter': cmd_filter,
    'smooth': cmd_smooth}


def _fail(command, code, error):
    """Reports an error; must be called while it is being handled.
    """
    _log.debug('%s failed', command, exc_info=True)
    sys.stderr.write('pygmreduce: error: %s\n' % error)
    return code


def main(argv=None):
    """Runs the command line.

    :param list argv: The arguments; if not specified, ``sys.argv[1:]`` is
        used.

    :return: the exit code
    """
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    logging.basicConfig(
        level={0: logging.WARNING, 1: logging.INFO}.get(
            args.verbose, logging.DEBUG),
        format='%(levelname)s %(name)s: %(message)s')
    if args.threads < 1:
        parser.print_usage(sys.stderr)
        sys.stderr.write('pygmreduce: error: --threads must be positive\n')
        return EXIT_ARGUMENTS

    try:
        return COMMANDS[args.command](args)
    except (ValueError, EnvironmentError) as e:
        return _fail(args.command, EXIT_ARGUMENTS, e)
    except NumericError as e:
        return _fail(args.command, EXIT_NUMERIC, e)
    except (ReductionStuck, ConvergenceError) as e:
        return _fail(args.command, EXIT_STUCK, e)
