#!/usr/bin/env python3

"""
Command line front end for the essential spectrum toolkit.

Usage:
spectrumCLI.py classify --a=-1 --b=-1 --n=3 --p=all --sphere
spectrumCLI.py reduce   --a=-1 --b=-1 --n=3 --p=0 --lambda=1 --type=1
spectrumCLI.py solve    --a=-2 --b=-1 --n=3 --p=0 --lambda=2 --type=1 --L-max=40
spectrumCLI.py verify   --a=-1 --b=-1 --n=3 --p=0 --lambda=0,2,6 --jobs=4

Every flag can also be given in a key=value configuration file passed with
--config; flags on the command line win over the file.  Exit codes: 0 for
success, 1 for usage errors, 2 when a verification row fails and 3 when no
row fails but at least one sweep is inconclusive.
"""

import os
import sys
import csv
import json
import argparse
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor

from lsl.misc import parser as aph

import classifier
from symbolic_warp import exact
from spectral_model import (WarpedMetric, DegreePair, BoundaryData, sphere_boundary, format_value)
from reduction import build_type1, build_type2, build_type3
from sl_numerics import (Grid, choose_grid, evaluate, discretize, discretize_coupled,
                         lowest_eigenvalues, EssBottomPolicy, ess_bottom, discreteness_test,
                         LIMINF, TRUNCATION, CONVERGED, EMPTY, INCONCLUSIVE)

__version__ = '0.1'

#: Version of the JSON documents written with --json
SCHEMA = 1

PASS, FAIL, UNSETTLED = 'PASS', 'FAIL', 'INCONCLUSIVE'

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3

_TYPE_NAMES = {1: 'I', 2: 'II', 3: 'III'}


def pid_print(*args, **kwds):
    kwds.setdefault('file', sys.stderr)
    print(f"[{os.getpid()}]", *args, **kwds)


def number(text):
    """Exact rational from a decimal or p/q string."""

    try:
        return exact(str(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"'{text}' is not a number")


def int_list(text):
    """
    Comma separated integers, with 'start~stop' ranges, as a list.  An empty
    string is the empty list.
    """

    values = aph.csv_int_list(str(text).strip())
    if values == 'none':
        return []
    if values == 'all':
        raise argparse.ArgumentTypeError(f"'{text}' is not a list of integers")
    return values


def csv_number_list(text):
    return [number(value) for value in str(text).split(',') if value.strip() != '']


def eigenvalue_map(text):
    """Parse 'q:l1,l2,...;q:...' into {q: [l1, l2, ...]}."""

    lists = {}
    for chunk in str(text).split(';'):
        if not chunk.strip():
            continue
        try:
            degree, values = chunk.split(':', 1)
            lists[int(degree)] = csv_number_list(values)
        except ValueError:
            raise argparse.ArgumentTypeError(f"'{chunk}' is not of the form q:l1,l2,...")
    return lists


def type_list(text):
    text = str(text).strip().lower()
    if text == 'all':
        return [1, 2, 3]
    names = {'1': 1, 'i': 1, '2': 2, 'ii': 2, '3': 3, 'iii': 3}
    kinds = []
    for value in text.split(','):
        value = value.strip()
        if value not in names:
            raise argparse.ArgumentTypeError(f"unknown operator type '{value}'")
        kinds.append(names[value])
    return sorted(set(kinds))


def boolean(text):
    text = str(text).strip().lower()
    if text in ('1', 'yes', 'true', 'on'):
        return True
    if text in ('0', 'no', 'false', 'off'):
        return False
    raise argparse.ArgumentTypeError(f"'{text}' is not a boolean")


#: Configuration keys, their converters and built-in defaults
_SETTINGS = {'a': (number, None),
             'b': (number, None),
             'c': (number, Fraction(1)),
             'n': (aph.positive_int, None),
             'p': (str, 'all'),
             'lambda': (csv_number_list, None),
             'sphere': (boolean, False),
             'betti': (int_list, None),
             'eigenvalues': (eigenvalue_map, None),
             'type': (type_list, [1, 2, 3]),
             'form': (str, 'closed'),
             'grid_points': (aph.positive_int, None),
             'l_max': (aph.positive_float, None),
             'k': (aph.positive_int, 5),
             'tol': (aph.positive_float, 5e-3),
             'jobs': (aph.positive_int, 1),
             'preset': (str, None),
             'out': (str, None),
             'json': (boolean, False),
             'verbose': (boolean, False)}


def load_config(filename):
    """
    Read a key=value configuration file.  Lines starting with '#' and lines
    shorter than three characters are skipped.
    """

    config = {}
    with open(filename, 'r', encoding='utf-8') as fh:
        lines = fh.readlines()

    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if len(line) < 3:
            continue
        if line[0] == '#':
            continue
        if '=' not in line:
            raise ValueError(f"{filename}:{lineno}: expected 'key = value'")
        key, value = line.split('=', 1)
        key = key.strip().lstrip('-').lower().replace('-', '_')
        if key not in _SETTINGS:
            raise ValueError(f"{filename}:{lineno}: unknown setting '{key}'")
        converter, _ = _SETTINGS[key]
        try:
            config[key] = converter(value.strip())
        except (argparse.ArgumentTypeError, ValueError) as error:
            raise ValueError(f"{filename}:{lineno}: {error}")
    return config


def resolve_settings(args):
    """Merge command line flags, the configuration file and the defaults."""

    config = {}
    if getattr(args, 'config', None) is not None:
        config = load_config(args.config)
    settings = {'command': args.command}
    for key, (_, default) in _SETTINGS.items():
        value = getattr(args, key if key != 'lambda' else 'lam', None)
        if value is None or value is False:
            value = config.get(key, default if value is None else value)
        settings[key] = value
    return settings


def _metric(settings, a=None, b=None):
    a = settings['a'] if a is None else a
    b = settings['b'] if b is None else b
    if a is None or b is None:
        raise ValueError("both --a and --b are required")
    return WarpedMetric(a, b, settings['c'])


def _degrees(settings, n=None):
    n = settings['n'] if n is None else n
    if n is None:
        raise ValueError("--n is required")
    text = str(settings['p']).strip().lower()
    if text == 'all':
        values = list(range(n + 1))
    else:
        try:
            values = int_list(text)
        except argparse.ArgumentTypeError as error:
            raise ValueError(str(error))
    return [DegreePair(n, p) for p in values]


def _boundary(settings, n):
    if settings['sphere']:
        return sphere_boundary(n)
    if settings['betti'] is None:
        raise ValueError("boundary data needed: pass --sphere or --betti (and --eigenvalues when b = 0)")
    return BoundaryData(n, tuple(settings['betti']), settings['eigenvalues'])


def _explicit(settings, degrees):
    """True when a single degree and a subset of the types were asked for."""

    return len(degrees) == 1 and settings['type'] != [1, 2, 3]


def _kinds_for(deg, kinds, lam, strict):
    """Operator types that exist for this degree and eigenvalue."""

    exists = {1: deg.has_type1, 2: deg.has_type2, 3: deg.has_type3 and lam > 0}
    if strict:
        for kind in kinds:
            if not exists[kind]:
                if kind == 3 and lam == 0:
                    raise ValueError("type III needs a nonzero boundary eigenvalue: the coupled basis "
                                     "is normalized by 1/sqrt(lambda)")
                raise ValueError(f"type {_TYPE_NAMES[kind]} does not occur in degree p = {deg.p}")
    return [kind for kind in kinds if exists[kind]]


def _build(metric, deg, kind, lam, form='closed'):
    builder = {1: build_type1, 2: build_type2, 3: build_type3}[kind]
    return builder(metric, deg, lam, form=form)


def cmd_classify(settings):
    metric = _metric(settings)
    degrees = _degrees(settings)
    boundary = _boundary(settings, degrees[0].n)

    results, lines = [], []
    for deg in degrees:
        if boundary.is_sphere:
            description, branch = classifier.explain_rotsym(metric, deg, boundary)
        else:
            description, branch = classifier.explain_general(metric, deg, boundary)
        results.append({'p': deg.p, 'branch': branch, 'rule': classifier.BRANCHES[branch],
                        'spectrum': description.as_dict()})
        lines.append(f"p={deg.p}: {description}, {branch}")
        if settings['verbose']:
            pid_print(f"classified p={deg.p} with {branch}")

    document = {'metric': {'a': format_value(metric.a), 'b': format_value(metric.b),
                           'c': format_value(metric.c)},
                'n': degrees[0].n, 'sphere': boundary.is_sphere, 'results': results}
    return document, lines, EXIT_OK


def _series_path(path, name, count):
    if count == 1:
        return path
    root, ext = os.path.splitext(path)
    return f"{root}_{name}{ext or '.csv'}"


def cmd_reduce(settings):
    metric = _metric(settings)
    degrees = _degrees(settings)
    lambdas = settings['lambda'] if settings['lambda'] is not None else [Fraction(0)]

    results, lines, series = [], [], []
    for deg in degrees:
        for lam in lambdas:
            for kind in _kinds_for(deg, settings['type'], lam, strict=_explicit(settings, degrees)):
                op = _build(metric, deg, kind, lam, settings['form'])
                entry = {'p': deg.p, 'type': kind, 'lambda': format_value(lam), 'var': op.var,
                         'left': format_value(float(op.left))}
                if kind == 3:
                    parts = [('v1', op.v1.potential), ('v2', op.v2.potential), ('w', op.coupling.potential)]
                else:
                    parts = [('v', op.potential)]
                entry['potentials'] = {name: str(expr) for name, expr in parts}
                if not op.principal_weight.is_constant() or op.principal_weight.constant_term() != 1:
                    entry['principal_weight'] = str(op.principal_weight)
                results.append(entry)

                lines.append(f"p={deg.p} type {_TYPE_NAMES[kind]} lambda={format_value(lam)}:")
                lines.extend(f"  {line}" for line in str(op).split('\n'))
                for name, expr in parts:
                    series.append((f"p{deg.p}_type{kind}_lambda{format_value(lam)}_{name}".replace('/', 'o'),
                                   op, expr))

    if settings['out'] is not None and series:
        for name, op, expr in series:
            right = settings['l_max'] if settings['l_max'] is not None else float(op.left) + 10.0
            grid = Grid(op.left, right, settings['grid_points'] or 200)
            values = evaluate(expr, grid.nodes)
            with open(_series_path(settings['out'], name, len(series)), 'w', newline='') as fh:
                writer = csv.writer(fh)
                writer.writerow([op.var, 'value'])
                for x, y in zip(grid.nodes, values):
                    writer.writerow([repr(float(x)), repr(float(y))])

    return {'metric': {'a': format_value(metric.a), 'b': format_value(metric.b),
                       'c': format_value(metric.c)},
            'results': results}, lines, EXIT_OK


def cmd_solve(settings):
    metric = _metric(settings)
    degrees = _degrees(settings)
    lambdas = settings['lambda'] if settings['lambda'] is not None else [Fraction(0)]

    results, lines = [], []
    for deg in degrees:
        for lam in lambdas:
            for kind in _kinds_for(deg, settings['type'], lam, strict=_explicit(settings, degrees)):
                op = _build(metric, deg, kind, lam)
                right = settings['l_max'] if settings['l_max'] is not None else float(op.left) + 50.0
                if settings['grid_points'] is not None:
                    grid = Grid(op.left, right, settings['grid_points'])
                else:
                    grid = choose_grid(op, right)
                opm = discretize_coupled(op, grid) if kind == 3 else discretize(op, grid)
                values = lowest_eigenvalues(opm, min(settings['k'], opm.dimension))
                limit = ess_bottom(op, EssBottomPolicy(method=LIMINF))
                results.append({'p': deg.p, 'type': kind, 'lambda': format_value(lam),
                                'grid': {'left': repr(grid.left), 'right': repr(grid.right),
                                         'npoints': grid.npoints},
                                'eigenvalues': [repr(float(v)) for v in values],
                                'liminf': format_value(limit.value)})
                lines.append(f"p={deg.p} type {_TYPE_NAMES[kind]} lambda={format_value(lam)} "
                             f"on ({grid.left:.6g}, {grid.right:.6g}) with {grid.npoints} nodes:")
                lines.append("  lowest eigenvalues: " + ', '.join(f"{v:.8f}" for v in values))
                lines.append(f"  potential liminf: {format_value(limit.value)}")
    return {'results': results}, lines, EXIT_OK


def _preset_rows(settings):
    if settings['preset'] is None:
        metric = _metric(settings)
        degrees = _degrees(settings)
        lambdas = settings['lambda'] or []
        return [(metric, deg, lambdas) for deg in degrees]
    if settings['preset'] != 'full':
        raise ValueError(f"unknown verification preset '{settings['preset']}'")
    rows = []
    for a in (-1, -2):
        for b in (-1, 0, 1):
            metric = WarpedMetric(a, b, settings['c'])
            for deg in _degrees(dict(settings, p='all'), n=3):
                rows.append((metric, deg, [Fraction(0), Fraction(2), Fraction(6)]))
    return rows


def _policy(options, op):
    """
    Truncation policy: --L-max fixes the longest interval, --grid-points the
    node budget and the sweep must settle within half the verification
    tolerance.
    """

    policy = EssBottomPolicy(method=TRUNCATION)
    span, max_points = policy.span, policy.max_points
    if options['l_max'] is not None:
        span = (options['l_max'] - float(op.left))/2**(policy.levels - 1)
        if span <= 0:
            raise ValueError(f"--L-max {options['l_max']} does not exceed the left endpoint {float(op.left):.6g}")
    if options['grid_points'] is not None:
        max_points = options['grid_points']
    return EssBottomPolicy(method=TRUNCATION, span=span, max_points=max_points, tol=options['tol']/2)


def verify_row(row):
    """Compare the numerical bottom of one reduced operator with the closed form."""

    metric, deg, kind, lam, options = row
    op = _build(metric, deg, kind, lam)
    expected = classifier.operator_spectrum(metric, deg, kind, lam)
    numeric = ess_bottom(op, _policy(options, op))
    limit = ess_bottom(op, EssBottomPolicy(method=LIMINF))
    deviation = None
    if numeric.status == INCONCLUSIVE:
        verdict = UNSETTLED
    elif expected.empty or numeric.status == EMPTY:
        verdict = PASS if expected.empty and numeric.status == EMPTY else FAIL
    else:
        deviation = abs(float(numeric.value) - float(expected.ray_start))
        verdict = PASS if deviation <= options['tol'] else FAIL
    if options['verbose']:
        pid_print(f"{metric.describe()} p={deg.p} type {_TYPE_NAMES[kind]} lambda={lam}: {verdict}")

    entry = {'a': format_value(metric.a), 'b': format_value(metric.b), 'n': deg.n, 'p': deg.p,
             'type': kind, 'lambda': format_value(lam),
             'expected': expected.as_dict(),
             'numeric': {'value': format_value(float(numeric.value)), 'status': numeric.status,
                         'method': numeric.method, 'monotone': numeric.monotone,
                         'spread': None if numeric.spread is None else format_value(numeric.spread)},
             'liminf': format_value(limit.value),
             'deviation': None if deviation is None else format_value(deviation),
             'verdict': verdict}
    if kind != 3:
        entry['discrete'] = discreteness_test(op)
    return entry


def cmd_verify(settings):
    options = {key: settings[key] for key in ('l_max', 'grid_points', 'tol', 'verbose')}
    rows = []
    for metric, deg, lambdas in _preset_rows(settings):
        for lam in lambdas:
            for kind in _kinds_for(deg, settings['type'], lam, strict=False):
                rows.append((metric, deg, kind, lam, options))

    if settings['jobs'] > 1 and len(rows) > 1:
        with ProcessPoolExecutor(max_workers=settings['jobs']) as executor:
            entries = list(executor.map(verify_row, rows))
    else:
        entries = [verify_row(row) for row in rows]

    counts = {PASS: 0, FAIL: 0, UNSETTLED: 0}
    worst = 0.0
    lines = [f"{'a':>5} {'b':>5} {'n':>2} {'p':>2} {'type':>4} {'lambda':>7} {'expected':>26} "
             f"{'numeric':>14} {'deviation':>10}  verdict"]
    for entry in entries:
        counts[entry['verdict']] += 1
        if entry['deviation'] is not None:
            worst = max(worst, float(entry['deviation']))
        expected = 'empty' if entry['expected']['empty'] else f"[{entry['expected']['rays'][0]}, inf)"
        numeric = entry['numeric']['status'] if entry['numeric']['status'] != CONVERGED \
            else f"{float(entry['numeric']['value']):.6f}"
        deviation = '-' if entry['deviation'] is None else f"{float(entry['deviation']):.2e}"
        lines.append(f"{entry['a']:>5} {entry['b']:>5} {entry['n']:>2} {entry['p']:>2} "
                     f"{_TYPE_NAMES[entry['type']]:>4} {entry['lambda']:>7} {expected:>26} "
                     f"{numeric:>14} {deviation:>10}  {entry['verdict']}")
    lines.append(f"{len(entries)} rows: {counts[PASS]} PASS, {counts[FAIL]} FAIL, "
                 f"{counts[UNSETTLED]} INCONCLUSIVE; worst deviation {worst:.3e} "
                 f"(tolerance {settings['tol']:g})")

    if counts[FAIL]:
        code = EXIT_FAIL
    elif counts[UNSETTLED]:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK
    summary = {'rows': len(entries), 'pass': counts[PASS], 'fail': counts[FAIL],
               'inconclusive': counts[UNSETTLED], 'worst_deviation': format_value(worst),
               'tolerance': format_value(settings['tol'])}
    return {'rows': entries, 'summary': summary}, lines, code


_COMMANDS = {'classify': cmd_classify, 'reduce': cmd_reduce, 'solve': cmd_solve, 'verify': cmd_verify}


def main(args):
    try:
        settings = resolve_settings(args)
        document, lines, code = _COMMANDS[settings['command']](settings)
    except (ValueError, OverflowError, OSError) as error:
        print(f"ERROR: {error}", file=sys.stderr)
        return EXIT_USAGE

    document = dict(document, schema=SCHEMA, command=settings['command'], version=__version__)
    if settings['json']:
        text = json.dumps(document, indent=2, sort_keys=True)
    else:
        text = '\n'.join(lines)

    if settings['out'] is not None and settings['command'] != 'reduce':
        try:
            with open(settings['out'], 'w', encoding='utf-8') as fh:
                fh.write(text + '\n')
        except OSError as error:
            print(f"ERROR: {error}", file=sys.stderr)
            return EXIT_USAGE
    else:
        print(text)
    return code


class _Parser(argparse.ArgumentParser):
    """Argument parser reporting usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"ERROR: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str,
                        help='key=value configuration file; command line flags win')
    common.add_argument('--a', type=number,
                        help='exponent a of f = exp(-2(a+1)t), a <= -1')
    common.add_argument('--b', type=number,
                        help='exponent b of g = exp(-2bt)')
    common.add_argument('--c', type=number,
                        help='left endpoint of the end [default: 1]')
    common.add_argument('--n', type=aph.positive_int,
                        help='dimension of the manifold')
    common.add_argument('--p', type=str,
                        help="form degree: an integer, a comma separated list with start~stop ranges "
                             "or 'all' [default: all]")
    common.add_argument('--lambda', dest='lam', type=csv_number_list,
                        help='comma separated boundary eigenvalues')
    common.add_argument('--sphere', action='store_true',
                        help='cross section is the round sphere S^(n-1)')
    common.add_argument('--betti', type=int_list,
                        help='comma separated Betti numbers b_0..b_(n-1) of the cross section')
    common.add_argument('--eigenvalues', type=eigenvalue_map,
                        help="coclosed boundary eigenvalues as 'q:l1,l2;q:...'")
    common.add_argument('--type', type=type_list,
                        help="operator types: 1, 2, 3, a comma separated list or 'all' [default: all]")
    common.add_argument('--form', type=str, choices=['closed', 'bracket', 'r-bracket'],
                        help='potential form for reduce [default: closed]')
    common.add_argument('--grid-points', dest='grid_points', type=aph.positive_int,
                        help='number of interior grid nodes')
    common.add_argument('--L-max', dest='l_max', type=aph.positive_float,
                        help='right end of the truncated interval')
    common.add_argument('--k', type=aph.positive_int,
                        help='number of eigenvalues reported by solve [default: 5]')
    common.add_argument('--tol', type=aph.positive_float,
                        help='verification tolerance on ray starts [default: 5e-3]')
    common.add_argument('--jobs', type=aph.positive_int,
                        help='parallel verification workers [default: 1]')
    common.add_argument('--preset', type=str,
                        help="verification preset ('full' runs the sample matrix)")
    common.add_argument('--out', type=str,
                        help='output file (reduce: CSV series path)')
    common.add_argument('--json', action='store_true',
                        help='write a JSON document instead of text')
    common.add_argument('-v', '--verbose', action='store_true',
                        help='report progress on stderr')

    parser = _Parser(
        description='essential spectrum of the Hodge Laplacian on warped product ends',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
    subparsers = parser.add_subparsers(dest='command', parser_class=_Parser)
    subparsers.required = True
    for name, text in (('classify', 'closed-form essential spectrum per degree'),
                       ('reduce', 'print the reduced potentials and write sampled series'),
                       ('solve', 'lowest eigenvalues of a truncated reduced operator'),
                       ('verify', 'compare numerical spectrum bottoms with the closed forms')):
        subparsers.add_parser(name, parents=[common], help=text, description=text,
                              formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    return parser


if __name__ == "__main__":
    parser = build_parser()
    args = parser.parse_args()
    sys.exit(main(args))
