"""\
Sweep a problem over string length or string count and fit the scaling law.

Runs `--repeats` seeds per value, averages the total queries and fits a line
through (log value, log mean queries).  Presets from the package's
`etc/sweeps.csv` provide the defaults; explicit flags override them.
"""

import json

from qstringlab import bench
from qstringlab.cli_util import add_run_arguments, params_from_args
from qstringlab.util import worker_count


def register(parser):
    add_run_arguments(parser)
    parser.add_argument('--preset', default=None, help='name of a sweep preset')
    parser.add_argument('--vary', choices=bench.SWEEP_VARIABLES, default=None)
    parser.add_argument(
        '--values', default=None,
        help='comma-separated values of the swept variable')
    parser.add_argument('--repeats', type=int, default=None)
    parser.add_argument('--csv', default=None, help='write raw points to this file')
    parser.add_argument(
        '--workers', type=int, default=None,
        help='worker processes (default: $QSTRINGLAB_WORKERS or 1)')
    parser.add_argument('--json', action='store_true', help='print the fit as JSON')


def sweep(args):
    base, vary, values, repeats = {}, None, None, bench.DEFAULT_REPEATS
    if args.preset:
        presets = bench.load_presets()
        if args.preset not in presets:
            raise bench.UsageError(
                'unknown preset {!r}; known: {}'.format(
                    args.preset, ', '.join(sorted(presets))))
        preset = presets[args.preset]
        base = {
            'problem': preset['problem'],
            'backend': preset['backend'],
            'n': preset['n'],
            'm': preset['m'],
            'k': preset['k'],
            'd': preset['alphabet'],
            'distribution': preset['distribution'],
        }
        vary, values, repeats = preset['vary'], preset['values'], preset['repeats']
    params = params_from_args(args, {k: v for k, v in base.items() if v is not None})
    vary = args.vary or vary
    if args.values:
        try:
            values = [int(v) for v in args.values.split(',') if v.strip()]
        except ValueError:
            raise bench.UsageError(f'--values must be integers: {args.values!r}')
    repeats = args.repeats or repeats
    if not vary or not values:
        raise bench.UsageError('give --vary and --values, or a --preset')

    workers = args.workers or worker_count()
    result = bench.sweep(
        params, vary, values, repeats=repeats, workers=workers, log=args.log)
    if args.csv:
        bench.write_sweep_csv(args.csv, result.points)
        args.log.info('%d points written to %s', len(result.points), args.csv)

    correct = sum(point.correct for point in result.points)
    if args.json:
        print(json.dumps({
            'vary': result.fit.vary,
            'points': [list(point) for point in result.fit.points],
            'slope': result.fit.slope,
            'intercept': result.fit.intercept,
            'residual': result.fit.residual,
            'correct': correct,
            'runs': len(result.points),
        }, sort_keys=True))
    else:
        for value, mean in result.fit.points:
            print(f'{vary}={value}\tmean queries {mean:.1f}')
        print(f'slope {result.fit.slope:.4f}\tintercept {result.fit.intercept:.4f}'
              f'\tresidual {result.fit.residual:.4f}')
        print(f'correct {correct}/{len(result.points)}')


def run(args):
    sweep(args)
