"""Argument helpers shared by the qstringlab commands."""

from clldutils.clilib import PathType

from qstringlab.bench import PROBLEMS
from qstringlab.compare import BACKEND_NAMES
from qstringlab.oracle import DISTRIBUTIONS, load_table

PARAM_KEYS = (
    'problem', 'n', 'm', 'k', 'd', 'distribution', 'backend', 'seed',
    'boost_base', 'growth', 'cutoff')


def add_run_arguments(parser):
    """Add the experiment parameters.

    Every flag defaults to `None` so presets and schema defaults can fill in
    what the user left out.
    """
    parser.add_argument('--problem', choices=sorted(PROBLEMS), default=None)
    parser.add_argument('--n', type=int, default=None, help='number of strings')
    parser.add_argument('--m', type=int, default=None, help='number of requests')
    parser.add_argument('--k', type=int, default=None, help='string length')
    parser.add_argument(
        '--alphabet', dest='d', type=int, default=None, help='alphabet size')
    parser.add_argument(
        '--distribution', choices=DISTRIBUTIONS, default=None,
        help='how generated strings are drawn')
    parser.add_argument(
        '--backend', choices=BACKEND_NAMES, default=None,
        help='comparator backend (default: closed-form)')
    parser.add_argument('--seed', type=int, default=None)
    parser.add_argument(
        '--boost-base', type=int, default=None,
        help='boost base B; the comparator repeats 3*ceil(log2 B)+1 times')
    parser.add_argument(
        '--growth', type=float, default=None,
        help='growth factor of the unknown-count search schedule')
    parser.add_argument(
        '--cutoff', type=float, default=None,
        help='iteration budget of one search, in units of sqrt(N); at least 1')


def add_input_arguments(parser):
    parser.add_argument(
        '--input', type=PathType(type='file'), default=None,
        help='UTF-8 text file, one string per line')
    parser.add_argument(
        '--requests', type=PathType(type='file'), default=None,
        help='request strings for the intersection problems')


def params_from_args(args, base=None):
    params = dict(base or {})
    for key in PARAM_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return params


def table_from_args(args):
    if args.input is None:
        return None
    return load_table(args.input, requests=args.requests)
