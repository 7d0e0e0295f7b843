"""\
Run one experiment and print its report as JSON.

The report lists the answer, whether it matches the ground truth and the
queries charged per category.  Without `--input` the strings are generated
from `--n`, `--k`, `--alphabet`, `--distribution` and `--seed`.
"""

import json

from qstringlab import bench
from qstringlab.cli_util import (
    add_input_arguments, add_run_arguments, params_from_args, table_from_args)


def register(parser):
    add_run_arguments(parser)
    add_input_arguments(parser)
    parser.add_argument(
        '--output', default=None, help='write the report to this file')
    parser.add_argument(
        '--json', action='store_true', help='compact single-line JSON')
    parser.add_argument(
        '--no-time', action='store_true',
        help='leave out the wall time, so reports compare byte by byte')


def run(args):
    report = bench.run(params_from_args(args), table=table_from_args(args))
    data = bench.report_dict(report, with_time=not args.no_time)
    text = json.dumps(data, sort_keys=True, indent=None if args.json else 2)
    if args.output:
        with open(args.output, 'w', encoding='utf-8') as f:
            f.write(text)
            f.write('\n')
        args.log.info('report written to %s', args.output)
    else:
        print(text)
    if not report.correct:
        args.log.warning('answer differs from the ground truth')
