"""
Main command line interface of the qstringlab package.

Sub-commands are the modules of `qstringlab_commands` plus any module
registered under the `qstringlab.commands` entry point group.  Results go to
standard output, log messages to standard error.
"""

import argparse
import logging
import sys

from clldutils.clilib import ParserError, register_subcommands
from clldutils.loglib import get_colorlog

import qstringlab_commands
from qstringlab.bench import UsageError
from qstringlab.oracle import FormatError, InputError

USAGE_ERROR = 2


def log_level(name):
    level = logging.getLevelName(name.upper())
    if not isinstance(level, int):
        raise argparse.ArgumentTypeError(f'unknown log level: {name}')
    return level


def main(args=None, catch_all=False, parsed_args=None, log=None):
    parser = argparse.ArgumentParser(
        prog='qstringlab',
        description='Query-model laboratory for quantum string algorithms.')
    parser.add_argument(
        '--log-level',
        default=logging.INFO,
        help='log level [ERROR|WARN|INFO|DEBUG]',
        type=log_level)
    subparsers = parser.add_subparsers(
        title='available commands',
        dest='_command',
        description='Run "COMMAND -h" to get help for a specific command.',
        metavar='COMMAND')
    register_subcommands(
        subparsers, qstringlab_commands, entry_point='qstringlab.commands')

    args = parsed_args or parser.parse_args(args=args)
    if not hasattr(args, 'main'):
        parser.print_help()
        return USAGE_ERROR
    args.log = log or get_colorlog('qstringlab', sys.stderr, level=args.log_level)

    try:
        return args.main(args) or 0
    except KeyboardInterrupt:  # pragma: no cover
        return 0
    except (ParserError, UsageError, InputError, FormatError) as e:
        args.log.error(str(e))
        return USAGE_ERROR
    except Exception as e:  # pragma: no cover
        if catch_all:
            print(e)
            return 1
        raise


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main() or 0)
