"""\
Play deterministic query strategies against the most-frequent-string adversary.

Each game uses its own seed (`--seed`, `--seed + 1`, ...).  Prints how many
games ended with each verdict.
"""

import json
from collections import Counter

from qstringlab import adversary
from qstringlab.bench import UsageError

STRATEGIES = ('full', 'sample', 'partial')


def register(parser):
    parser.add_argument('--n', type=int, default=16, help='number of strings (even)')
    parser.add_argument('--k', type=int, default=8, help='string length')
    parser.add_argument('--strategy', choices=STRATEGIES, default='partial')
    parser.add_argument(
        '--fraction', type=float, default=0.1,
        help='share of cells the sample strategy reads')
    parser.add_argument('--games', type=int, default=100)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--json', action='store_true')


def make_strategy(name, seed, fraction):
    if name == 'full':
        return adversary.FullReadStrategy()
    elif name == 'sample':
        return adversary.SamplingStrategy(fraction, seed=seed)
    else:
        return adversary.PartialReadStrategy(seed=seed)


def run(args):
    if args.games < 1:
        raise UsageError(f'need at least one game: {args.games}')
    if not 0 <= args.fraction <= 1:
        raise UsageError(f'--fraction must lie in [0, 1]: {args.fraction}')
    verdicts = Counter()
    for game in range(args.games):
        strategy = make_strategy(args.strategy, args.seed + game, args.fraction)
        state = adversary.adversary_game(strategy, args.n, args.k)
        verdicts[state.verdict] += 1
        args.log.debug(
            'game %d: %d queries, %s', game, state.queries, state.verdict)
    if args.json:
        print(json.dumps(dict(verdicts), sort_keys=True))
    else:
        for verdict, count in sorted(verdicts.items()):
            print(f'{verdict}\t{count}')
