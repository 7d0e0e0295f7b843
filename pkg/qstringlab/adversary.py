"""The lower-bound adversary for the most-frequent-string problem, as a game.

A deterministic strategy asks for cells `(i, j)` and finally names the
string it believes to be the most frequent one.  The adversary answers `a`
for every cell of the first half of the strings and `b` for the second half.
Once the strategy answers it completes the input:

 * strategy named `a^k`: flip one unread cell of the first half to `b` and
   make the whole second half `b^k`, which makes `b^k` the unique mode;
 * anything else: flip one unread cell of the second half to `a` and make
   the whole first half `a^k`, which makes `a^k` the unique mode.

Either way the strategy is wrong unless it read every cell the construction
needs.
"""

from collections import Counter, namedtuple
from itertools import product
from types import MappingProxyType

import numpy as np

from qstringlab.oracle import InputError

SYMBOL_A = 0
SYMBOL_B = 1

ALGORITHM_WRONG = 'algorithm_wrong'
ALGORITHM_READ_ALL = 'algorithm_read_all'
ADVERSARY_FAILED = 'adversary_failed'
STRATEGY_ERROR = 'strategy_error'

Answer = namedtuple('Answer', 'symbols')
GameView = namedtuple('GameView', 'n k revealed')


class AdversaryState:
    """Revealed cells, the strategy's answer and the game's outcome."""

    def __init__(self, n, k):
        self.n = n
        self.k = k
        self.revealed = {}
        self.queries = 0
        self.answer = None
        self.completion = None
        self.verdict = None

    def view(self):
        return GameView(self.n, self.k, MappingProxyType(self.revealed))

    def reply(self, i, j):
        symbol = SYMBOL_A if i <= self.n // 2 else SYMBOL_B
        self.revealed[i, j] = symbol
        self.queries += 1
        return symbol

    def unread_cells(self, first_half):
        rows = (
            range(1, self.n // 2 + 1) if first_half
            else range(self.n // 2 + 1, self.n + 1))
        return [
            (i, j)
            for i, j in product(rows, range(1, self.k + 1))
            if (i, j) not in self.revealed]

    def _completion(self, flip, flip_to):
        rows = [
            [SYMBOL_A if i <= self.n // 2 else SYMBOL_B] * self.k
            for i in range(1, self.n + 1)]
        i, j = flip
        rows[i - 1][j - 1] = flip_to
        return [tuple(row) for row in rows]

    def consistent(self, completion):
        return all(
            completion[i - 1][j - 1] == symbol
            for (i, j), symbol in self.revealed.items())

    def settle(self, answer):
        """Complete the input against `answer` and set the verdict."""
        self.answer = tuple(answer)
        if len(self.revealed) == self.n * self.k:
            self.completion = self._completion((1, 1), SYMBOL_A)
            self.verdict = ALGORITHM_READ_ALL
            return self.verdict
        if self.answer == (SYMBOL_A,) * self.k:
            plans = [(True, SYMBOL_B), (False, SYMBOL_A)]
        else:
            plans = [(False, SYMBOL_A), (True, SYMBOL_B)]
        for first_half, flip_to in plans:
            for cell in self.unread_cells(first_half):
                completion = self._completion(cell, flip_to)
                assert self.consistent(completion)
                if not is_mode(completion, self.answer):
                    self.completion = completion
                    self.verdict = ALGORITHM_WRONG
                    return self.verdict
        self.verdict = ADVERSARY_FAILED
        return self.verdict


def is_mode(strings, candidate):
    counts = Counter(strings)
    return counts.get(candidate, 0) == max(counts.values())


def adversary_game(strategy, n, k, max_moves=None):
    """Play `strategy` against the adversary on `n` strings of length `k`.

    `strategy.next_move(view)` gets a `GameView` and returns either a cell
    `(i, j)` or an `Answer`.  Out-of-range cells, and games running past
    `max_moves` (default `2·n·k + 1`), end with the verdict
    `strategy_error`.  Returns the final `AdversaryState`.
    """
    if n < 2 or n % 2:
        raise InputError(f'the adversary needs an even n >= 2, got {n}')
    if k < 1:
        raise InputError(f'need k >= 1, got {k}')
    if max_moves is None:
        max_moves = 2 * n * k + 1
    state = AdversaryState(n, k)
    for _ in range(max_moves):
        move = strategy.next_move(state.view())
        if isinstance(move, Answer):
            state.settle(move.symbols)
            return state
        try:
            i, j = move
        except (TypeError, ValueError):
            state.verdict = STRATEGY_ERROR
            return state
        if not (1 <= i <= n and 1 <= j <= k):
            state.verdict = STRATEGY_ERROR
            return state
        state.reply(i, j)
    state.verdict = STRATEGY_ERROR
    return state


def _majority_guess(view):
    symbols = Counter(view.revealed.values())
    if symbols[SYMBOL_B] > symbols[SYMBOL_A]:
        return (SYMBOL_B,) * view.k
    return (SYMBOL_A,) * view.k


class FullReadStrategy:
    """Reads every cell row by row, then names `a^k`."""

    def next_move(self, view):
        for cell in product(range(1, view.n + 1), range(1, view.k + 1)):
            if cell not in view.revealed:
                return cell
        return Answer(_majority_guess(view))


class _PlannedStrategy:
    """Reads a fixed list of cells, then names the majority symbol's string."""

    def __init__(self, seed=None):
        self.seed = seed
        self._plan = None

    def plan(self, n, k, rng):
        raise NotImplementedError

    def next_move(self, view):
        if self._plan is None:
            rng = np.random.default_rng(self.seed)
            self._plan = list(self.plan(view.n, view.k, rng))
        for cell in self._plan:
            if cell not in view.revealed:
                return cell
        return Answer(_majority_guess(view))


class SamplingStrategy(_PlannedStrategy):
    """Reads a seeded random `fraction` of all cells."""

    def __init__(self, fraction, seed=None):
        super().__init__(seed)
        self.fraction = fraction

    def plan(self, n, k, rng):
        cells = list(product(range(1, n + 1), range(1, k + 1)))
        count = min(len(cells), max(1, round(self.fraction * len(cells))))
        for pos in rng.choice(len(cells), size=count, replace=False):
            yield cells[pos]


class PartialReadStrategy(_PlannedStrategy):
    """Reads a seeded random set of cells that spares one cell in each half."""

    def plan(self, n, k, rng):
        half = n // 2
        first = list(product(range(1, half + 1), range(1, k + 1)))
        second = list(product(range(half + 1, n + 1), range(1, k + 1)))
        spared = {
            first[rng.integers(len(first))],
            second[rng.integers(len(second))]}
        cells = [cell for cell in first + second if cell not in spared]
        count = int(rng.integers(0, len(cells) + 1))
        for pos in rng.choice(len(cells), size=count, replace=False):
            yield cells[pos]
