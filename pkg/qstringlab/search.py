"""Simulated Grover search, unknown-count search and first-one search.

Nothing here touches a gate: a Grover run with `m` iterations over `N`
positions of which `t` are marked measures a marked position with probability
`sin²((2m+1)·θ)`, `θ = arcsin √(t/N)`, uniformly among the marked ones, and
an unmarked position otherwise.  `ClosedFormBackend` samples that law
directly; `StatevectorBackend` applies the iterations to an explicit amplitude
vector and is kept for cross-checking.

Each Grover iteration charges one quantum oracle call; every measured
position is checked classically through the predicate, which charges two
verification reads (one symbol of each string).

All randomness comes from the backend's `numpy.random.Generator`, consumed in
call order, so a seed fixes both the outcomes and the ledger.  A search over
a range without marked positions takes its whole round schedule from one
batch of uniforms.
"""

import math
from collections import namedtuple

import numpy as np

from qstringlab.oracle import InputError, QueryLedger

DEFAULT_GROWTH = 6 / 5
DEFAULT_CUTOFF = 9
STATEVECTOR_MAX_SIZE = 2 ** 16
VERIFY_COST = 2

SearchConfig = namedtuple(
    'SearchConfig', 'growth cutoff',
    defaults=(DEFAULT_GROWTH, DEFAULT_CUTOFF))
Measurement = namedtuple('Measurement', 'position queries_charged')
SearchOutcome = namedtuple('SearchOutcome', 'found queries_charged iterations_used')
FirstOneOutcome = namedtuple(
    'FirstOneOutcome', 'position queries_charged iterations_used stages')


def grover_success_probability(size, marked_count, iterations):
    """Probability that `iterations` Grover iterations measure a marked item."""
    if size < 1:
        raise InputError(f'search space must be non-empty: N={size}')
    if not 0 <= marked_count <= size:
        raise InputError(f'marked count out of range: t={marked_count}, N={size}')
    if iterations < 0:
        raise InputError(f'negative iteration count: {iterations}')
    if marked_count == 0:
        return 0.0
    if marked_count == size:
        return 1.0
    theta = math.asin(math.sqrt(marked_count / size))
    return math.sin((2 * iterations + 1) * theta) ** 2


class MaskPredicate:
    """Marker function given by an explicit set of marked positions."""

    def __init__(self, marked, size, ledger=None):
        self.size = size
        self._marked = np.array(sorted(set(marked)), dtype=np.int64)
        if len(self._marked) and not (
            1 <= self._marked[0] and self._marked[-1] <= size
        ):
            raise InputError('marked positions must lie in [1, size]')
        self._lookup = set(int(x) for x in self._marked)
        self.ledger = QueryLedger() if ledger is None else ledger

    def marked_upto(self, limit):
        return self._marked[:np.searchsorted(self._marked, limit, side='right')]

    def verify(self, position):
        self.ledger.charge_verification(VERIFY_COST)
        return position in self._lookup


class MismatchPredicate:
    """`f(j) = (A_j != B_j)` for two strings of a table.

    `a` and `b` are `(seq, index)` pairs.  The marked set is taken from an
    uncharged scan, the simulator's view of the phase oracle; `verify` reads
    both symbols and charges the table's ledger.
    """

    def __init__(self, table, a, b):
        self.table = table
        self.a = a
        self.b = b
        self.size = table.k
        self._marked = None

    @property
    def ledger(self):
        return self.table.ledger

    def marked_upto(self, limit):
        if self._marked is None:
            left = self.table.uncharged_scan(*self.a)
            right = self.table.uncharged_scan(*self.b)
            self._marked = np.flatnonzero(left != right) + 1
        return self._marked[:np.searchsorted(self._marked, limit, side='right')]

    def verify(self, position):
        left = self.table.verify_symbol(*self.a, position)
        right = self.table.verify_symbol(*self.b, position)
        return left != right


class ClosedFormBackend:
    """Samples the Grover measurement law directly, O(1) per run."""

    name = 'closed-form'

    def __init__(self, rng):
        self.rng = rng

    def measure(self, size, marked, iterations):
        """Measure a position in `1..size`.

        `marked` holds the sorted marked positions that are `<= size`.
        """
        rng = self.rng
        t = len(marked)
        if t and (
            t == size
            or rng.random() < grover_success_probability(size, t, iterations)
        ):
            return int(marked[min(int(rng.random() * t), t - 1)])
        unmarked = size - t
        u = min(int(rng.random() * unmarked), unmarked - 1)
        if t == 0:
            return u + 1
        # number of unmarked positions in front of each marked one
        gaps = marked - np.arange(1, t + 1)
        return u + 1 + int(np.searchsorted(gaps, u, side='right'))


class StatevectorBackend:
    """Explicit amplitude vector, for cross-validation up to 2**16 items."""

    name = 'statevector'

    def __init__(self, rng, max_size=STATEVECTOR_MAX_SIZE):
        self.rng = rng
        self.max_size = max_size

    def _mask(self, size, marked):
        if size > self.max_size:
            raise InputError(
                f'statevector backend is limited to N <= {self.max_size}')
        mask = np.zeros(size, dtype=bool)
        mask[np.asarray(marked, dtype=np.int64) - 1] = True
        return mask

    def amplitudes(self, size, marked, iterations):
        mask = self._mask(size, marked)
        state = np.full(size, 1 / math.sqrt(size))
        for _ in range(iterations):
            state[mask] *= -1
            state = 2 * state.mean() - state
        return state

    def marked_probability(self, size, marked, iterations):
        mask = self._mask(size, marked)
        state = self.amplitudes(size, marked, iterations)
        return float(np.sum(state[mask] ** 2))

    def measure(self, size, marked, iterations):
        probs = self.amplitudes(size, marked, iterations) ** 2
        probs /= probs.sum()
        return int(self.rng.choice(size, p=probs)) + 1


BACKENDS = {
    ClosedFormBackend.name: ClosedFormBackend,
    StatevectorBackend.name: StatevectorBackend,
}


def make_backend(name, rng):
    try:
        backend_cls = BACKENDS[name]
    except KeyError:
        raise InputError(f'unknown quantum backend: {name!r}')
    return backend_cls(np.random.default_rng(rng))


def grover_run(size, predicate, iterations, backend):
    """Run `iterations` Grover iterations over positions `1..size` and measure.

    Charges `iterations` oracle calls.  The measured position is not verified.
    """
    if size < 1:
        raise InputError(f'search space must be non-empty: N={size}')
    if iterations < 0:
        raise InputError(f'negative iteration count: {iterations}')
    position = backend.measure(size, predicate.marked_upto(size), iterations)
    predicate.ledger.charge_oracle(iterations)
    return Measurement(position, iterations)


def _check_config(config):
    if not config.growth > 1:
        raise InputError(f'growth factor must exceed 1: {config.growth}')
    if not config.cutoff >= 1:
        raise InputError(f'cutoff must be at least 1: {config.cutoff}')


def _unmarked_rounds(size, predicate, rng, config):
    """Play every round of a search whose range holds no marked position.

    Verification fails in every such round, so the schedule is drawn in one
    batch: a single `rng.random` call yields one uniform per possible round
    (`⌊cutoff·√size⌋` of them, each round consuming at least one budget
    unit); draws past the last round are discarded.  The ledger is charged
    in bulk.
    """
    root = math.sqrt(size)
    budget = config.cutoff * root
    limit = int(budget)
    steps = math.ceil(math.log(root) / math.log(config.growth)) if root > 1 else 0
    caps = np.ceil(np.minimum(
        config.growth ** np.minimum(np.arange(limit), steps), root))
    draws = (rng.random(limit) * caps).astype(np.int64)
    spent_before = np.concatenate(([0], np.cumsum(draws + 1)[:-1]))
    rounds = int(np.searchsorted(spent_before, budget - 1, side='right'))
    draws = draws[:rounds]
    draws[-1] = min(draws[-1], int(budget - spent_before[rounds - 1]) - 1)
    iterations = int(draws.sum())
    predicate.ledger.charge_oracle(iterations)
    predicate.ledger.charge_verification(VERIFY_COST * rounds)
    return SearchOutcome(None, iterations + VERIFY_COST * rounds, iterations)


def bbht_search(size, predicate, backend, config=None):
    """Search `1..size` for a marked position without knowing how many exist.

    Each round draws `j` uniformly from `[0, m_max)`, runs `j` Grover
    iterations and verifies the measured position.  `m_max` grows by
    `config.growth` up to `√size`.  A round consumes `j + 1` units of the
    `config.cutoff·√size` budget; the search gives up once the budget is
    spent, so it always terminates and reports `found=None` when nothing is
    marked.  `cutoff >= 1` guarantees at least one round.

    Without a marked position in range the rounds are drawn in one batch
    (see `_unmarked_rounds`); otherwise each round takes one uniform for `j`
    followed by the backend's measurement draws.
    """
    if size < 1:
        raise InputError(f'search space must be non-empty: N={size}')
    config = config or SearchConfig()
    _check_config(config)
    rng = backend.rng
    if not len(predicate.marked_upto(size)):
        return _unmarked_rounds(size, predicate, rng, config)
    root = math.sqrt(size)
    budget = config.cutoff * root
    m_max = 1.0
    spent = iterations = queries = 0
    while spent + 1 <= budget:
        j = int(rng.random() * math.ceil(m_max))
        j = min(j, int(budget - spent) - 1)
        position, charged = grover_run(size, predicate, j, backend)
        spent += j + 1
        iterations += j
        queries += charged + VERIFY_COST
        if predicate.verify(position):
            return SearchOutcome(position, queries, iterations)
        m_max = min(config.growth * m_max, root)
    return SearchOutcome(None, queries, iterations)


def first_one_search(predicate, k, backend, config=None):
    """Find the first marked position in `1..k`, or return `k + 1`.

    Exponential prefix search: stage `t` runs `bbht_search` on the prefix
    `1..min(2**t, best - 1)`, where `best` is the smallest verified marked
    position so far (initially `k + 1`).  A hit lowers `best`; the search
    stops when `best` is 1 or when two stages in a row have covered all of
    `1..best - 1` without a hit.

    The returned position is always verified, so it is either a marked
    position or `k + 1`; it may be larger than the true first one.
    """
    if k < 1:
        raise InputError(f'string length must be positive: k={k}')
    best = k + 1
    stage = full_misses = queries = iterations = 0
    while best > 1:
        size = min(2 ** stage, best - 1)
        stage += 1
        outcome = bbht_search(size, predicate, backend, config)
        queries += outcome.queries_charged
        iterations += outcome.iterations_used
        if outcome.found is not None:
            best = outcome.found
            full_misses = 0
        elif size == best - 1:
            full_misses += 1
            if full_misses == 2:
                break
    return FirstOneOutcome(best, queries, iterations, stage)
