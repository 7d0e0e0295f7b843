"""Lexicographic comparison of two oracle strings.

The quantum comparator repeats the first-one search for `f(j) = (A_j != B_j)`
`r = 3·⌈log₂ B⌉ + 1` times and keeps the smallest position found; the two
symbols at that position decide the order.  `B` is the boost base chosen by
the calling problem (`n`, or `n + m` for the intersection algorithms).  The
`classical` backend scans the strings left to right instead and is both the
deterministic baseline and the reference the quantum answers are checked
against.
"""

from collections import namedtuple

from qstringlab.oracle import InputError, StringTable
from qstringlab.search import (
    DEFAULT_CUTOFF, DEFAULT_GROWTH, MismatchPredicate, SearchConfig,
    first_one_search, make_backend)
from qstringlab.util import ceil_log2

CLASSICAL = 'classical'
BACKEND_NAMES = (CLASSICAL, 'closed-form', 'statevector')

CompareOutcome = namedtuple('CompareOutcome', 'sign j0_observed queries_charged')


class ComparatorConfig(namedtuple(
        'ComparatorConfig', 'backend boost_base growth cutoff',
        defaults=('closed-form', None, DEFAULT_GROWTH, DEFAULT_CUTOFF))):
    """Comparator backend plus boosting and search constants.

    `boost_base` may be left as `None`; the problems fill in their own value
    through `with_boost_base`.
    """

    __slots__ = ()

    @property
    def is_quantum(self):
        return self.backend != CLASSICAL

    @property
    def repetitions(self):
        return 3 * ceil_log2(self.boost_base or 2) + 1

    @property
    def search(self):
        return SearchConfig(self.growth, self.cutoff)

    def with_boost_base(self, default):
        if self.boost_base is not None:
            return self
        return self._replace(boost_base=max(2, default))

    def validate(self):
        if self.backend not in BACKEND_NAMES:
            raise InputError(f'unknown comparator backend: {self.backend!r}')
        if self.boost_base is not None and (
            int(self.boost_base) != self.boost_base or self.boost_base < 2
        ):
            raise InputError(f'boost base must be an integer >= 2: {self.boost_base}')
        if not self.growth > 1:
            raise InputError(f'growth factor must exceed 1: {self.growth}')
        if not self.cutoff >= 1:
            raise InputError(f'cutoff must be at least 1: {self.cutoff}')
        return self


def _scan_compare(table, a, b):
    for j in range(1, table.k + 1):
        left = table.read_symbol(*a, j)
        right = table.read_symbol(*b, j)
        if left != right:
            return (-1 if left < right else 1), j
    return 0, table.k + 1


def _boosted_compare(table, a, b, config, backend):
    k = table.k
    predicate = MismatchPredicate(table, a, b)
    j0 = k + 1
    for _ in range(config.repetitions):
        outcome = first_one_search(predicate, k, backend, config.search)
        j0 = min(j0, outcome.position)
    if j0 == k + 1:
        return 0, j0
    left = table.verify_symbol(*a, j0)
    right = table.verify_symbol(*b, j0)
    assert left != right, 'first-one search returned an unverified position'
    return (-1 if left < right else 1), j0


def compare_strings(table, a, b, config, backend=None):
    """Compare the strings `a` and `b`, each given as `(seq, index)`.

    Returns a `CompareOutcome` whose sign is -1, 0 or 1 and whose
    `queries_charged` is the growth of the table's ledger.
    """
    config.validate()
    before = table.ledger_snapshot()
    if config.is_quantum:
        if backend is None:
            raise InputError('a quantum comparison needs a backend')
        sign, j0 = _boosted_compare(table, a, b, config, backend)
    else:
        sign, j0 = _scan_compare(table, a, b)
    return CompareOutcome(sign, j0, (table.ledger_snapshot() - before).total)


class StringComparator:
    """`compare_strings` bound to a table, a config and an RNG stream.

    Counts its calls in `calls`.
    """

    def __init__(self, table, config, rng=None):
        self.table = table
        self.config = config.validate()
        self.backend = (
            make_backend(config.backend, rng) if config.is_quantum else None)
        self.calls = 0

    def compare(self, a, b):
        self.calls += 1
        return compare_strings(self.table, a, b, self.config, self.backend)

    def __call__(self, a, b):
        return self.compare(a, b).sign


def comparator_error_rate(k, j0_position, trials, config, seed=None):
    """Fraction of wrong signs on a pair that differs only at `j0_position`."""
    if trials < 1:
        raise InputError(f'need at least one trial: {trials}')
    if not 1 <= j0_position <= k:
        raise InputError(f'mismatch position out of range: {j0_position}')
    left = [0] * k
    right = [0] * k
    right[j0_position - 1] = 1
    table = StringTable([left, right], 2)
    comparator = StringComparator(table, config.with_boost_base(2), rng=seed)
    errors = sum(
        comparator(('s', 1), ('s', 2)) != -1
        for _ in range(trials))
    return errors / trials
