"""The black box holding the input strings.

Every symbol an algorithm looks at goes through a `StringTable`, which charges
the access to its `QueryLedger`.  Three categories are kept apart:

 * classical reads: symbol reads of the classical baselines and of the
   exact comparator,
 * quantum oracle calls: one per Grover iteration,
 * verification reads: classical checks of measured positions.

Positions and string indices are 1-based.  Symbols are integer code points
`0 <= symbol < d`; text input maps each character to its code point, so the
alphabet order is code-point order.
"""

import math
from collections import namedtuple
from pathlib import Path

import numpy as np
from cerberus import Validator

SEQUENCES = ('s', 't')
DISTRIBUTIONS = ('uniform', 'pool', 'suffix', 'last-mismatch')

LEDGER_SCHEMA = {
    'classical_reads': {'type': 'integer', 'min': 0},
    'quantum_oracle_calls': {'type': 'integer', 'min': 0},
    'verification_reads': {'type': 'integer', 'min': 0},
}
LEDGER_VALIDATOR = Validator(schema=LEDGER_SCHEMA, require_all=True)


class InputError(ValueError):
    """Out-of-range index, position or parameter."""


class FormatError(ValueError):
    """Input data that cannot be turned into a string table."""


class QueryCounts(namedtuple(
        'QueryCounts',
        'classical_reads quantum_oracle_calls verification_reads')):
    __slots__ = ()

    @property
    def total(self):
        return sum(self)

    def __sub__(self, other):
        return QueryCounts(*(a - b for a, b in zip(self, other)))


class QueryLedger:
    """Query counters of one experiment run."""

    def __init__(
        self, classical_reads=0, quantum_oracle_calls=0, verification_reads=0
    ):
        self.classical_reads = classical_reads
        self.quantum_oracle_calls = quantum_oracle_calls
        self.verification_reads = verification_reads

    def __repr__(self):
        return 'QueryLedger({}, {}, {})'.format(*self.snapshot())

    def __eq__(self, other):
        if not isinstance(other, QueryLedger):
            return NotImplemented
        return self.snapshot() == other.snapshot()

    @property
    def total(self):
        return self.snapshot().total

    def charge_classical(self, count=1):
        self.classical_reads += count

    def charge_oracle(self, count):
        assert count >= 0, 'negative oracle charge'
        self.quantum_oracle_calls += count

    def charge_verification(self, count=1):
        self.verification_reads += count

    def snapshot(self):
        return QueryCounts(
            self.classical_reads,
            self.quantum_oracle_calls,
            self.verification_reads)

    def reset(self):
        self.classical_reads = 0
        self.quantum_oracle_calls = 0
        self.verification_reads = 0

    def as_dict(self):
        return self.snapshot()._asdict()

    @classmethod
    def from_dict(cls, data):
        if not LEDGER_VALIDATOR.validate(data):
            raise FormatError(f'invalid ledger: {LEDGER_VALIDATOR.errors}')
        return cls(**{key: data[key] for key in LEDGER_SCHEMA})


def _as_cells(rows, k=None):
    cells = np.asarray(rows, dtype=np.int64)
    if cells.ndim != 2:
        if cells.size == 0 and k is not None:
            cells = cells.reshape(0, k)
        else:
            raise FormatError('strings must form an n x k grid')
    cells.setflags(write=False)
    return cells


class StringTable:
    """The sequence `s` (and optionally the request sequence `t`).

    The cells are read-only; algorithm code must use `read_symbol` or
    `verify_symbol`, both of which are charged.  `uncharged_scan` is reserved
    for the Grover simulator, which needs the marked set to evaluate the
    unitary it models.
    """

    def __init__(self, strings, alphabet_size, requests=None):
        cells = _as_cells(strings)
        n, k = cells.shape
        if n < 1 or k < 1:
            raise InputError(f'need n >= 1 and k >= 1, got n={n}, k={k}')
        if alphabet_size < 1:
            raise InputError(f'alphabet size must be positive: {alphabet_size}')
        self._cells = {'s': cells, 't': None}
        if requests is not None:
            req_cells = _as_cells(requests, k=k)
            if req_cells.shape[1] != k:
                raise FormatError(
                    'requests have length {}, strings have length {}'.format(
                        req_cells.shape[1], k))
            self._cells['t'] = req_cells
        for seq_cells in self._cells.values():
            if seq_cells is None or seq_cells.size == 0:
                continue
            if seq_cells.min() < 0 or seq_cells.max() >= alphabet_size:
                raise FormatError(
                    f'symbol outside the alphabet [0, {alphabet_size})')
        self.n = n
        self.k = k
        self.d = alphabet_size
        self.ledger = QueryLedger()

    def __repr__(self):
        return f'<StringTable n={self.n} m={self.m} k={self.k} d={self.d}>'

    @property
    def has_requests(self):
        return self._cells['t'] is not None

    @property
    def m(self):
        return 0 if self._cells['t'] is None else len(self._cells['t'])

    def _seq_cells(self, seq):
        if seq not in SEQUENCES:
            raise InputError(f'unknown sequence: {seq!r}')
        cells = self._cells[seq]
        if cells is None:
            raise InputError('table has no request sequence')
        return cells

    def _check(self, seq, i, j):
        cells = self._seq_cells(seq)
        if not 1 <= i <= cells.shape[0]:
            raise InputError(f'string index out of range: {seq}^{i}')
        if not 1 <= j <= self.k:
            raise InputError(f'position out of range: {seq}^{i}_{j}')
        return cells

    def read_symbol(self, seq, i, j):
        """Read `seq^i_j` and charge one classical read."""
        cells = self._check(seq, i, j)
        self.ledger.charge_classical()
        return int(cells[i - 1, j - 1])

    def verify_symbol(self, seq, i, j):
        """Read `seq^i_j` and charge one verification read."""
        cells = self._check(seq, i, j)
        self.ledger.charge_verification()
        return int(cells[i - 1, j - 1])

    def uncharged_scan(self, seq, i, first=1, last=None):
        """Symbols `seq^i_first .. seq^i_last` without charging the ledger.

        Only the quantum backend simulator may call this.
        """
        cells = self._seq_cells(seq)
        if last is None:
            last = self.k
        if not 1 <= i <= cells.shape[0]:
            raise InputError(f'string index out of range: {seq}^{i}')
        if last < first:
            return cells[i - 1, 0:0]
        if not (1 <= first and last <= self.k):
            raise InputError(f'range out of bounds: [{first}..{last}]')
        return cells[i - 1, first - 1:last]

    def ledger_snapshot(self):
        return self.ledger.snapshot()

    def ledger_reset(self):
        self.ledger.reset()

    def strings(self, seq='s'):
        """Ground truth for checking answers; never used by algorithms."""
        return [tuple(int(c) for c in row) for row in self._seq_cells(seq)]

    def decode(self, seq, i):
        return ''.join(map(chr, self.uncharged_scan(seq, i)))


def _text_lines(source):
    if isinstance(source, Path):
        return source.read_text(encoding='utf-8').splitlines()
    elif isinstance(source, str):
        return source.splitlines()
    elif hasattr(source, 'read'):
        return source.read().splitlines()
    else:
        return [line.rstrip('\r\n') for line in source]


def _encode_lines(lines, what):
    if not lines:
        raise FormatError(f'no {what} found')
    k = len(lines[0])
    for lineno, line in enumerate(lines, 1):
        if len(line) != k:
            raise FormatError(
                f'{what} line {lineno}: length {len(line)}, expected {k}')
    return [[ord(char) for char in line] for line in lines]


def load_table(source, requests=None, alphabet_size=None):
    """Read a string table from UTF-8 text, one string per line.

    `source` (and `requests`) may be a `Path`, a file object, a string holding
    the whole text, or an iterable of lines.  Without `alphabet_size` the
    alphabet is `[0, max code point]`.
    """
    strings = _encode_lines(_text_lines(source), 'string')
    req = None
    if requests is not None:
        req_lines = _text_lines(requests)
        req = _encode_lines(req_lines, 'request') if req_lines else []
        if req and len(req[0]) != len(strings[0]):
            raise FormatError(
                'requests have length {}, strings have length {}'.format(
                    len(req[0]), len(strings[0])))
    if alphabet_size is None:
        alphabet_size = 1 + max(
            max(row) for row in strings + (req or []))
    return StringTable(strings, alphabet_size, requests=req)


def _suffix_width(n, k, d):
    if d < 2:
        return k
    return min(k, 1 + math.ceil(math.log(max(n, 2)) / math.log(d)))


def _make_sampler(distribution, rng, n, k, d):
    if distribution == 'uniform':
        def sample(count):
            return rng.integers(0, d, size=(count, k))
    elif distribution == 'pool':
        pool = rng.integers(0, d, size=(max(1, n // 4), k))

        def sample(count):
            return pool[rng.integers(0, len(pool), size=count)]
    elif distribution == 'suffix':
        base = rng.integers(0, d, size=k)
        width = _suffix_width(n, k, d)

        def sample(count):
            rows = np.tile(base, (count, 1))
            rows[:, k - width:] = rng.integers(0, d, size=(count, width))
            return rows
    elif distribution == 'last-mismatch':
        base = rng.integers(0, d, size=k)

        def sample(count):
            rows = np.tile(base, (count, 1))
            rows[:, k - 1] = np.arange(count) % d
            return rows
    else:
        raise InputError(f'unknown distribution: {distribution!r}')
    return sample


def generate_table(n, k, d, seed, distribution='uniform', m=None):
    """Generate a random table.

    `seed` is anything `numpy.random.default_rng` accepts.  With `m` given
    (even 0) the table gets a request sequence: half of the requests are
    copies of random strings from `s`, the rest are fresh samples.
    """
    if n < 1 or k < 1 or d < 1:
        raise InputError(f'need n, k, d >= 1, got n={n}, k={k}, d={d}')
    if m is not None and m < 0:
        raise InputError(f'need m >= 0, got m={m}')
    rng = np.random.default_rng(seed)
    sample = _make_sampler(distribution, rng, n, k, d)
    strings = sample(n)
    requests = None
    if m is not None:
        copied = m // 2
        rows = np.concatenate([
            strings[rng.integers(0, n, size=copied)],
            sample(m - copied)]).reshape(m, k)
        requests = rows[rng.permutation(m)]
    return StringTable(strings, d, requests=requests)
