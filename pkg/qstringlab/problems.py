"""End-to-end string problems, their classical baselines and ground truth.

The quantum-structured algorithms take a `ComparatorConfig`; with the
`classical` backend they run the same skeleton on exact comparisons, which
is how the skeletons themselves are checked.  Baselines read every symbol
they need through `StringTable.read_symbol`.

The `brute_force_*` and `check_*` functions look at the table's cells
directly.  They are the ground truth and are never charged.
"""

from collections import Counter, namedtuple
from functools import partial

from qstringlab.compare import StringComparator
from qstringlab.oracle import InputError
from qstringlab.structures import PrefixTree, StringHeap, StringTree

MostFrequentResult = namedtuple(
    'MostFrequentResult', 'i_max c_max comparisons', defaults=(0,))
OrderPermutation = namedtuple(
    'OrderPermutation', 'order comparisons bucket_work', defaults=(0, 0))
RequestAnswerBits = namedtuple(
    'RequestAnswerBits', 'bits comparisons', defaults=(0,))


def _require_requests(table):
    if not table.has_requests:
        raise InputError('intersection needs a request sequence')


def most_frequent(table, config, rng=None):
    """Most frequent string via the multi-set tree (boost base `n`).

    `c_max` starts at 1 and is only replaced on a strictly larger count, so
    on ties the string that reached the maximal count first wins.
    """
    comparator = StringComparator(table, config.with_boost_base(table.n), rng)
    tree = StringTree(comparator, kind='multiset')
    c_max, i_max = 1, 1
    for i in range(1, table.n + 1):
        node = tree.find(('s', i))
        if node is None:
            node = tree.add(('s', i))
        node.payload += 1
        if node.payload > c_max:
            c_max, i_max = node.payload, i
    return MostFrequentResult(i_max, c_max, comparator.calls)


def _read_string(table, seq, i):
    return [table.read_symbol(seq, i, j) for j in range(1, table.k + 1)]


def _build_trie(table, on_insert=None):
    trie = PrefixTree()
    for i in range(1, table.n + 1):
        node = trie.insert(_read_string(table, 's', i), i)
        if on_insert:
            on_insert(i, node)
    return trie


def most_frequent_trie(table):
    """Classical baseline: count strings in a trie, `n·k` reads exactly."""
    best = [1, 1]

    def track(i, node):
        if node.count > best[1]:
            best[:] = [i, node.count]

    _build_trie(table, track)
    return MostFrequentResult(*best)


def _heapsort(comparator, table):
    heap = StringHeap(comparator)
    for i in range(1, table.n + 1):
        heap.add(('s', i))
    return tuple(
        heap.get_min_and_delete()[1]
        for _ in range(table.n))


def sort_strings(table, config, rng=None):
    """Heapsort with the string comparator (boost base `n`)."""
    comparator = StringComparator(table, config.with_boost_base(table.n), rng)
    order = _heapsort(comparator, table)
    return OrderPermutation(order, comparator.calls)


def radix_sort(table):
    """Classical baseline: LSD radix sort, one counting-sort pass per position.

    Reads every cell exactly once.  `bucket_work` records the `d` bucket
    slots each pass walks through.
    """
    order = list(range(1, table.n + 1))
    for j in range(table.k, 0, -1):
        keys = [table.read_symbol('s', i, j) for i in order]
        counts = [0] * table.d
        for key in keys:
            counts[key] += 1
        total = 0
        for symbol in range(table.d):
            counts[symbol], total = total, total + counts[symbol]
        sorted_order = [0] * table.n
        for i, key in zip(order, keys):
            sorted_order[counts[key]] = i
            counts[key] += 1
        order = sorted_order
    return OrderPermutation(tuple(order), 0, table.d * table.k)


def intersect_via_tree(table, config, rng=None):
    """Answer each request with a lookup in the set tree built from `s`.

    Requests are answered one at a time, in order; boost base `n + m`.
    """
    _require_requests(table)
    config = config.with_boost_base(table.n + table.m)
    comparator = StringComparator(table, config, rng)
    tree = StringTree(comparator, kind='set')
    for i in range(1, table.n + 1):
        tree.add(('s', i))
    bits = []
    for i in range(1, table.m + 1):
        bits.append(int(tree.find(('t', i)) is not None))
    return RequestAnswerBits(tuple(bits), comparator.calls)


def binary_search_for_string(comparator, order, key):
    """Lower-bound search for `key` in the sorted `order`; 1 iff present.

    The sign of the comparison that last moved the upper bound is reused as
    the equality check, so a search costs at most `⌈log₂(n+1)⌉` comparisons.
    """
    lo, hi = 0, len(order)
    sign_at_hi = None
    while lo < hi:
        mid = (lo + hi) // 2
        sign = comparator(('s', order[mid]), key)
        if sign < 0:
            lo = mid + 1
        else:
            hi, sign_at_hi = mid, sign
    return int(lo < len(order) and sign_at_hi == 0)


def intersect_via_sort(table, config, rng=None):
    """Sort `s` once, then binary-search every request (boost base `n + m`)."""
    _require_requests(table)
    config = config.with_boost_base(table.n + table.m)
    comparator = StringComparator(table, config, rng)
    order = _heapsort(comparator, table)
    bits = []
    for i in range(1, table.m + 1):
        bits.append(binary_search_for_string(comparator, order, ('t', i)))
    return RequestAnswerBits(tuple(bits), comparator.calls)


def intersect_trie(table):
    """Classical baseline: trie of `s`, then one trie walk per request."""
    _require_requests(table)
    trie = _build_trie(table)
    bits = []
    for i in range(1, table.m + 1):
        node = trie.walk(partial(table.read_symbol, 't', i), table.k)
        bits.append(int(node is not None))
    return RequestAnswerBits(tuple(bits))


def brute_force_most_frequent(table):
    """`(i_max, c_max)` with the same tie rule as `most_frequent`."""
    counts = Counter()
    c_max, i_max = 1, 1
    for i, row in enumerate(table.strings('s'), 1):
        counts[row] += 1
        if counts[row] > c_max:
            c_max, i_max = counts[row], i
    return i_max, c_max


def brute_force_sort(table):
    rows = table.strings('s')
    return tuple(sorted(range(1, table.n + 1), key=lambda i: rows[i - 1]))


def brute_force_intersection(table):
    present = set(table.strings('s'))
    return tuple(int(row in present) for row in table.strings('t'))


def brute_force_sign(table, a, b):
    left = table.strings(a[0])[a[1] - 1]
    right = table.strings(b[0])[b[1] - 1]
    return (left > right) - (left < right)


def check_most_frequent(table, result):
    """True iff `result` names a string of maximal count with that count."""
    rows = table.strings('s')
    counts = Counter(rows)
    top = max(counts.values())
    return (
        1 <= result.i_max <= table.n
        and counts[rows[result.i_max - 1]] == top
        and result.c_max == top)


def check_order(table, order):
    """True iff `order` is a permutation listing `s` in non-decreasing order."""
    if sorted(order) != list(range(1, table.n + 1)):
        return False
    rows = table.strings('s')
    return all(
        rows[a - 1] <= rows[b - 1]
        for a, b in zip(order, order[1:]))


def check_answers(table, bits):
    return tuple(bits) == brute_force_intersection(table)
