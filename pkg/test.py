import json
import logging
import math
import unittest

import numpy as np
import pytest

from qstringlab import adversary, bench, problems
from qstringlab.__main__ import main
from qstringlab.compare import (
    ComparatorConfig, StringComparator, comparator_error_rate, compare_strings)
from qstringlab.oracle import (
    FormatError, InputError, QueryLedger, StringTable, generate_table,
    load_table)
from qstringlab.search import (
    ClosedFormBackend, MaskPredicate, SearchConfig, StatevectorBackend,
    bbht_search, first_one_search, grover_run, grover_success_probability,
    make_backend)
from qstringlab.structures import PrefixTree, StateError, StringHeap, StringTree
from qstringlab.util import answer_digest, ceil_log2, fmt_time_period, worker_count

CLASSICAL = ComparatorConfig('classical')
QUANTUM = ComparatorConfig('closed-form')


def cmp(a, b):
    return (a > b) - (a < b)


class CountingCompare:

    def __init__(self):
        self.calls = 0

    def __call__(self, a, b):
        self.calls += 1
        return cmp(a, b)


@pytest.fixture
def log():
    return logging.getLogger('qstringlab.test')


def test_ceil_log2():
    assert [ceil_log2(x) for x in (1, 2, 3, 4, 5, 16, 17)] == [0, 1, 2, 2, 3, 4, 5]


def test_fmt_time_period():
    assert fmt_time_period(5) == '5s'
    assert fmt_time_period(3725) == '1h2m5s'
    assert fmt_time_period(90061) == '1d1h1m1s'


def test_answer_digest():
    digest = answer_digest({'bits': '0110'})
    assert digest.startswith('sha256:')
    assert digest == answer_digest({'bits': '0110'})
    assert digest != answer_digest({'bits': '0111'})
    assert answer_digest({'b': 1, 'a': 2}) == answer_digest({'a': 2, 'b': 1})


def test_worker_count(monkeypatch):
    monkeypatch.delenv('QSTRINGLAB_WORKERS', raising=False)
    assert worker_count() == 1
    monkeypatch.setenv('QSTRINGLAB_WORKERS', '4')
    assert worker_count() == 4
    monkeypatch.setenv('QSTRINGLAB_WORKERS', 'many')
    with pytest.raises(ValueError):
        worker_count()


class StringTableTests(unittest.TestCase):

    def setUp(self):
        self.table = load_table('abc\nabd\nabc\n', requests='abd\nbbb\n')

    def test_dimensions(self):
        self.assertEqual((self.table.n, self.table.m, self.table.k), (3, 2, 3))
        self.assertEqual(self.table.d, ord('d') + 1)
        self.assertEqual(self.table.decode('s', 2), 'abd')

    def test_reads_are_charged(self):
        self.assertEqual(self.table.read_symbol('s', 2, 3), ord('d'))
        self.assertEqual(self.table.verify_symbol('t', 2, 1), ord('b'))
        self.assertEqual(tuple(self.table.ledger_snapshot()), (1, 0, 1))
        self.table.uncharged_scan('s', 1)
        self.assertEqual(self.table.ledger_snapshot().total, 2)
        self.table.ledger_reset()
        self.assertEqual(self.table.ledger_snapshot().total, 0)

    def test_out_of_range(self):
        with self.assertRaises(InputError):
            self.table.read_symbol('s', 4, 1)
        with self.assertRaises(InputError):
            self.table.read_symbol('s', 1, 0)
        with self.assertRaises(InputError):
            self.table.read_symbol('u', 1, 1)
        self.assertEqual(self.table.ledger_snapshot().total, 0)

    def test_cells_are_read_only(self):
        cells = self.table.uncharged_scan('s', 1)
        with self.assertRaises(ValueError):
            cells[0] = 0

    def test_empty_scan(self):
        self.assertEqual(len(self.table.uncharged_scan('s', 1, 3, 2)), 0)


def test_load_table_errors():
    with pytest.raises(FormatError):
        load_table('abc\nab\n')
    with pytest.raises(FormatError):
        load_table('')
    with pytest.raises(FormatError):
        load_table('abc\n', requests='ab\n')
    with pytest.raises(FormatError):
        StringTable([[0, 5]], 2)


def test_load_table_from_path(tmp_path):
    path = tmp_path / 'strings.txt'
    path.write_text('xy\nyx\n', encoding='utf-8')
    table = load_table(path, requests=[])
    assert table.n == 2 and table.has_requests and table.m == 0


def test_ledger_dict():
    ledger = QueryLedger(3, 4, 5)
    assert ledger.as_dict() == {
        'classical_reads': 3, 'quantum_oracle_calls': 4, 'verification_reads': 5}
    assert QueryLedger.from_dict(ledger.as_dict()) == ledger
    with pytest.raises(FormatError):
        QueryLedger.from_dict({'classical_reads': -1})


def test_generate_table():
    one = generate_table(8, 16, 4, seed=3)
    two = generate_table(8, 16, 4, seed=3)
    assert one.strings() == two.strings()
    assert not one.has_requests
    assert generate_table(8, 16, 4, seed=3, m=0).m == 0
    with_requests = generate_table(8, 16, 4, seed=3, m=6)
    assert with_requests.m == 6

    rows = generate_table(6, 10, 3, seed=1, distribution='last-mismatch').strings()
    assert len({row[:-1] for row in rows}) == 1
    assert [row[-1] for row in rows] == [0, 1, 2, 0, 1, 2]

    rows = generate_table(16, 32, 2, seed=1, distribution='suffix').strings()
    assert len({row[:27] for row in rows}) == 1

    with pytest.raises(InputError):
        generate_table(4, 4, 2, seed=0, distribution='zipf')


class GroverTests(unittest.TestCase):

    def test_success_probability(self):
        self.assertAlmostEqual(grover_success_probability(4, 1, 1), 1.0)
        self.assertAlmostEqual(grover_success_probability(16, 3, 0), 3 / 16)
        self.assertEqual(grover_success_probability(16, 0, 5), 0.0)
        self.assertEqual(grover_success_probability(16, 16, 5), 1.0)
        with self.assertRaises(InputError):
            grover_success_probability(0, 0, 1)
        with self.assertRaises(InputError):
            grover_success_probability(4, 5, 1)

    def test_statevector_matches_closed_form(self):
        backend = StatevectorBackend(np.random.default_rng(0))
        marked = np.array([3, 17, 40])
        for iterations in range(8):
            self.assertAlmostEqual(
                backend.marked_probability(64, marked, iterations),
                grover_success_probability(64, 3, iterations))

    def test_statevector_size_limit(self):
        backend = StatevectorBackend(np.random.default_rng(0), max_size=8)
        with self.assertRaises(InputError):
            backend.measure(16, np.array([1]), 1)

    def test_closed_form_sampling(self):
        backend = ClosedFormBackend(np.random.default_rng(1))
        self.assertEqual(
            {backend.measure(4, np.array([3]), 1) for _ in range(50)}, {3})
        seen = {backend.measure(5, np.array([2, 3]), 0) for _ in range(500)}
        self.assertEqual(seen, {1, 2, 3, 4, 5})
        seen = {backend.measure(6, np.array([], dtype=np.int64), 2) for _ in range(200)}
        self.assertEqual(seen, set(range(1, 7)))

    def test_unknown_backend(self):
        with self.assertRaises(InputError):
            make_backend('annealer', 0)

    def test_grover_run_charges_oracle(self):
        predicate = MaskPredicate({2}, 8)
        backend = ClosedFormBackend(np.random.default_rng(0))
        grover_run(8, predicate, 3, backend)
        self.assertEqual(tuple(predicate.ledger.snapshot()), (0, 3, 0))


def test_bbht_nothing_marked():
    for seed in range(5):
        predicate = MaskPredicate(set(), 256)
        outcome = bbht_search(256, predicate, make_backend('closed-form', seed))
        assert outcome.found is None
        rounds = predicate.ledger.verification_reads // 2
        assert outcome.iterations_used + rounds <= 9 * 16
        assert outcome.queries_charged == predicate.ledger.total


def test_bbht_single_item():
    outcome = bbht_search(1, MaskPredicate(set(), 1), make_backend('closed-form', 0))
    assert outcome.found is None
    outcome = bbht_search(1, MaskPredicate({1}, 1), make_backend('closed-form', 0))
    assert outcome.found == 1


def test_bbht_unmarked_schedule():
    predicate = MaskPredicate(set(), 1)
    outcome = bbht_search(1, predicate, make_backend('closed-form', 0))
    assert outcome == (None, 18, 0)
    assert tuple(predicate.ledger.snapshot()) == (0, 0, 18)

    # the whole schedule comes from one batch of 9·√100 uniforms
    backend = make_backend('closed-form', 4)
    reference = np.random.default_rng(4)
    bbht_search(100, MaskPredicate(set(), 100), backend)
    reference.random(90)
    assert backend.rng.random() == reference.random()

    for seed in range(20):
        predicate = MaskPredicate(set(), 100)
        outcome = bbht_search(
            100, predicate, make_backend('closed-form', seed), SearchConfig(cutoff=1))
        rounds = predicate.ledger.verification_reads // 2
        assert rounds >= 1
        assert outcome.iterations_used + rounds <= 10
        assert outcome.queries_charged == predicate.ledger.total


def test_cutoff_below_one():
    with pytest.raises(InputError):
        bbht_search(
            16, MaskPredicate(set(), 16), make_backend('closed-form', 0),
            SearchConfig(cutoff=0.5))
    with pytest.raises(InputError):
        ComparatorConfig('closed-form', cutoff=0.5).validate()
    with pytest.raises(InputError):
        StringComparator(StringTable([[0, 1], [0, 0]], 2), ComparatorConfig(cutoff=0.1))


def test_verified_positions_exhaustive():
    for name in ('closed-form', 'statevector'):
        backend = make_backend(name, 2)
        for size in range(1, 11):
            for mask in range(2 ** size):
                marked = {j for j in range(1, size + 1) if mask >> (j - 1) & 1}
                position = first_one_search(
                    MaskPredicate(marked, size), size, backend).position
                assert position in marked or position == size + 1
                if not marked:
                    assert position == size + 1
                found = bbht_search(size, MaskPredicate(marked, size), backend).found
                assert found is None or found in marked


def test_grover_run_all_marked_is_uniform():
    draws = 10 ** 4
    sigma = math.sqrt(draws * (1 / 16) * (15 / 16))
    for name in ('closed-form', 'statevector'):
        backend = make_backend(name, 8)
        predicate = MaskPredicate(range(1, 17), 16)
        positions = [grover_run(16, predicate, 0, backend).position for _ in range(draws)]
        counts = np.bincount(positions, minlength=17)
        assert counts[0] == 0
        assert np.all(np.abs(counts[1:] - draws / 16) <= 4 * sigma)
        assert predicate.ledger.quantum_oracle_calls == 0


def test_bbht_finds_marked():
    hits = 0
    for seed in range(50):
        predicate = MaskPredicate({700}, 1024)
        outcome = bbht_search(1024, predicate, make_backend('closed-form', seed))
        assert outcome.found in (None, 700)
        hits += outcome.found == 700
        assert predicate.ledger.quantum_oracle_calls <= 9 * 32
    assert hits >= 45


def test_first_one_search():
    found = []
    for seed in range(50):
        predicate = MaskPredicate({5, 9}, 16)
        outcome = first_one_search(predicate, 16, make_backend('closed-form', seed))
        assert outcome.position in (5, 9, 17)
        found.append(outcome.position)
    assert found.count(5) >= 45

    outcome = first_one_search(
        MaskPredicate(set(), 1), 1, make_backend('closed-form', 0))
    assert outcome.position == 2
    with pytest.raises(InputError):
        first_one_search(MaskPredicate(set(), 1), 0, make_backend('closed-form', 0))


class ComparatorTests(unittest.TestCase):

    def test_classical(self):
        table = load_table('abc\nabd\nabc\n')
        outcome = compare_strings(table, ('s', 1), ('s', 2), CLASSICAL)
        self.assertEqual((outcome.sign, outcome.j0_observed), (-1, 3))
        self.assertEqual(outcome.queries_charged, 6)
        outcome = compare_strings(table, ('s', 2), ('s', 1), CLASSICAL)
        self.assertEqual(outcome.sign, 1)
        outcome = compare_strings(table, ('s', 1), ('s', 3), CLASSICAL)
        self.assertEqual((outcome.sign, outcome.j0_observed), (0, 4))

    def test_quantum_charges_no_classical_reads(self):
        table = load_table(['a' * 200 + 'b' * 56, 'a' * 200 + 'c' * 56])
        comparator = StringComparator(table, QUANTUM.with_boost_base(2), rng=4)
        outcome = comparator.compare(('s', 1), ('s', 2))
        self.assertEqual(outcome.sign, -1)
        self.assertEqual(outcome.j0_observed, 201)
        counts = table.ledger_snapshot()
        self.assertEqual(counts.classical_reads, 0)
        self.assertGreater(counts.quantum_oracle_calls, 0)
        self.assertEqual(outcome.queries_charged, counts.total)
        self.assertEqual(comparator.calls, 1)

    def test_equal_strings(self):
        table = load_table(['abab' * 16, 'abab' * 16])
        comparator = StringComparator(table, QUANTUM.with_boost_base(8), rng=0)
        for _ in range(5):
            self.assertEqual(comparator(('s', 1), ('s', 2)), 0)

    def test_statevector(self):
        table = load_table(['x' * 40 + 'a' * 24, 'x' * 40 + 'b' * 24])
        comparator = StringComparator(
            table, ComparatorConfig('statevector', 4), rng=2)
        self.assertEqual(comparator(('s', 2), ('s', 1)), 1)

    def test_error_rate(self):
        rate = comparator_error_rate(256, 100, 50, QUANTUM, seed=1)
        self.assertLessEqual(rate, 0.1)

    def test_config(self):
        self.assertEqual(ComparatorConfig('closed-form', 16).repetitions, 13)
        self.assertEqual(ComparatorConfig('closed-form', 17).repetitions, 16)
        config = ComparatorConfig('closed-form', 5)
        self.assertEqual(config.with_boost_base(100).boost_base, 5)
        self.assertEqual(QUANTUM.with_boost_base(1).boost_base, 2)
        with self.assertRaises(InputError):
            ComparatorConfig('closed-form', growth=1).validate()
        with self.assertRaises(InputError):
            ComparatorConfig('closed-form', boost_base=1).validate()
        with self.assertRaises(InputError):
            ComparatorConfig('annealer').validate()

    def test_quantum_needs_backend(self):
        table = load_table('ab\nba\n')
        with self.assertRaises(InputError):
            compare_strings(table, ('s', 1), ('s', 2), QUANTUM)


class StringTreeTests(unittest.TestCase):

    def test_multiset(self):
        tree = StringTree(cmp)
        node = tree.add(5)
        self.assertEqual(node.payload, 0)
        node.payload += 1
        self.assertIs(tree.add(5), node)
        self.assertEqual(len(tree), 1)
        self.assertIsNone(tree.find(6))

    def test_kinds(self):
        self.assertEqual(StringTree(cmp, kind='set').add(1).payload, 1)
        tree = StringTree(cmp, kind='map')
        tree.put(3, 'three')
        tree.put(3, 'drei')
        self.assertEqual(tree.get(3), 'drei')
        self.assertEqual(tree.get(4, 'none'), 'none')
        with self.assertRaises(ValueError):
            StringTree(cmp, kind='bag')

    def test_balance(self):
        compare = CountingCompare()
        tree = StringTree(compare, kind='set')
        for key in range(200):
            tree.add(key)
        self.assertTrue(tree.is_balanced())
        self.assertLessEqual(tree.height, 1.45 * math.log2(202))
        compare.calls = 0
        tree.find(137)
        self.assertLessEqual(compare.calls, tree.height)

        for key in range(0, 200, 2):
            self.assertTrue(tree.delete(key))
        self.assertFalse(tree.delete(0))
        self.assertTrue(tree.is_balanced())
        self.assertEqual(len(tree), 100)
        self.assertEqual(
            [node.key for node in tree.inorder()], list(range(1, 200, 2)))

    def test_add_comparisons(self):
        self.assertFalse(StringTree(cmp).delete(1))
        compare = CountingCompare()
        tree = StringTree(compare)
        keys = np.random.default_rng(5).permutation(1000)
        for key in keys:
            tree.add(int(key))
        self.assertLessEqual(compare.calls, 3 * 1000 * math.log2(1000))
        self.assertLessEqual(tree.height, 1.44 * math.log2(1002))


class StringHeapTests(unittest.TestCase):

    def test_heapsort(self):
        keys = list(np.random.default_rng(3).integers(0, 50, size=60))
        heap = StringHeap(cmp)
        for key in keys:
            heap.add(key)
        self.assertEqual(heap.peek(), min(keys))
        self.assertEqual(
            [heap.get_min_and_delete() for _ in range(len(keys))], sorted(keys))
        with self.assertRaises(StateError):
            heap.get_min_and_delete()
        with self.assertRaises(StateError):
            heap.peek()

    def test_comparison_bounds(self):
        compare = CountingCompare()
        heap = StringHeap(compare)
        for key in range(100, 0, -1):
            before = compare.calls
            heap.add(key)
            self.assertLessEqual(
                compare.calls - before, math.floor(math.log2(len(heap))))
        while len(heap):
            size = len(heap)
            before = compare.calls
            heap.get_min_and_delete()
            self.assertLessEqual(
                compare.calls - before, 2 * math.floor(math.log2(size)))

    def test_bottom_up_delete(self):
        compare = CountingCompare()
        heap = StringHeap(compare)
        for key in np.random.default_rng(8).permutation(256):
            heap.add(int(key))
        compare.calls = 0
        sizes, keys = [], []
        while len(heap):
            sizes.append(len(heap))
            keys.append(heap.get_min_and_delete())
        self.assertEqual(keys, list(range(256)))
        self.assertLessEqual(
            compare.calls, 1.5 * sum(math.log2(size) for size in sizes))


def test_prefix_tree():
    trie = PrefixTree()
    first = trie.insert((1, 2, 3, 4), 1)
    trie.insert((1, 2, 5, 5), 2)
    assert trie.insert((1, 2, 3, 4), 3) is first
    assert (first.count, first.first) == (2, 1)
    assert len(trie) == 2

    reads = []

    def reader(symbols):
        def read(j):
            reads.append(j)
            return symbols[j - 1]
        return read

    assert trie.walk(reader((1, 2, 5, 5)), 4).first == 2
    assert trie.walk(reader((1, 3, 3, 4)), 4) is None
    assert trie.walk(reader((0, 2, 3, 4)), 4) is None
    assert len(reads) <= 12


class ProblemTests(unittest.TestCase):

    def setUp(self):
        self.table = load_table(
            'ba\nab\nba\ncc\nab\n', requests='ab\naa\ncc\nba\n')

    def test_most_frequent_tie_rule(self):
        result = problems.most_frequent(self.table, CLASSICAL)
        self.assertEqual((result.i_max, result.c_max), (3, 2))
        self.assertEqual(
            problems.brute_force_most_frequent(self.table), (3, 2))
        self.assertTrue(problems.check_most_frequent(self.table, result))

    def test_most_frequent_distinct(self):
        table = load_table('ab\nba\ncc\n')
        result = problems.most_frequent(table, CLASSICAL)
        self.assertEqual((result.i_max, result.c_max), (1, 1))
        self.assertEqual(problems.most_frequent_trie(table)[:2], (1, 1))

    def test_most_frequent_trie(self):
        result = problems.most_frequent_trie(self.table)
        self.assertEqual((result.i_max, result.c_max), (3, 2))
        counts = self.table.ledger_snapshot()
        self.assertEqual(counts.classical_reads, 10)
        self.assertEqual(counts.total, 10)

    def test_sorting(self):
        expected = problems.brute_force_sort(self.table)
        self.assertEqual(expected, (2, 5, 1, 3, 4))
        result = problems.radix_sort(self.table)
        self.assertEqual(result.order, expected)
        self.assertEqual(result.bucket_work, self.table.d * self.table.k)
        self.assertEqual(self.table.ledger_snapshot().classical_reads, 10)
        self.table.ledger_reset()
        result = problems.sort_strings(self.table, CLASSICAL)
        self.assertTrue(problems.check_order(self.table, result.order))
        self.assertFalse(problems.check_order(self.table, (2, 5, 1, 3)))
        self.assertFalse(problems.check_order(self.table, (1, 2, 3, 4, 5)))

    def test_intersection(self):
        expected = (1, 0, 1, 1)
        self.assertEqual(problems.brute_force_intersection(self.table), expected)
        self.assertEqual(problems.intersect_trie(self.table).bits, expected)
        self.assertEqual(
            problems.intersect_via_tree(self.table, CLASSICAL).bits, expected)
        self.assertEqual(
            problems.intersect_via_sort(self.table, CLASSICAL).bits, expected)
        self.assertTrue(problems.check_answers(self.table, expected))

    def test_intersection_needs_requests(self):
        with self.assertRaises(InputError):
            problems.intersect_trie(load_table('ab\n'))
        table = load_table('ab\nba\n', requests='')
        self.assertEqual(problems.intersect_via_tree(table, CLASSICAL).bits, ())

    def test_binary_search_comparisons(self):
        values = [2 * i for i in range(1, 101)]
        compare = CountingCompare()

        def comparator(a, key):
            return compare(values[a[1] - 1], key)

        order = list(range(1, 101))
        bound = math.ceil(math.log2(101))
        for key in (0, 2, 3, 100, 200, 201):
            compare.calls = 0
            found = problems.binary_search_for_string(comparator, order, key)
            self.assertEqual(found, int(key in values))
            self.assertLessEqual(compare.calls, bound)


def test_quantum_problems():
    for seed in range(3):
        table = generate_table(16, 64, 4, seed=seed, distribution='pool', m=8)
        result = problems.most_frequent(table, QUANTUM, rng=seed)
        assert problems.check_most_frequent(table, result)
        result = problems.sort_strings(table, QUANTUM, rng=seed)
        assert problems.check_order(table, result.order)
        for intersect in (problems.intersect_via_tree, problems.intersect_via_sort):
            result = intersect(table, QUANTUM, rng=seed)
            assert problems.check_answers(table, result.bits)
        assert table.ledger_snapshot().classical_reads == 0


class AdversaryTests(unittest.TestCase):

    def test_full_read(self):
        state = adversary.adversary_game(adversary.FullReadStrategy(), 6, 3)
        self.assertEqual(state.verdict, adversary.ALGORITHM_READ_ALL)
        self.assertEqual(state.queries, 18)

    def test_partial_read_loses(self):
        for seed in range(20):
            state = adversary.adversary_game(
                adversary.PartialReadStrategy(seed=seed), 8, 4)
            self.assertEqual(state.verdict, adversary.ALGORITHM_WRONG)
            self.assertTrue(state.consistent(state.completion))
            self.assertFalse(adversary.is_mode(state.completion, state.answer))

    def test_smallest_game(self):
        state = adversary.adversary_game(adversary.PartialReadStrategy(seed=0), 2, 1)
        self.assertEqual(state.queries, 0)
        self.assertEqual(state.verdict, adversary.ALGORITHM_WRONG)

    def test_sampling(self):
        state = adversary.adversary_game(adversary.SamplingStrategy(1.0, seed=1), 4, 4)
        self.assertEqual(state.verdict, adversary.ALGORITHM_READ_ALL)
        state = adversary.adversary_game(adversary.SamplingStrategy(0.5, seed=1), 4, 4)
        self.assertEqual(state.verdict, adversary.ALGORITHM_WRONG)
        self.assertEqual(state.queries, 8)

    def test_bad_strategies(self):
        class OutOfRange:
            def next_move(self, view):
                return (0, 1)

        class Garbage:
            def next_move(self, view):
                return 'x'

        class Stubborn:
            def next_move(self, view):
                return (1, 1)

        for strategy in (OutOfRange(), Garbage(), Stubborn()):
            state = adversary.adversary_game(strategy, 4, 2)
            self.assertEqual(state.verdict, adversary.STRATEGY_ERROR)

    def test_odd_n(self):
        with self.assertRaises(InputError):
            adversary.adversary_game(adversary.FullReadStrategy(), 5, 2)


class BenchTests(unittest.TestCase):

    def test_validate_params(self):
        params = bench.validate_params({'problem': 'sort', 'k': None})
        self.assertEqual((params['n'], params['k'], params['m']), (16, 64, None))
        params = bench.validate_params({'problem': 'intersect-trie', 'n': 10})
        self.assertEqual(params['m'], 10)
        params = bench.validate_params({'problem': 'sort', 'm': 5})
        self.assertIsNone(params['m'])
        for bad in (
            {'problem': 'quicksort'},
            {},
            {'problem': 'compare', 'n': 1},
            {'problem': 'sort', 'growth': 1.0},
            {'problem': 'sort', 'cutoff': 0.5},
            {'problem': 'sort', 'backend': 'annealer'},
        ):
            with self.assertRaises(bench.UsageError):
                bench.validate_params(bad)

    def test_run_is_reproducible(self):
        params = {'problem': 'sort', 'n': 12, 'k': 48, 'seed': 7}
        one = bench.report_dict(bench.run(params), with_time=False)
        two = bench.report_dict(bench.run(params), with_time=False)
        self.assertEqual(json.dumps(one, sort_keys=True), json.dumps(two, sort_keys=True))
        self.assertTrue(one['correct'])
        self.assertEqual(one['boost_base'], 12)
        self.assertEqual(one['repetitions'], 13)
        self.assertEqual(one['classical_reads'], 0)
        self.assertEqual(
            one['total_queries'],
            one['quantum_oracle_calls'] + one['verification_reads'])
        self.assertEqual(one['answer_digest'], answer_digest(one['answer']))

    def test_classical_problems(self):
        report = bench.run({'problem': 'radix-sort', 'n': 8, 'k': 16, 'd': 3})
        self.assertEqual(report.backend, 'classical')
        self.assertIsNone(report.boost_base)
        self.assertEqual(report.total_queries, 8 * 16)
        report = bench.run({
            'problem': 'compare', 'n': 2, 'k': 32, 'backend': 'classical',
            'distribution': 'last-mismatch', 'd': 2})
        self.assertEqual(report.answer, {'sign': -1, 'j0': 32})
        self.assertEqual(report.total_queries, 64)

    def test_run_on_table(self):
        table = load_table('ab\nab\nba\n', requests='ba\nbb\n')
        report = bench.run({'problem': 'intersect-tree', 'seed': 1}, table=table)
        self.assertEqual(report.answer, {'bits': '10'})
        self.assertEqual((report.n, report.m, report.k), (3, 2, 2))
        with self.assertRaises(bench.UsageError):
            bench.run({'problem': 'intersect-sort'}, table=load_table('ab\n'))

    def test_predictions(self):
        self.assertEqual(bench.crossover_ratio(16, 16), 2.0)
        self.assertEqual(bench.predicted_queries('radix-sort', 4, None, 8, 2), 48)
        self.assertEqual(bench.predicted_queries('compare', 2, None, 16, 2, 4), 16)

    def test_point_seed(self):
        self.assertEqual(bench.point_seed(1, 64, 0), bench.point_seed(1, 64, 0))
        self.assertNotEqual(bench.point_seed(1, 64, 0), bench.point_seed(1, 64, 1))

    def test_presets(self):
        presets = bench.load_presets()
        self.assertIn('sort-k', presets)
        preset = presets['sort-k']
        self.assertEqual(preset['problem'], 'sort')
        self.assertEqual(preset['values'][0], 256)
        self.assertIsNone(preset['m'])
        self.assertEqual(presets['intersect-trie-k']['m'], 32)


def test_sweep_fit(tmp_path):
    params = {'problem': 'radix-sort', 'n': 4, 'd': 2, 'seed': 3}
    result = bench.sweep(params, 'k', [16, 2, 4, 8], repeats=10)
    assert len(result.points) == 40
    assert all(point.correct for point in result.points)
    assert [value for value, _ in result.fit.points] == [2, 4, 8, 16]
    assert result.fit.slope == pytest.approx(1.0)
    assert result.fit.residual == pytest.approx(0.0, abs=1e-9)

    path = tmp_path / 'points.csv'
    bench.write_sweep_csv(path, result.points)
    assert bench.read_sweep_csv(path) == result.points


def test_sweep_requires_enough_points():
    params = {'problem': 'radix-sort', 'n': 4}
    with pytest.raises(bench.UsageError):
        bench.sweep(params, 'k', [2, 4, 8], repeats=10)
    with pytest.raises(bench.UsageError):
        bench.sweep(params, 'k', [2, 4, 8, 16], repeats=5)
    with pytest.raises(bench.UsageError):
        bench.sweep(params, 'd', [2, 4, 8, 16], repeats=10)


def test_cli_run(capsys, log):
    assert main([
        'run', '--problem', 'compare', '--n', '2', '--k', '8',
        '--backend', 'classical', '--no-time', '--json'], log=log) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['correct']
    assert report['total_queries'] <= 16
    assert 'wall_time' not in report


def test_cli_run_input(tmp_path, capsys, log):
    path = tmp_path / 'strings.txt'
    path.write_text('abc\nabc\nbca\n', encoding='utf-8')
    assert main([
        'run', '--problem', 'most-frequent-trie', '--input', str(path)], log=log) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['answer'] == {'i_max': 2, 'c_max': 2, 'string': 'abc'}


def test_cli_usage_errors(capsys, log):
    assert main(['run', '--problem', 'compare', '--n', '1'], log=log) == 2
    assert main(['run'], log=log) == 2
    assert main([], log=log) == 2
    assert main(['sweep', '--problem', 'sort'], log=log) == 2
    assert main(['sweep', '--preset', 'nope'], log=log) == 2


def test_cli_sweep(capsys, log):
    assert main([
        'sweep', '--problem', 'radix-sort', '--vary', 'k',
        '--values', '2,4,8,16', '--repeats', '10', '--n', '4',
        '--alphabet', '2', '--json'], log=log) == 0
    fit = json.loads(capsys.readouterr().out)
    assert fit['slope'] == pytest.approx(1.0)
    assert fit['correct'] == fit['runs'] == 40


def test_cli_adversary(capsys, log):
    assert main([
        'adversary', '--strategy', 'full', '--n', '4', '--k', '2',
        '--games', '3', '--json'], log=log) == 0
    assert json.loads(capsys.readouterr().out) == {'algorithm_read_all': 3}


def test_grover_exactness_grid():
    backend = StatevectorBackend(np.random.default_rng(0))
    for size in range(1, 65):
        for marked_count in sorted({0, 1, 2, size // 2, size - 1, size}):
            marked = np.arange(1, marked_count + 1)
            for iterations in range(21):
                assert backend.marked_probability(size, marked, iterations) == pytest.approx(
                    grover_success_probability(size, marked_count, iterations), abs=1e-9)


def test_first_one_contract():
    for j0 in (10, 100, 1000):
        backend = make_backend('closed-form', j0)
        hits = 0
        for _ in range(200):
            outcome = first_one_search(MaskPredicate({j0}, 1024), 1024, backend)
            assert outcome.position in (j0, 1025)
            hits += outcome.position == j0
        assert hits >= 100
    backend = make_backend('closed-form', 0)
    for _ in range(200):
        assert first_one_search(MaskPredicate(set(), 1024), 1024, backend).position == 1025


def test_boosted_comparator_errors():
    config = ComparatorConfig('closed-form', 64)
    assert config.repetitions == 19
    assert comparator_error_rate(1024, 1024, 100, config, seed=5) == 0


def test_skeletons_match_brute_force():
    rng = np.random.default_rng(11)
    for instance in range(30):
        n = int(rng.integers(1, 129))
        m = int(rng.integers(0, 65))
        k = int(rng.integers(1, 65))
        d = int(rng.choice([2, 4, 26]))
        table = generate_table(n, k, d, seed=instance, distribution='pool', m=m)
        result = problems.most_frequent(table, CLASSICAL)
        assert (result.i_max, result.c_max) == problems.brute_force_most_frequent(table)
        assert problems.check_order(table, problems.sort_strings(table, CLASSICAL).order)
        expected = problems.brute_force_intersection(table)
        assert problems.intersect_via_tree(table, CLASSICAL).bits == expected
        assert problems.intersect_via_sort(table, CLASSICAL).bits == expected


def test_adversary_property():
    for seed in range(100):
        state = adversary.adversary_game(
            adversary.PartialReadStrategy(seed=seed), 16, 8)
        assert state.verdict == adversary.ALGORITHM_WRONG
    state = adversary.adversary_game(adversary.FullReadStrategy(), 2, 1)
    assert state.verdict == adversary.ALGORITHM_READ_ALL


def test_classical_comparator_slope():
    params = {
        'problem': 'compare', 'n': 2, 'd': 2, 'backend': 'classical',
        'distribution': 'last-mismatch'}
    result = bench.sweep(params, 'k', [16, 64, 256, 1024], repeats=10)
    assert all(
        point.classical_reads == 2 * point.value for point in result.points)
    assert result.fit.slope == pytest.approx(1.0)


def test_cli_unknown_log_level(log):
    with pytest.raises(SystemExit) as info:
        main(['--log-level', 'LOUD', 'run'], log=log)
    assert info.value.code == 2


def test_quantum_comparator_slope():
    params = {'problem': 'compare', 'n': 2, 'd': 2, 'distribution': 'last-mismatch'}
    result = bench.sweep(params, 'k', [256, 1024, 4096, 16384, 65536], repeats=30)
    assert all(point.classical_reads == 0 for point in result.points)
    assert 0.4 <= result.fit.slope <= 0.6


@pytest.mark.slow
def test_quantum_sort_slope():
    params = {'problem': 'sort', 'n': 8, 'd': 4, 'distribution': 'last-mismatch'}
    result = bench.sweep(params, 'k', [256, 1024, 4096, 16384, 65536], repeats=10)
    assert 0.4 <= result.fit.slope <= 0.6


def test_comparator_agrees_with_exact_sign():
    table = generate_table(201, 64, 4, seed=6, distribution='suffix')
    comparator = StringComparator(table, ComparatorConfig('closed-form', 16), rng=6)
    pairs = [(('s', i), ('s', i + 1)) for i in range(1, 201)]
    wrong = sum(
        comparator(a, b) != problems.brute_force_sign(table, a, b) for a, b in pairs)
    assert wrong <= len(pairs) / 16


def test_intersect_trie_reads():
    for seed in range(10):
        table = generate_table(40, 24, 2, seed=seed, distribution='pool', m=30)
        result = problems.intersect_trie(table)
        assert result.bits == problems.brute_force_intersection(table)
        counts = table.ledger_snapshot()
        assert counts.quantum_oracle_calls == counts.verification_reads == 0
        assert counts.classical_reads <= (table.n + table.m) * table.k


@pytest.mark.slow
@pytest.mark.parametrize(
    'problem', ['most-frequent', 'sort', 'intersect-tree', 'intersect-sort'])
def test_quantum_agreement_at_n100(problem):
    reports = [
        bench.run({
            'problem': problem, 'n': 100, 'k': 16, 'd': 4,
            'distribution': 'pool', 'seed': seed})
        for seed in range(20)]
    boost_base = reports[0].boost_base
    assert boost_base == (100 if problem in ('most-frequent', 'sort') else 200)
    assert sum(report.correct for report in reports) >= (1 - 5 / boost_base) * len(reports)


@pytest.mark.slow
def test_first_one_contract_full():
    for j0 in (10, 100, 1000):
        backend = make_backend('closed-form', j0)
        hits = 0
        for _ in range(10 ** 4):
            outcome = first_one_search(MaskPredicate({j0}, 1024), 1024, backend)
            assert outcome.position in (j0, 1025)
            hits += outcome.position == j0
        assert hits >= 5000
    backend = make_backend('closed-form', 0)
    for _ in range(10 ** 4):
        assert first_one_search(MaskPredicate(set(), 1024), 1024, backend).position == 1025


@pytest.mark.slow
def test_boosted_comparator_errors_full():
    config = ComparatorConfig('closed-form', 64)
    assert comparator_error_rate(1024, 1024, 10 ** 4, config, seed=9) == 0
