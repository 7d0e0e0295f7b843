"""Experiment runs, parameter sweeps and scaling fits.

Seeding: a run with seed `x` spawns two streams from
`numpy.random.SeedSequence(x)`; the first generates the table, the second
drives every quantum subroutine in call order.  A sweep derives the seed of
each `(value, repeat)` point from `SeedSequence([seed, value, repeat])`, so
points can run in any order, in any process, and still reproduce.
"""

import csv
import math
import time
from collections import namedtuple
from multiprocessing import Pool
from pathlib import Path

import numpy as np
from cerberus import Validator

from qstringlab import problems
from qstringlab.compare import BACKEND_NAMES, CLASSICAL, ComparatorConfig, StringComparator
from qstringlab.oracle import DISTRIBUTIONS, generate_table
from qstringlab.search import DEFAULT_CUTOFF, DEFAULT_GROWTH
from qstringlab.util import answer_digest, fmt_time_period, loggable_progress

DEFAULT_REPEATS = 30
MIN_SWEEP_POINTS = 4
MIN_SWEEP_REPEATS = 10
SWEEP_VARIABLES = ('k', 'n')
SWEEP_COLUMNS = (
    'problem', 'vary', 'value', 'seed',
    'classical_reads', 'quantum_oracle_calls', 'verification_reads',
    'correct')
PRESETS_PATH = Path(__file__).parent / 'etc' / 'sweeps.csv'


class UsageError(ValueError):
    """Invalid experiment parameters."""


Outcome = namedtuple('Outcome', 'answer correct comparisons boost_base')
Problem = namedtuple('Problem', 'solve quantum needs_requests min_n')

RunReport = namedtuple('RunReport', [
    'problem', 'n', 'm', 'k', 'd', 'distribution', 'backend', 'boost_base',
    'repetitions', 'seed', 'answer', 'answer_digest', 'correct',
    'classical_reads', 'quantum_oracle_calls', 'verification_reads',
    'total_queries', 'comparisons', 'predicted', 'extra', 'wall_time'])

SweepPoint = namedtuple('SweepPoint', SWEEP_COLUMNS)
ScalingFit = namedtuple('ScalingFit', 'vary points slope intercept residual')
SweepResult = namedtuple('SweepResult', 'points fit')


def _solve_compare(table, config, rng):
    config = config.with_boost_base(table.n)
    comparator = StringComparator(table, config, rng)
    a, b = ('s', 1), ('s', 2)
    outcome = comparator.compare(a, b)
    truth = problems.brute_force_sign(table, a, b)
    return Outcome(
        {'sign': outcome.sign, 'j0': outcome.j0_observed},
        outcome.sign == truth, comparator.calls, config.boost_base)


def _solve_most_frequent(table, config, rng):
    result = problems.most_frequent(table, config, rng)
    return _most_frequent_outcome(
        table, result, config.with_boost_base(table.n).boost_base)


def _solve_most_frequent_trie(table, config, rng):
    return _most_frequent_outcome(
        table, problems.most_frequent_trie(table), None)


def _most_frequent_outcome(table, result, boost_base):
    answer = {
        'i_max': result.i_max,
        'c_max': result.c_max,
        'string': table.decode('s', result.i_max)}
    return Outcome(
        answer, problems.check_most_frequent(table, result),
        result.comparisons, boost_base)


def _solve_sort(table, config, rng):
    result = problems.sort_strings(table, config, rng)
    return Outcome(
        {'order': list(result.order)},
        problems.check_order(table, result.order),
        result.comparisons, config.with_boost_base(table.n).boost_base)


def _solve_radix_sort(table, config, rng):
    result = problems.radix_sort(table)
    return Outcome(
        {'order': list(result.order), 'bucket_work': result.bucket_work},
        problems.check_order(table, result.order), 0, None)


def _intersection_outcome(table, result, boost_base):
    return Outcome(
        {'bits': ''.join(map(str, result.bits))},
        problems.check_answers(table, result.bits),
        result.comparisons, boost_base)


def _solve_intersect_tree(table, config, rng):
    return _intersection_outcome(
        table, problems.intersect_via_tree(table, config, rng),
        config.with_boost_base(table.n + table.m).boost_base)


def _solve_intersect_sort(table, config, rng):
    return _intersection_outcome(
        table, problems.intersect_via_sort(table, config, rng),
        config.with_boost_base(table.n + table.m).boost_base)


def _solve_intersect_trie(table, config, rng):
    return _intersection_outcome(table, problems.intersect_trie(table), None)


PROBLEMS = {
    'compare': Problem(_solve_compare, True, False, 2),
    'most-frequent': Problem(_solve_most_frequent, True, False, 1),
    'most-frequent-trie': Problem(_solve_most_frequent_trie, False, False, 1),
    'sort': Problem(_solve_sort, True, False, 1),
    'radix-sort': Problem(_solve_radix_sort, False, False, 1),
    'intersect-tree': Problem(_solve_intersect_tree, True, True, 1),
    'intersect-sort': Problem(_solve_intersect_sort, True, True, 1),
    'intersect-trie': Problem(_solve_intersect_trie, False, True, 1),
}

RUN_PARAMS_SCHEMA = {
    'problem': {'type': 'string', 'allowed': list(PROBLEMS), 'required': True},
    'n': {'type': 'integer', 'min': 1, 'default': 16},
    'm': {'type': 'integer', 'min': 0, 'nullable': True, 'default': None},
    'k': {'type': 'integer', 'min': 1, 'default': 64},
    'd': {'type': 'integer', 'min': 1, 'default': 4},
    'distribution': {
        'type': 'string', 'allowed': list(DISTRIBUTIONS), 'default': 'uniform'},
    'backend': {
        'type': 'string', 'allowed': list(BACKEND_NAMES),
        'default': 'closed-form'},
    'seed': {'type': 'integer', 'min': 0, 'default': 0},
    'boost_base': {'type': 'integer', 'min': 2, 'nullable': True, 'default': None},
    'growth': {'type': 'number', 'min': 1, 'default': DEFAULT_GROWTH},
    'cutoff': {'type': 'number', 'min': 1, 'default': DEFAULT_CUTOFF},
}

PRESET_SCHEMA = {
    'name': {'type': 'string', 'empty': False},
    'problem': {'type': 'string', 'allowed': list(PROBLEMS)},
    'vary': {'type': 'string', 'allowed': list(SWEEP_VARIABLES)},
    'values': {
        'type': 'list', 'minlength': 1, 'schema': {'type': 'integer', 'min': 1},
        'coerce': lambda s: [int(v) for v in s.split(';') if v.strip()]},
    'backend': {'type': 'string', 'allowed': list(BACKEND_NAMES)},
    'n': {'type': 'integer', 'min': 1, 'coerce': int},
    'm': {
        'type': 'integer', 'min': 0, 'nullable': True,
        'coerce': lambda s: int(s) if str(s).strip() else None},
    'k': {'type': 'integer', 'min': 1, 'coerce': int},
    'alphabet': {'type': 'integer', 'min': 1, 'coerce': int},
    'distribution': {'type': 'string', 'allowed': list(DISTRIBUTIONS)},
    'repeats': {'type': 'integer', 'min': 1, 'coerce': int},
}


def validate_params(params):
    """Normalise run parameters against `RUN_PARAMS_SCHEMA`."""
    validator = Validator(RUN_PARAMS_SCHEMA)
    document = validator.normalized(
        {key: val for key, val in params.items() if val is not None})
    if document is None or not validator.validate(document):
        raise UsageError(f'invalid run parameters: {validator.errors}')
    if document['growth'] <= 1:
        raise UsageError(f"growth factor must exceed 1: {document['growth']}")
    problem = PROBLEMS[document['problem']]
    if document['n'] < problem.min_n:
        raise UsageError(
            f"{document['problem']} needs n >= {problem.min_n}")
    if problem.needs_requests and document.get('m') is None:
        document['m'] = document['n']
    if not problem.needs_requests:
        document['m'] = None
    return document


def predicted_queries(problem, n, m, k, d, repetitions=None):
    """Leading term of the claimed query complexity, constants set to 1."""
    log_n = math.log2(max(n, 2))
    per_compare = 2 * k if repetitions is None else repetitions * math.sqrt(k)
    if problem == 'compare':
        return per_compare
    elif problem in ('most-frequent', 'sort'):
        return n * log_n * per_compare
    elif problem in ('intersect-tree', 'intersect-sort'):
        return (n + (m or 0)) * log_n * per_compare
    elif problem == 'most-frequent-trie':
        return n * k
    elif problem == 'radix-sort':
        return (n + d) * k
    elif problem == 'intersect-trie':
        return (n + (m or 0)) * k
    else:
        raise UsageError(f'unknown problem: {problem!r}')


def crossover_ratio(n, k):
    """`log₂ n / k^¼`; the comparator-based containers beat a trie when small."""
    return math.log2(max(n, 2)) / k ** 0.25


def run(params, table=None):
    """Execute one problem once and return its `RunReport`.

    Without `table` a table is generated from the parameters; with one, its
    dimensions replace `n`, `m`, `k` and `d`.
    """
    params = validate_params(params)
    problem = PROBLEMS[params['problem']]
    table_stream, algorithm_stream = np.random.SeedSequence(params['seed']).spawn(2)
    if table is None:
        table = generate_table(
            params['n'], params['k'], params['d'], table_stream,
            params['distribution'], params['m'])
    else:
        if problem.needs_requests and not table.has_requests:
            raise UsageError(f"{params['problem']} needs a request sequence")
        if table.n < problem.min_n:
            raise UsageError(f"{params['problem']} needs n >= {problem.min_n}")
        params.update(
            n=table.n, k=table.k, d=table.d,
            m=table.m if problem.needs_requests else None,
            distribution=None)
    backend = params['backend'] if problem.quantum else CLASSICAL
    config = ComparatorConfig(
        backend, params['boost_base'], params['growth'], params['cutoff'])
    rng = np.random.default_rng(algorithm_stream)

    table.ledger_reset()
    start = time.perf_counter()
    outcome = problem.solve(table, config, rng)
    wall_time = time.perf_counter() - start
    counts = table.ledger_snapshot()

    repetitions = (
        config._replace(boost_base=outcome.boost_base).repetitions
        if config.is_quantum and outcome.boost_base else None)
    return RunReport(
        problem=params['problem'],
        n=table.n,
        m=params['m'],
        k=table.k,
        d=table.d,
        distribution=params['distribution'],
        backend=backend,
        boost_base=outcome.boost_base if config.is_quantum else None,
        repetitions=repetitions,
        seed=params['seed'],
        answer=outcome.answer,
        answer_digest=answer_digest(outcome.answer),
        correct=bool(outcome.correct),
        classical_reads=counts.classical_reads,
        quantum_oracle_calls=counts.quantum_oracle_calls,
        verification_reads=counts.verification_reads,
        total_queries=counts.total,
        comparisons=outcome.comparisons,
        predicted=predicted_queries(
            params['problem'], table.n, params['m'], table.k, table.d,
            repetitions),
        extra={'crossover_ratio': crossover_ratio(table.n, table.k)},
        wall_time=wall_time)


def report_dict(report, with_time=True):
    data = report._asdict()
    if not with_time:
        del data['wall_time']
    return data


def point_seed(seed, value, repeat):
    state = np.random.SeedSequence([seed, value, repeat]).generate_state(1)
    return int(state[0])


def _sweep_task(task):
    params, vary, value, repeat = task
    seed = point_seed(params['seed'], value, repeat)
    report = run(dict(params, seed=seed, **{vary: value}))
    return SweepPoint(
        problem=report.problem,
        vary=vary,
        value=value,
        seed=seed,
        classical_reads=report.classical_reads,
        quantum_oracle_calls=report.quantum_oracle_calls,
        verification_reads=report.verification_reads,
        correct=int(report.correct))


def fit_scaling(vary, points):
    """Least-squares line through `(log value, log mean total queries)`."""
    totals = {}
    for point in points:
        totals.setdefault(point.value, []).append(
            point.classical_reads
            + point.quantum_oracle_calls
            + point.verification_reads)
    means = [(value, float(np.mean(totals[value]))) for value in sorted(totals)]
    if len(means) < MIN_SWEEP_POINTS:
        raise UsageError(
            f'need at least {MIN_SWEEP_POINTS} sweep values, got {len(means)}')
    if any(mean <= 0 for _, mean in means):
        raise UsageError('cannot fit a sweep point without queries')
    x = np.log([value for value, _ in means])
    y = np.log([mean for _, mean in means])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    if not math.isfinite(slope):
        raise UsageError('degenerate sweep: slope is not finite')
    return ScalingFit(vary, tuple(means), float(slope), float(intercept), residual)


def sweep(params, vary, values, repeats=DEFAULT_REPEATS, workers=1, log=None):
    """Run a problem across `values` of `vary`, `repeats` seeds per value.

    Returns the raw points and the fitted scaling law.
    """
    if vary not in SWEEP_VARIABLES:
        raise UsageError(f'can only vary {" or ".join(SWEEP_VARIABLES)}: {vary!r}')
    values = sorted(set(values))
    if len(values) < MIN_SWEEP_POINTS:
        raise UsageError(
            f'need at least {MIN_SWEEP_POINTS} distinct sweep values, got {len(values)}')
    if any(value < 1 for value in values):
        raise UsageError('sweep values must be positive')
    if repeats < MIN_SWEEP_REPEATS:
        raise UsageError(f'need at least {MIN_SWEEP_REPEATS} repeats, got {repeats}')
    checked = validate_params(dict(params, **{vary: values[0]}))
    # unset m stays unset, so request counts follow n when n is swept
    params = dict(params, problem=checked['problem'], seed=checked['seed'])
    tasks = [
        (params, vary, value, repeat)
        for value in values
        for repeat in range(repeats)]

    if log:
        log.info(
            'sweeping %s over %s=%s (%d runs, %d workers)',
            params['problem'], vary, values, len(tasks), workers)
    start = time.perf_counter()
    if workers > 1:
        with Pool(workers) as pool:
            points = list(loggable_progress(pool.imap(_sweep_task, tasks)))
    else:
        points = list(loggable_progress(map(_sweep_task, tasks)))
    fit = fit_scaling(vary, points)
    if log:
        for value, mean in fit.points:
            log.debug('%s=%s: mean queries %.1f', vary, value, mean)
        log.info(
            'slope %.3f (residual %.3f) after %s',
            fit.slope, fit.residual,
            fmt_time_period(time.perf_counter() - start))
    return SweepResult(points, fit)


def write_sweep_csv(path, points):
    with open(path, 'w', encoding='utf-8', newline='') as f:
        wtr = csv.writer(f)
        wtr.writerow(SWEEP_COLUMNS)
        wtr.writerows(points)


def read_sweep_csv(path):
    int_columns = set(SWEEP_COLUMNS) - {'problem', 'vary'}
    with open(path, encoding='utf-8', newline='') as f:
        rdr = csv.DictReader(f)
        return [
            SweepPoint(**{
                col: int(row[col]) if col in int_columns else row[col]
                for col in SWEEP_COLUMNS})
            for row in rdr]


def load_presets(path=PRESETS_PATH):
    """Read named sweep presets, validated against `PRESET_SCHEMA`."""
    validator = Validator(PRESET_SCHEMA, require_all=True)
    presets = {}
    with open(path, encoding='utf-8', newline='') as f:
        for lineno, row in enumerate(csv.DictReader(f), 2):
            document = validator.normalized(row)
            if document is None or not validator.validate(document):
                raise UsageError(f'{path}:{lineno}: {validator.errors}')
            presets[document['name']] = document
    return presets
