"""
Scaling study harness.

Each scenario sweeps one size parameter ``n`` and fixes the others:

    full-growth      |T| = |R| = |S| = n
    fixed-receivers  |T| = |S| = n, |R| = 5
    fixed-switches   |T| = |R| = n, |S| = 5

For every size a batch of random graphs is drawn and solved through the
``solve_instance`` Celery task; rows come back in submission order and are
written by a single CSV writer. Without a worker pool
(``CELERY_TASK_ALWAYS_EAGER``) the tasks run in-process.
"""
import csv
import logging
import math
import re
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO

import numpy as np
from tabulate import tabulate

from .colgen import SolveOptions
from .exceptions import UsageError
from .instance_gen import default_bench_spec, derive_seed, generate_batch
from .io import BENCH_HEADER, network_to_document
from .tasks import solve_instance_task

logger = logging.getLogger(__name__)

FIXED_SIZE = 5
DEFAULT_INSTANCES = 15

SCENARIOS = {
    'full-growth': lambda n: (n, n, n),
    'fixed-receivers': lambda n: (n, FIXED_SIZE, n),
    'fixed-switches': lambda n: (n, n, FIXED_SIZE),
}

# Mean iterations reported for the same sweeps in the literature, for comparison only.
REFERENCE_ITERATIONS = {
    'full-growth': {2: 2.28, 3: 6.45, 4: 12.74, 5: 21.24, 6: 31.30, 7: 43.34, 8: 57.42, 9: 73.78},
    'fixed-receivers': {2: 6.01, 3: 9.40, 4: 12.88, 5: 16.80, 6: 20.48, 7: 24.48, 8: 28.41},
    'fixed-switches': {2: 2.91, 3: 7.00, 4: 13.73, 5: 21.17, 6: 32.19},
}


@dataclass(frozen=True)
class SummaryRow:
    size: int
    solved: int
    failed: int
    mean_iterations: Optional[float]
    mean_links: Optional[float]
    mean_paths: Optional[float]
    reference: Optional[float]


@dataclass(frozen=True)
class BenchResult:
    scenario: str
    rows: tuple[dict, ...]
    summary: tuple[SummaryRow, ...]
    exponent: Optional[float]
    rejections: int


def parse_sizes(text: str) -> list[int]:
    """Accept ``2..6``, ``2-6`` or ``2,3,5``."""
    text = text.strip()
    match = re.fullmatch(r'(\d+)\s*(?:\.\.|-)\s*(\d+)', text)
    try:
        if match:
            lo, hi = int(match.group(1)), int(match.group(2))
            sizes = list(range(lo, hi + 1))
        else:
            sizes = [int(part) for part in text.split(',') if part.strip()]
    except ValueError as exc:
        raise UsageError(f'Cannot parse sizes "{text}".') from exc
    if not sizes or any(size < 1 for size in sizes):
        raise UsageError(f'Sizes must be a non-empty range of positive integers, got "{text}".')
    return sizes


def run_bench(
    scenario: str,
    sizes: Iterable[int],
    instances: int = DEFAULT_INSTANCES,
    seed: int = 0,
    options: Optional[SolveOptions] = None,
    timing: bool = True,
) -> BenchResult:
    if scenario not in SCENARIOS:
        raise UsageError(f'Unknown scenario "{scenario}"; choose from {sorted(SCENARIOS)}.')
    if instances < 1:
        raise UsageError(f'Instances per point must be >= 1, got {instances}.')
    options = options or SolveOptions()

    signatures = []
    rejections = 0
    for size in sizes:
        n_t, n_r, n_s = SCENARIOS[scenario](size)
        spec = default_bench_spec(n_t, n_r, n_s, seed=derive_seed(seed, size, 0))
        batch = generate_batch(spec, instances, options.path_cap)
        rejections += batch.rejections
        for graph, instance_seed in zip(batch.graphs, batch.seeds):
            context = {
                'scenario': scenario,
                'n_transmitters': n_t,
                'n_receivers': n_r,
                'n_switches': n_s,
                'seed': instance_seed,
            }
            signatures.append(solve_instance_task.s(network_to_document(graph), context, options.to_dict(), timing))
        logger.info('Bench %s size %d: %d instances queued (%d rejected).', scenario, size, instances, batch.rejections)

    results = [signature.apply_async() for signature in signatures]
    rows = tuple(result.get() for result in results)
    summary = summarize(scenario, rows)
    return BenchResult(
        scenario=scenario,
        rows=rows,
        summary=summary,
        exponent=fit_exponent(summary),
        rejections=rejections,
    )


def summarize(scenario: str, rows: Iterable[dict]) -> tuple[SummaryRow, ...]:
    """Mean iterations, links and paths per size, over successful rows only."""
    by_size: dict[int, list[dict]] = {}
    for row in rows:
        by_size.setdefault(row['n_transmitters'], []).append(row)

    reference = REFERENCE_ITERATIONS.get(scenario, {})
    summary = []
    for size in sorted(by_size):
        solved = [row for row in by_size[size] if not row.get('error')]

        def mean(key):
            return float(np.mean([row[key] for row in solved])) if solved else None

        summary.append(SummaryRow(
            size=size,
            solved=len(solved),
            failed=len(by_size[size]) - len(solved),
            mean_iterations=mean('iterations'),
            mean_links=mean('links'),
            mean_paths=mean('paths'),
            reference=reference.get(size),
        ))
    return tuple(summary)


def fit_exponent(summary: Iterable[SummaryRow]) -> Optional[float]:
    """Least-squares slope of log(mean iterations) against log(size)."""
    points = [(row.size, row.mean_iterations) for row in summary if row.mean_iterations]
    if len(points) < 2:
        return None
    x = np.log([size for size, _ in points])
    y = np.log([value for _, value in points])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _csv_value(value):
    if isinstance(value, float):
        return repr(value)
    return '' if value is None else value


def write_csv(rows: Iterable[dict], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(BENCH_HEADER)
    for row in rows:
        writer.writerow([_csv_value(row.get(column, '')) for column in BENCH_HEADER])


def format_summary(result: BenchResult) -> str:
    table = tabulate(
        [
            [row.size, row.solved, row.failed, row.mean_iterations, row.mean_links, row.mean_paths, row.reference]
            for row in result.summary
        ],
        headers=['size', 'solved', 'failed', 'mean iterations', 'mean links', 'mean paths', 'reference'],
        floatfmt='.2f',
        missingval='-',
    )
    exponent = 'n/a' if result.exponent is None or math.isnan(result.exponent) else f'{result.exponent:.3f}'
    return (
        f'scenario: {result.scenario}\n{table}\n'
        f'power-law exponent (iterations ~ size^a): {exponent}\n'
        f'rejected graphs: {result.rejections}\n'
    )
