import logging
import time

from celery import shared_task

from .colgen import SolveOptions, solve
from .exceptions import QnetError
from .io import load_network_document

logger = logging.getLogger(__name__)


@shared_task(bind=True, name='switching.solve_instance')
def solve_instance_task(self, network_document: dict, context: dict, options: dict, timing: bool = True):
    """
    Solve one bench instance and return its CSV row as a dict.

    Steps:
      1. Rebuild and validate the network from its JSON document.
      2. Run column generation with the given options.
      3. Report sizes, iterations, pool size, wall time and objective.

    Solver failures do not raise: the row carries the error kind instead, so
    one bad instance never aborts a sweep.
    """
    row = dict(context)
    started = time.perf_counter()
    try:
        solve_options = SolveOptions(**options)
        network = load_network_document(network_document, solve_options.path_cap)
        row.update(edges=len(network.graph.edges), links=len(network.links), paths=len(network.catalog))
        report = solve(network.graph, network.links, solve_options)
        row.update(
            iterations=report.iterations,
            pool_size=report.pool_size,
            objective=report.objective,
            error='',
        )
    except QnetError as exc:
        logger.warning('Bench instance %s failed: %s', context.get('seed'), exc)
        row['error'] = exc.kind
    row['wall_ms'] = round((time.perf_counter() - started) * 1000.0, 3) if timing else ''
    return row
