"""
Seeded random raw network graphs for the scaling study.

Graphs are layered: transmitters feed switches, switches feed receivers, and
switch-to-switch edges only run from an earlier to a later switch, so the
switch subgraph is acyclic.

Random stream contract: numpy's PCG64 bit generator seeded with the
integer seed. Draws happen in this order, each presence test being one
``random()`` draw followed, only if the edge is kept, by one
``uniform(lo, hi)`` attenuation draw:

    1. tx->sw for every transmitter, then every switch (index order)
    2. sw->sw for every ordered switch pair i < j
    3. sw->rx for every switch, then every receiver

Batch instance ``i``, attempt ``a`` is seeded with the first 64-bit word of
``SeedSequence([seed, i, a])``.
"""
import logging
from dataclasses import asdict, dataclass, replace

import numpy as np

from .exceptions import DegenerateSpecError, UsageError, ValidationError
from .network import DEFAULT_PATH_CAP, Edge, NetworkGraph, Node, NodeKind, enumerate_paths

logger = logging.getLogger(__name__)

REJECTION_WINDOW = 100
SEED_LIMIT = 2 ** 64


@dataclass(frozen=True)
class GenSpec:
    n_transmitters: int
    n_receivers: int
    n_switches: int
    p_ts: float = 0.5
    p_ss: float = 0.3
    p_sr: float = 0.5
    attenuation_lo: float = 1.0
    attenuation_hi: float = 10.0
    seed: int = 0

    def __post_init__(self):
        problems = []
        for name in ('n_transmitters', 'n_receivers', 'n_switches'):
            if getattr(self, name) < 0:
                problems.append(f'{name} must be >= 0')
        for name in ('p_ts', 'p_ss', 'p_sr'):
            if not 0.0 <= getattr(self, name) <= 1.0:
                problems.append(f'{name} must lie in [0, 1]')
        if not 0.0 < self.attenuation_lo <= self.attenuation_hi:
            problems.append('attenuation range must satisfy 0 < lo <= hi')
        if not 0 <= self.seed < SEED_LIMIT:
            problems.append('seed must be an unsigned 64-bit integer')
        if problems:
            raise ValidationError('Invalid generator spec: ' + '; '.join(problems) + '.', details=problems)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'GenSpec':
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        return cls(**known)


@dataclass(frozen=True)
class BatchResult:
    graphs: tuple[NetworkGraph, ...]
    seeds: tuple[int, ...]
    rejections: int


def default_bench_spec(n_transmitters: int, n_receivers: int, n_switches: int, seed: int = 0) -> GenSpec:
    return GenSpec(n_transmitters, n_receivers, n_switches, seed=seed)


def generate(spec: GenSpec) -> NetworkGraph:
    rng = np.random.Generator(np.random.PCG64(spec.seed))

    transmitters = [Node(i, NodeKind.TRANSMITTER, f'tx{i + 1}') for i in range(spec.n_transmitters)]
    offset = spec.n_transmitters
    switches = [Node(offset + i, NodeKind.SWITCH, f'sw{i + 1}') for i in range(spec.n_switches)]
    offset += spec.n_switches
    receivers = [Node(offset + i, NodeKind.RECEIVER, f'rx{i + 1}') for i in range(spec.n_receivers)]

    edges = []

    def maybe_connect(source: Node, target: Node, probability: float):
        if rng.random() < probability:
            attenuation = float(rng.uniform(spec.attenuation_lo, spec.attenuation_hi))
            edges.append(Edge(source, target, attenuation))

    for tx in transmitters:
        for sw in switches:
            maybe_connect(tx, sw, spec.p_ts)
    for i, upstream in enumerate(switches):
        for downstream in switches[i + 1:]:
            maybe_connect(upstream, downstream, spec.p_ss)
    for sw in switches:
        for rx in receivers:
            maybe_connect(sw, rx, spec.p_sr)

    return NetworkGraph(nodes=tuple(transmitters + switches + receivers), edges=tuple(edges))


def derive_seed(seed: int, index: int, attempt: int) -> int:
    return int(np.random.SeedSequence([seed, index, attempt]).generate_state(1, dtype=np.uint64)[0])


def has_link(graph: NetworkGraph, path_cap: int = DEFAULT_PATH_CAP) -> bool:
    return len(enumerate_paths(graph, path_cap)) > 0


def generate_batch(spec: GenSpec, count: int, path_cap: int = DEFAULT_PATH_CAP) -> BatchResult:
    """
    Draw ``count`` graphs that each have at least one realizable link.

    Fails with ``DegenerateSpecError`` once ``REJECTION_WINDOW`` attempts in
    a row are rejected (a rejection rate above 99%).
    """
    if count < 1:
        raise UsageError(f'Instance count must be >= 1, got {count}.')

    graphs, seeds = [], []
    rejections = 0
    for index in range(count):
        attempt = 0
        while True:
            instance_seed = derive_seed(spec.seed, index, attempt)
            graph = generate(replace(spec, seed=instance_seed))
            if has_link(graph, path_cap):
                graphs.append(graph)
                seeds.append(instance_seed)
                break
            rejections += 1
            attempt += 1
            if attempt >= REJECTION_WINDOW:
                raise DegenerateSpecError(
                    f'{REJECTION_WINDOW} consecutive graphs without a realizable link; '
                    f'the generator settings are degenerate.',
                    details={'spec': spec.to_dict(), 'instance': index},
                )
    if rejections:
        logger.info('Generated %d graphs with %d rejections.', count, rejections)
    return BatchResult(graphs=tuple(graphs), seeds=tuple(seeds), rejections=rejections)
