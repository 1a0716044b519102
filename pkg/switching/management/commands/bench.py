from switching.bench import DEFAULT_INSTANCES, SCENARIOS, format_summary, parse_sizes, run_bench, write_csv

from ._base import QnetCommand


class Command(QnetCommand):
    help = 'Run a scaling sweep and write one CSV row per solved instance.'

    def add_arguments(self, parser):
        parser.add_argument('--scenario', choices=sorted(SCENARIOS), default='full-growth')
        parser.add_argument('--sizes', default='2..6', help='Range such as 2..6 or a list such as 2,4,6.')
        parser.add_argument('--instances', type=int, default=DEFAULT_INSTANCES)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--output', help='CSV file (default: stdout).')
        parser.add_argument('--no-timing', action='store_true', help='Leave wall_ms empty for byte-identical reruns.')
        self.add_solver_arguments(parser)

    def run(self, scenario, sizes, instances, seed, output=None, no_timing=False, **options):
        result = run_bench(
            scenario,
            parse_sizes(sizes),
            instances=instances,
            seed=seed,
            options=self.solve_options(options),
            timing=not no_timing,
        )
        if output:
            with open(output, 'w', encoding='utf-8', newline='') as stream:
                write_csv(result.rows, stream)
        else:
            write_csv(result.rows, self.stdout)
        self.stderr.write(format_summary(result), ending='')
