from switching.colgen import solve
from switching.io import load_network, schedule_to_document

from ._base import QnetCommand


class Command(QnetCommand):
    help = 'Compute the optimal time-sharing schedule of a network file.'

    def add_arguments(self, parser):
        parser.add_argument('--input', required=True, help='Network JSON file.')
        parser.add_argument('--output', help='Schedule JSON file (default: stdout).')
        self.add_solver_arguments(parser)

    def run(self, input, output=None, **options):
        solve_options = self.solve_options(options)
        network = load_network(input, solve_options.path_cap)
        report = solve(network.graph, network.links, solve_options)
        self.emit(schedule_to_document(report, network.links, network.sha256), output)
