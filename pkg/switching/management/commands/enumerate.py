from switching.exceptions import FORMAT_VERSION
from switching.io import load_network
from switching.oracle import enumerate_configurations

from ._base import QnetCommand


class Command(QnetCommand):
    help = 'Count (and optionally list) the TR-paths and network configurations of a small network.'

    def add_arguments(self, parser):
        parser.add_argument('--input', required=True, help='Network JSON file.')
        parser.add_argument('--output', help='Listing JSON file (default: stdout).')
        parser.add_argument('--list', action='store_true', dest='full_listing', help='Include every path and configuration.')
        parser.add_argument('--path-cap', type=int, default=None)

    def run(self, input, output=None, full_listing=False, **options):
        network = load_network(input, self.solve_options(options).path_cap)
        universe = enumerate_configurations(network.graph, network.catalog)

        document = {
            'format_version': FORMAT_VERSION,
            'paths': len(network.catalog),
            'links': len(network.links),
            'configurations': len(universe),
            'universe_lower_bound_ok': len(universe) >= len(network.catalog) + 1,
        }
        if full_listing:
            document['path_list'] = [[n.label for n in path.nodes] for path in network.catalog]
            document['configuration_list'] = [
                [[n.label for n in path.nodes] for path in config.paths] for config in universe
            ]
        self.emit(document, output)
