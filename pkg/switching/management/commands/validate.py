from switching.exceptions import FORMAT_VERSION, ValidationError
from switching.io import graph_from_document, load_network_document, read_json, validate_schedule_document
from switching.network import validate_graph

from ._base import QnetCommand


class Command(QnetCommand):
    help = 'Validate a network file and, optionally, a schedule solved for it.'

    def add_arguments(self, parser):
        parser.add_argument('--input', required=True, help='Network JSON file.')
        parser.add_argument('--schedule', help='Schedule JSON file to check against the network.')
        parser.add_argument('--path-cap', type=int, default=None)

    def run(self, input, schedule=None, **options):
        document = read_json(input)
        graph, _ = graph_from_document(document)
        result = validate_graph(graph)
        report = {'format_version': FORMAT_VERSION, 'network': result.to_dict()}

        if result.ok and schedule:
            network = load_network_document(document, self.solve_options(options).path_cap)
            report['schedule'] = validate_schedule_document(network, read_json(schedule)).to_dict()

        report['ok'] = result.ok and report.get('schedule', {}).get('ok', True)
        if not report['ok']:
            raise ValidationError('Validation failed.', details=report)
        self.emit(report)
