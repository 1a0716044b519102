from switching.exceptions import ParseError
from switching.instance_gen import GenSpec, generate_batch
from switching.io import network_to_document, read_json

from ._base import QnetCommand


class Command(QnetCommand):
    help = 'Generate a random layered network file.'

    def add_arguments(self, parser):
        parser.add_argument('--spec', help='GenSpec JSON file; flags override its fields.')
        parser.add_argument('--transmitters', type=int, dest='n_transmitters')
        parser.add_argument('--receivers', type=int, dest='n_receivers')
        parser.add_argument('--switches', type=int, dest='n_switches')
        parser.add_argument('--p-ts', type=float, dest='p_ts')
        parser.add_argument('--p-ss', type=float, dest='p_ss')
        parser.add_argument('--p-sr', type=float, dest='p_sr')
        parser.add_argument('--attenuation-lo', type=float, dest='attenuation_lo')
        parser.add_argument('--attenuation-hi', type=float, dest='attenuation_hi')
        parser.add_argument('--seed', type=int)
        parser.add_argument('--output', help='Network JSON file (default: stdout).')

    def run(self, spec=None, output=None, **options):
        fields = read_json(spec) if spec else {}
        fields.update({k: options[k] for k in GenSpec.__dataclass_fields__ if options.get(k) is not None})
        missing = [k for k in ('n_transmitters', 'n_receivers', 'n_switches') if k not in fields]
        if missing:
            raise ParseError(f'Generator settings are missing {missing}.')
        gen_spec = GenSpec.from_dict(fields)

        batch = generate_batch(gen_spec, 1)
        document = network_to_document(
            batch.graphs[0],
            extra={'generator': {**gen_spec.to_dict(), 'instance_seed': batch.seeds[0]}},
        )
        self.emit(document, output)
