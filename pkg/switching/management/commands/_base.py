import json
import logging

from django.core.management.base import BaseCommand, CommandError

from switching.colgen import SolveOptions
from switching.exceptions import QnetError
from switching.io import dump_json, write_text

logger = logging.getLogger('switching.commands')


class QnetCommand(BaseCommand):
    """
    Base for the switching commands.

    Subclasses implement ``run``. A ``QnetError`` is written to stdout as a
    JSON error object and turned into ``CommandError`` carrying the error's
    exit code.
    """

    def add_solver_arguments(self, parser):
        parser.add_argument('--max-iterations', type=int, default=None)
        parser.add_argument('--path-cap', type=int, default=None)
        parser.add_argument('--pricing-budget', type=int, default=None)
        parser.add_argument('--tolerance', type=float, default=None)

    def solve_options(self, options) -> SolveOptions:
        return SolveOptions.from_settings(
            max_iterations=options.get('max_iterations'),
            path_cap=options.get('path_cap'),
            pricing_budget=options.get('pricing_budget'),
            tolerance=options.get('tolerance'),
        )

    def emit(self, document: dict, output=None):
        text = dump_json(document)
        if output:
            write_text(text, output)
        else:
            self.stdout.write(text, ending='')

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except QnetError as exc:
            logger.error('%s failed: %s', self.__class__.__module__.rsplit('.', 1)[-1], exc.message)
            self.stdout.write(json.dumps(exc.to_dict(), ensure_ascii=False))
            raise CommandError(exc.message, returncode=exc.exit_code) from exc

    def run(self, **options):
        raise NotImplementedError
