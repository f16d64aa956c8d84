from django.core.management.base import CommandError

from psibounds.exceptions import PsiBoundsError
from psibounds.management.base import EXIT_MISMATCH, PsiBoundsCommand
from psibounds.services import TableService

CROSSOVER_COLUMNS = ['table', 'kind', 'n', 'rival', 'computed', 'published', 'delta', 'match']
CMAX_COLUMNS = ['n', 'c_max_reported', 'x_at_max', 'n_points', 'published_c_max', 'published_x_at_max',
                'published_n_points', 'match']

TITLES = {
    'crossover': 'Crossover with the earlier bounds (main bound)',
    'crossover-best': 'Crossover with the earlier bounds (best of the two main bounds)',
    'cmax': 'Largest c over the scan of the minimal discriminant of each degree',
}


class Command(PsiBoundsCommand):
    help = 'Recompute the crossover tables or the c_max table and compare them with the printed values'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--which',
            choices=['crossover', 'crossover-best', 'cmax'],
            default='crossover',
            help='Which table to reproduce'
        )
        parser.add_argument('--x-cap', type=str, default=None, help='Upper end of the crossover search, e.g. 1e7')
        parser.add_argument('--min-disc', type=str, default=None, help='Minimal-discriminant JSON table')
        parser.add_argument('--workers', type=int, default=None, help='Worker processes, 1 to stay in-process')
        parser.add_argument(
            '--record',
            action='store_true',
            help='Store the run as a TableRun'
        )

    def handle(self, *args, **options):
        config = self.run_config(options)
        which = options['which']
        service = TableService(workers=config['workers'], x_cap=config['x_cap'], min_disc_path=config['min_disc'])

        try:
            if which == 'cmax':
                result = service.cmax()
            else:
                result = service.crossover(best_of=which == 'crossover-best')
        except PsiBoundsError as exc:
            raise self.domain_error(exc)

        summary = f"{result['matched']}/{result['total']} rows match"
        columns = CMAX_COLUMNS if which == 'cmax' else CROSSOVER_COLUMNS
        self.emit(config, result['rows'], columns, title=TITLES[which], summary=summary, table=which)

        if options['record']:
            run = service.record(result)
            self.stderr.write(f'Recorded table run {run.pk}')

        if result['error']:
            self.stderr.write(self.style.ERROR(result['error']))
        if not result['success']:
            raise CommandError(f'{which}: {summary}', returncode=EXIT_MISMATCH)
