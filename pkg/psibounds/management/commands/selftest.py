from django.core.management.base import CommandError

from psibounds.constants import C
from psibounds.management.base import EXIT_SELFTEST, PsiBoundsCommand
from psibounds.services import SelfTestService


class Command(PsiBoundsCommand):
    help = 'Run the invariant suite: Lambert W, coefficient identities, asymptotic forms, dual psi_K methods'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--corrupt',
            type=str,
            default=None,
            metavar='NAME=VALUE',
            help='Override one stored constant for this run; the suite must then fail'
        )

    def parse_corrupt(self, text):
        name, sep, value = text.partition('=')
        name = name.strip()
        if not sep or name not in C.names():
            raise self.usage_error(f'--corrupt expects NAME=VALUE with a known constant name (got {text!r})')
        try:
            return name, float(value)
        except ValueError:
            raise self.usage_error(f'--corrupt value must be a number (got {value!r})')

    def handle(self, *args, **options):
        config = self.run_config(options)
        corrupt = self.parse_corrupt(options['corrupt']) if options['corrupt'] else None

        result = SelfTestService().run(corrupt=corrupt)
        rows = [{'check': row['check'], 'pass': row['passed'], 'detail': row['detail']} for row in result['rows']]
        passed = len(rows) - len(result['failures'])
        summary = f'{passed}/{len(rows)} checks pass'
        self.emit(config, rows, ['check', 'pass', 'detail'], title='Self-test', summary=summary)

        if not result['success']:
            raise CommandError(f"selftest failed: {', '.join(result['failures'])}", returncode=EXIT_SELFTEST)
        self.stderr.write(self.style.SUCCESS(f"{summary} in {result['processing_time']:.1f}s"))
