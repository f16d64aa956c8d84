from django.core.management.base import BaseCommand, CommandError

from psibounds.exceptions import PsiBoundsError
from psibounds.formatting import render
from psibounds.forms import RunConfigForm, form_errors_text

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3
EXIT_VIOLATION = 4


class PsiBoundsCommand(BaseCommand):
    """Options and error handling shared by the psibounds commands"""

    def add_arguments(self, parser):
        parser.add_argument(
            '--format',
            choices=['human', 'csv', 'json'],
            default=None,
            help='Output format (default human)'
        )
        parser.add_argument(
            '--precision',
            type=int,
            default=None,
            help='Significant digits of printed numbers, 1 to 17'
        )
        parser.add_argument(
            '--config',
            type=str,
            default=None,
            help='JSON file with defaults for format, precision, x_cap, min_disc, strict and workers'
        )

    def run_config(self, options):
        try:
            form = RunConfigForm.from_sources(options, options.get('config'))
        except PsiBoundsError as exc:
            raise self.domain_error(exc)
        if not form.is_valid():
            raise CommandError(form_errors_text(form), returncode=EXIT_USAGE)
        return form.cleaned_data

    def usage_error(self, message):
        return CommandError(message, returncode=EXIT_USAGE)

    def domain_error(self, exc: PsiBoundsError):
        return CommandError(str(exc), returncode=EXIT_USAGE)

    def emit(self, config, rows, columns, title=None, summary=None, **extra):
        self.stdout.write(
            render(rows, columns, config['format'], config['precision'], title=title, summary=summary, **extra),
            ending='',
        )
