from django.core.management.base import CommandError

from psibounds.forms import VerifyForm, form_errors_text
from psibounds.management.base import EXIT_VIOLATION, PsiBoundsCommand
from psibounds.services import VerificationService

COLUMNS = ['field', 'formula', 'x_max', 'max_ratio', 'argmax_x', 'psi_at_argmax', 'bound_at_argmax', 'pass']


class Command(PsiBoundsCommand):
    help = 'Check a bound against the exact psi_K of Q or of a quadratic field'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        field = parser.add_mutually_exclusive_group(required=True)
        field.add_argument('--disc', type=int, default=None, help='Fundamental discriminant D')
        field.add_argument('--rational', action='store_true', help='Check K = Q')
        parser.add_argument('--xmax', type=str, default='1e6', help='Last integer checked, e.g. 1e6')
        parser.add_argument('--formula', type=str, default='eq1.1', help='eq1.1 to eq1.5')
        parser.add_argument('--stride', type=int, default=1, help='Check every stride-th integer')
        parser.add_argument(
            '--record',
            action='store_true',
            help='Store the run as a VerificationRun'
        )

    def handle(self, *args, **options):
        config = self.run_config(options)
        form = VerifyForm(data={
            'disc': options['disc'],
            'rational': options['rational'],
            'xmax': options['xmax'],
            'formula': options['formula'],
            'stride': options['stride'],
        })
        if not form.is_valid():
            raise self.usage_error(form_errors_text(form))
        data = form.cleaned_data

        service = VerificationService()
        result = service.verify(data['field'], data['formula'], data['xmax'], data['stride'] or 1)
        if not result['success']:
            raise self.usage_error(result['error'])

        report = result['report']
        summary = f"{'PASS' if report.passed else 'FAIL'}: max ratio {report.max_ratio:.{config['precision']}g}"
        self.emit(config, [report.to_dict()], COLUMNS, title='Empirical check against the exact psi_K',
                  summary=summary)

        if options['record']:
            run = service.record(result)
            self.stderr.write(f'Recorded verification run {run.pk}')

        if not report.passed:
            raise CommandError(
                f'{report.formula} violated for {report.field} at x = {report.argmax_x:g}: '
                f'|psi - x| = {abs(report.psi_at_argmax - report.argmax_x):g} > {report.bound_at_argmax:g}',
                returncode=EXIT_VIOLATION,
            )
