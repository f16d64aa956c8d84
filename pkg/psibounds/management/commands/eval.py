from psibounds.exceptions import PsiBoundsError
from psibounds.forms import EvalForm, form_errors_text
from psibounds.management.base import PsiBoundsCommand
from psibounds.services import evaluate_bound


class Command(PsiBoundsCommand):
    help = 'Evaluate one explicit bound for |psi_K(x) - x| and print its breakdown'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--field',
            type=str,
            default='1,1,1,0',
            help='n,disc,r1,r2 (disc may be written like 1.2e749); n,r1,r2 with --logdisc'
        )
        parser.add_argument('--logdisc', type=float, default=None, help='Natural log of |disc|')
        parser.add_argument('--x', type=str, required=True, help='Point x, e.g. 1e6')
        parser.add_argument(
            '--formula',
            type=str,
            default='eq1.1',
            help='eq1.1 to eq1.5, or thm2.5 together with --T and --kappa'
        )
        parser.add_argument('--T', type=float, default=None, dest='T', help='Truncation height for thm2.5')
        parser.add_argument('--kappa', type=float, default=None, help='kappa in (0, 2] for thm2.5')
        parser.add_argument(
            '--strict',
            action='store_true',
            default=None,
            help='Treat profile diagnostics as errors'
        )

    def handle(self, *args, **options):
        config = self.run_config(options)
        form = EvalForm(data={
            'field': options['field'],
            'logdisc': options['logdisc'],
            'x': options['x'],
            'formula': options['formula'],
            'T': options['T'],
            'kappa': options['kappa'],
            'strict': config['strict'],
        })
        if not form.is_valid():
            raise self.usage_error(form_errors_text(form))

        data = form.cleaned_data
        profile, formula, x = data['profile'], data['formula'], data['x']
        for diagnostic in data['diagnostics']:
            self.stderr.write(self.style.WARNING(diagnostic))

        try:
            payload = evaluate_bound(profile, formula, x, T=data['T'], kappa=data['kappa'])
        except PsiBoundsError as exc:
            raise self.domain_error(exc)

        bound = payload['bound']
        rows = [{'term': name, 'value': value} for name, value in bound.terms.items()]
        rows.append({'term': 'total', 'value': bound.value})
        extra = {
            'formula': formula.identifier,
            'field': profile.to_dict(),
            'x': x,
            'value': bound.value,
            'params': bound.params,
        }
        selection = payload.get('selection')
        if selection is not None:
            extra['selection'] = selection.to_dict()
        title = f'{formula.identifier} for {profile.label} at x = {x:g}'
        if selection is not None:
            title += f' (T = {selection.T:.{config["precision"]}g})'
        self.emit(config, rows, ['term', 'value'], title=title, **extra)
