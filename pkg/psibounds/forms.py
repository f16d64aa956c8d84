import json
import re
from pathlib import Path

from django import forms
from django.conf import settings

from .exceptions import DomainError, PsiBoundsError
from .field import from_log_disc, from_scientific, make_profile, validate
from .psi_oracle import QuadraticField
from .theorems import BoundFormula

SCIENTIFIC = re.compile(r'^\s*(\d+(?:\.\d*)?|\.\d+)\s*[eE]\s*([+-]?\d+)\s*$')

FORMAT_CHOICES = [
    ('human', 'Aligned text'),
    ('csv', 'CSV with a header row'),
    ('json', 'One JSON object with a "rows" array'),
]

FORMULA_CHOICES = [(formula.identifier, formula.identifier) for formula in BoundFormula]

CONFIG_KEYS = ('format', 'precision', 'x_cap', 'min_disc', 'strict', 'workers')


def _setting(name, default):
    return getattr(settings, 'PSIBOUNDS_SETTINGS', {}).get(name, default)


def form_errors_text(form) -> str:
    """Flatten form errors into one line for a command error."""
    parts = []
    for field, errors in form.errors.items():
        prefix = '' if field == '__all__' else f'--{field.replace("_", "-")}: '
        parts.extend(f'{prefix}{error}' for error in errors)
    return '; '.join(parts)


def parse_integer(text, name):
    """Integers given as 1000000 or 1e6."""
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise forms.ValidationError(f'{name} must be a number (got {text!r})')
    if not value.is_integer():
        raise forms.ValidationError(f'{name} must be an integer (got {text!r})')
    return int(value)


def parse_field_spec(spec: str, log_disc=None):
    """
    ``n,disc,r1,r2`` with disc as a number or in mEe notation, or ``n,r1,r2``
    together with an explicit natural log of the discriminant.
    """
    parts = [part.strip() for part in spec.split(',')]
    try:
        if log_disc is not None:
            if len(parts) != 3:
                raise forms.ValidationError('with --logdisc give the field as n,r1,r2')
            n, r1, r2 = (int(part) for part in parts)
            return from_log_disc(n, log_disc, r1, r2)

        if len(parts) != 4:
            raise forms.ValidationError(f'expected n,disc,r1,r2 (got {spec!r})')
        n, r1, r2 = int(parts[0]), int(parts[2]), int(parts[3])
        match = SCIENTIFIC.match(parts[1])
        if match:
            return from_scientific(n, float(match.group(1)), int(match.group(2)), r1, r2)
        return make_profile(n, float(parts[1]), r1, r2)
    except ValueError as exc:
        # DomainError is a ValueError as well
        raise forms.ValidationError(str(exc))


class FieldSpecForm(forms.Form):
    """A field profile from the --field / --logdisc flags"""
    field = forms.CharField(
        required=False,
        initial='1,1,1,0',
        help_text="n,disc,r1,r2 with disc like 1.2e749, or n,r1,r2 together with --logdisc"
    )
    logdisc = forms.FloatField(required=False, help_text="Natural log of the absolute discriminant")
    strict = forms.BooleanField(required=False)

    def clean(self):
        cleaned_data = super().clean()
        if self.errors:
            return cleaned_data
        spec = cleaned_data.get('field') or self.fields['field'].initial
        profile = parse_field_spec(spec, cleaned_data.get('logdisc'))
        try:
            cleaned_data['diagnostics'] = validate(profile, strict=cleaned_data.get('strict', False))
        except DomainError as exc:
            raise forms.ValidationError(str(exc))
        cleaned_data['profile'] = profile
        return cleaned_data


class EvalForm(FieldSpecForm):
    """Arguments of one bound evaluation"""
    x = forms.FloatField()
    formula = forms.ChoiceField(choices=FORMULA_CHOICES, initial='eq1.1')
    T = forms.FloatField(required=False)
    kappa = forms.FloatField(required=False)

    def clean_formula(self):
        return BoundFormula.parse(self.cleaned_data['formula'])

    def clean(self):
        cleaned_data = super().clean()
        formula = cleaned_data.get('formula')
        if formula is BoundFormula.THM25 and (cleaned_data.get('T') is None or cleaned_data.get('kappa') is None):
            raise forms.ValidationError('thm2.5 requires explicit --T and --kappa')
        return cleaned_data


class VerifyForm(forms.Form):
    """Field and range for an empirical check against the exact psi_K"""
    disc = forms.IntegerField(required=False)
    rational = forms.BooleanField(required=False)
    xmax = forms.CharField(initial='1e6')
    formula = forms.ChoiceField(choices=FORMULA_CHOICES, initial='eq1.1')
    stride = forms.IntegerField(required=False, min_value=1, initial=1)

    def clean_xmax(self):
        x_max = parse_integer(self.cleaned_data['xmax'], '--xmax')
        if x_max < 4:
            raise forms.ValidationError(f'--xmax must be at least 4 (got {x_max})')
        return x_max

    def clean_formula(self):
        formula = BoundFormula.parse(self.cleaned_data['formula'])
        if formula is BoundFormula.THM25:
            raise forms.ValidationError('thm2.5 depends on T and kappa and cannot be verified on a range')
        return formula

    def clean(self):
        cleaned_data = super().clean()
        disc, rational = cleaned_data.get('disc'), cleaned_data.get('rational')
        if (disc is None) == (not rational):
            raise forms.ValidationError('give exactly one of --disc D and --rational')
        if disc is not None:
            try:
                cleaned_data['field'] = QuadraticField.from_disc(disc)
            except PsiBoundsError as exc:
                raise forms.ValidationError(str(exc))
        else:
            cleaned_data['field'] = None
        return cleaned_data


class RunConfigForm(forms.Form):
    """Output and run options shared by the commands, from flags and an optional JSON config file"""
    format = forms.ChoiceField(choices=FORMAT_CHOICES, required=False)
    precision = forms.IntegerField(required=False, min_value=1, max_value=17)
    x_cap = forms.CharField(required=False)
    min_disc = forms.CharField(required=False, help_text="Path of a minimal-discriminant JSON table")
    strict = forms.BooleanField(required=False)
    workers = forms.IntegerField(required=False, min_value=1)

    @classmethod
    def from_sources(cls, options, config_path=None):
        """Flags win over the config file, which wins over the settings defaults."""
        data = {}
        if config_path:
            data.update(load_config_file(config_path))
        for key in CONFIG_KEYS:
            if options.get(key) is not None:
                data[key] = options[key]
        return cls(data=data)

    def clean_format(self):
        return self.cleaned_data['format'] or 'human'

    def clean_precision(self):
        precision = self.cleaned_data['precision']
        return precision if precision is not None else _setting('PRECISION_DIGITS', 6)

    def clean_x_cap(self):
        x_cap = self.cleaned_data['x_cap']
        if x_cap in (None, ''):
            return None
        x_cap = parse_integer(x_cap, '--x-cap')
        if x_cap < 3:
            raise forms.ValidationError(f'--x-cap must be at least 3 (got {x_cap})')
        return x_cap

    def clean_min_disc(self):
        path = self.cleaned_data['min_disc']
        if not path:
            return None
        if not Path(path).is_file():
            raise forms.ValidationError(f'minimal-discriminant file not found: {path}')
        return path

    def clean_workers(self):
        workers = self.cleaned_data['workers']
        return workers if workers is not None else _setting('WORKERS', 1)


def load_config_file(path):
    try:
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f'cannot read config file {path}: {exc}')
    if not isinstance(data, dict):
        raise DomainError(f'config file {path} must hold a JSON object')
    data = {key.replace('-', '_'): value for key, value in data.items()}
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise DomainError(f'unknown config keys in {path}: {", ".join(unknown)}')
    return data
