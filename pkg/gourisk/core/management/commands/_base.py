import json

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.forms import PRESET_CHOICES, RunParametersForm
from core.models import Run
from core.specs import parse_spec, read_spec
from levy.exceptions import SpecError
from simulator.paths import PathConfig

EXIT_INPUT_ERROR = 1
EXIT_UNDETERMINED = 2


class RuinCommand(BaseCommand):
    """Shared plumbing: spec loading, parameter forms, JSON on stdout.

    Exit codes are 0 on a decision, 1 on bad input and 2 when the answer
    is undetermined.
    """

    requires_system_checks = []
    simulation_arguments = False

    @property
    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]

    def add_arguments(self, parser):
        parser.add_argument(
            'spec', nargs='?',
            help='Process spec: a JSON file, - for stdin, or the JSON text',
        )
        parser.add_argument(
            '--preset', choices=[name for name, _ in PRESET_CHOICES],
            help='Use one of the worked examples instead of a spec',
        )
        parser.add_argument('--c', type=float, help='Preset drift c')
        parser.add_argument(
            '--lambda', dest='lam', type=float, help='Preset jump rate',
        )
        parser.add_argument(
            '--record', action='store_true',
            help='Store the run in the database',
        )
        if self.simulation_arguments:
            self.add_simulation_arguments(parser)

    def add_simulation_arguments(self, parser):
        parser.add_argument('--z', type=float, default=0.0)
        parser.add_argument('--horizon', type=float)
        parser.add_argument('--step', type=float)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--paths', type=int)
        parser.add_argument(
            '--eps', type=float,
            help='Truncation of density jumps shorter than eps',
        )
        parser.add_argument(
            '--antithetic', action='store_true',
            help='Negate the Gaussian draws of every other path',
        )

    def fail(self, message, returncode=EXIT_INPUT_ERROR):
        raise CommandError(message, returncode=returncode)

    def load_spec(self, options):
        if options['preset']:
            doc = {'preset': options['preset']}
            for key, option in (('c', 'c'), ('lambda', 'lam')):
                if options[option] is not None:
                    doc[key] = options[option]
        elif options['spec'] is None:
            self.fail('give a process spec or --preset')
        else:
            try:
                doc = read_spec(options['spec'])
            except OSError as error:
                self.fail(f'cannot read {options["spec"]}: {error.strerror}')
            except SpecError as error:
                self.fail(f'invalid spec: {error}')
        try:
            return parse_spec(doc)
        except SpecError as error:
            self.fail(f'invalid spec: {error}')

    def load_parameters(self, options):
        """Validated (z, PathConfig, number of paths)."""
        fields = ('z', 'horizon', 'step', 'paths', 'seed', 'eps')
        form = RunParametersForm(data={
            name: options[name] for name in fields
            if options.get(name) is not None
        })
        if not form.is_valid():
            name, errors = next(iter(form.errors.items()))
            self.fail(f'invalid parameter --{name}: {errors[0]}')
        data = form.cleaned_data
        try:
            cfg = PathConfig.from_settings(
                horizon=data['horizon'],
                step=data['step'],
                seed=data['seed'],
                truncation_eps=data['eps'],
                antithetic=options['antithetic'],
            )
        except SpecError as error:
            self.fail(f'invalid parameter: {error}')
        n = data['paths'] or settings.GOU['DEFAULT_PATHS']
        return data['z'] or 0.0, cfg, n

    def emit(self, doc):
        self.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False))

    def finish(self, options, spec, result, exit_code=0, seed=None,
               message='the answer is undetermined'):
        self.emit(result)
        if options.get('record'):
            Run.record(self.command_name, spec, result, exit_code, seed)
        if exit_code:
            self.fail(message, exit_code)
