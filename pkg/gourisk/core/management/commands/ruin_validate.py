from core.validation import SUITES, Validator, format_table

from ._base import RuinCommand


class Command(RuinCommand):
    help = 'Run the acceptance criteria and print a pass/fail table and JSON'

    def add_arguments(self, parser):
        parser.add_argument('--suite', choices=tuple(SUITES), default='all')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument(
            '--quick', action='store_true',
            help='Divide Monte Carlo sample sizes by 10',
        )
        parser.add_argument(
            '--record', action='store_true',
            help='Store the run in the database',
        )

    def handle(self, *args, **options):
        if not 0 <= options['seed'] < 2 ** 64:
            self.fail(
                'invalid parameter --seed: must be a 64-bit unsigned integer'
            )
        results = Validator(options['seed'], options['quick']).run(
            options['suite']
        )
        self.stdout.write(format_table(results))
        passed = all(result.passed for result in results)
        summary = {
            'suite': options['suite'],
            'seed': options['seed'],
            'quick': options['quick'],
            'passed': passed,
            'criteria': [result.to_json() for result in results],
        }
        self.finish(
            options, {'suite': options['suite']}, summary,
            exit_code=0 if passed else 1, seed=options['seed'],
            message='some acceptance criteria failed',
        )
