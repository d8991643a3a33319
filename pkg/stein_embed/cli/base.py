"""
Base class for report-producing subcommands.

A subcommand declares ``name``, ``help``, its own click parameters in
``add_arguments`` and fills a Report in ``handle``. The base class adds the
shared options, resolves seed and workers, maps library errors to exit
codes and prints the report.

Exit codes: 0 all checks passed, 1 some check failed, 2 usage error.
"""
import logging
import time
from datetime import datetime, timezone
from typing import Any, Dict, List

import click
import numpy as np

from stein_embed.cli.report import Report
from stein_embed.config import settings
from stein_embed.exceptions import NoConvergence, NotPSD, Singular

logger = logging.getLogger(__name__)

# options that change presentation only and stay out of report parameters
PRESENTATION_OPTIONS = ('format', 'no_timestamp', 'verbose', 'workers')


class ReportCommand:
    name = ''
    help = ''
    uses_mc = True

    def add_arguments(self) -> List[click.Parameter]:
        return []

    def handle(self, report: Report, **options):
        raise NotImplementedError('subclasses of ReportCommand must provide a handle() method')

    # ------------------------------------------------------------------

    def shared_arguments(self) -> List[click.Parameter]:
        params = []
        if self.uses_mc:
            params += [
                click.Option(['--samples'], type=click.IntRange(min=2), default=settings.DEFAULT_SAMPLES,
                             show_default=True, help='Monte Carlo sample count'),
                click.Option(['--seed'], type=int, default=None,
                             help='RNG seed (default: STEIN_EMBED_SEED or 42)'),
                click.Option(['--workers'], type=int, default=None,
                             help='Worker threads; <= 0 means one per CPU'),
            ]
        params += [
            click.Option(['--format', 'format'], type=click.Choice(['json', 'csv']), default='json',
                         show_default=True, help='Report format'),
            click.Option(['--no-timestamp'], is_flag=True,
                         help='Omit wall clock and timestamp (byte-identical reruns)'),
            click.Option(['--verbose', '-v'], is_flag=True, help='Debug logging on stderr'),
        ]
        return params

    def as_click(self) -> click.Command:
        return click.Command(
            self.name,
            params=self.add_arguments() + self.shared_arguments(),
            callback=self.run,
            help=self.help,
        )

    def run(self, **options):
        if options.get('verbose'):
            logging.getLogger('stein_embed').setLevel(logging.DEBUG)
        if self.uses_mc:
            options['seed'] = settings.resolve_seed(options.get('seed'))
        started = time.perf_counter()

        report = Report(command=self.name, parameters=self.report_parameters(options),
                        seed=options.get('seed'))
        try:
            self.handle(report, **options)
        except (NotPSD, Singular, NoConvergence) as e:
            logger.error(f'{self.name}: {e}')
            raise click.ClickException(str(e))
        except (ValueError, LookupError) as e:
            message = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
            raise click.UsageError(str(message))

        if not options.get('no_timestamp'):
            report.wall_clock = round(time.perf_counter() - started, 6)
            report.timestamp = datetime.now(timezone.utc).isoformat()
        click.echo(report.render(options.get('format', 'json')), nl=False)

        failed = [record.name for record in report.checks if not record.passed]
        if failed:
            logger.warning(f'{self.name}: {len(failed)} check(s) failed: {", ".join(failed)}')
            click.get_current_context().exit(1)

    def report_parameters(self, options: Dict[str, Any]) -> Dict[str, Any]:
        return {key: value for key, value in options.items()
                if key not in PRESENTATION_OPTIONS and key != 'seed'}

    # ------------------------------------------------------------------
    # helpers for subclasses

    @staticmethod
    def mc_tolerance(stderr, target) -> float:
        """k standard errors plus a rounding floor relative to the target."""
        return (settings.SIGMA_TOLERANCE * float(stderr)
                + settings.IDENTITY_TOLERANCE * max(1.0, abs(float(target))))

    def mc_close(self, report: Report, name: str, target, mean, stderr):
        return report.close(name, float(target), float(mean), self.mc_tolerance(stderr, target),
                            provenance='mc', stderr=float(stderr))

    def mc_matrix_close(self, report: Report, prefix: str, target: np.ndarray, est):
        d = target.shape[0]
        mean = np.asarray(est.mean).reshape(d, d)
        se = np.asarray(est.stderr).reshape(d, d)
        for i in range(d):
            for j in range(i, d):
                self.mc_close(report, f'{prefix}[{i + 1}][{j + 1}]', target[i, j], mean[i, j], se[i, j])
