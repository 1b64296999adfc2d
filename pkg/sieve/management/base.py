"""
Shared plumbing for the sieve management commands: JSON on stdout, logs on
stderr, and the exit-code contract (0 success, 1 refutation, 2 budget or
parse error).
"""
import logging

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from sieve.cache_service import ResultCacheService
from sieve.exceptions import (
    BudgetExceededError,
    DegenerateFamilyError,
    GroupSpecError,
)
from sieve.serializers import ReportSerializer, render_report

logger = logging.getLogger(__name__)

EXIT_REFUTED = 1
EXIT_USAGE = 2


class SieveCommand(BaseCommand):
    """
    Subclasses implement ``run(**options)`` returning a report dict.
    """
    uses_cache = False

    def add_arguments(self, parser):
        parser.add_argument('--jobs', type=int, default=None, help='Worker pool size (default: SIEVE_JOBS)')
        if self.uses_cache:
            parser.add_argument('--cache-dir', default=None, help='Cache directory (overrides SCC_SIEVE_CACHE)')
            parser.add_argument('--no-cache', action='store_true', help='Neither read nor write cached results')

    def get_cache(self, options):
        if not self.uses_cache:
            return None
        return ResultCacheService(location=options.get('cache_dir'), enabled=not options.get('no_cache'))

    def get_jobs(self, options):
        from django.conf import settings

        return options.get('jobs') or settings.SIEVE_JOBS

    def run(self, **options):
        raise NotImplementedError('subclasses of SieveCommand must provide a run() method')

    def handle(self, *args, **options):
        try:
            report = self.run(**options)
        except ValidationError as e:
            raise CommandError(f"invalid arguments: {e.detail}", returncode=EXIT_USAGE)
        except (BudgetExceededError, GroupSpecError, DegenerateFamilyError) as e:
            logger.error(str(e))
            raise CommandError(str(e), returncode=EXIT_USAGE)

        serializer = ReportSerializer(data=report)
        serializer.is_valid(raise_exception=True)
        self.stdout.write(render_report(report))
        if report['refuted']:
            raise CommandError(
                f"{len(report['refutations'])} refutation(s): {report['manifest']['verdict_summary']}",
                returncode=EXIT_REFUTED)
