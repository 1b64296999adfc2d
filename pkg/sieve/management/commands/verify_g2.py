"""
Reproduce the order-32 example: group invariants, identity checks and the
nongeometric verdict for psi.
Run with: python manage.py verify_g2
"""
from sieve.management.base import SieveCommand
from sieve.pipeline_service import ReproductionService
from sieve.serializers import VerifyParamsSerializer, validated


class Command(SieveCommand):
    help = 'Builds G2 and psi, checks the commutator and intersection identities and decides psi'
    uses_cache = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--mutate',
            choices=['x1', 'y1', 'x2', 'y2'],
            default=None,
            help='Send this generator (and its counterpart in the other handle) to the identity; '
                 'the verdict must then be geometric',
        )

    def run(self, **options):
        params = validated(VerifyParamsSerializer, {'mutate': options['mutate']})
        return ReproductionService.verify_g2(mutate=params['mutate'], cache=self.get_cache(options))
