"""
Order formulas: the homology-cover construction against the G_k family.
Run with: python manage.py orders --g 2
"""
from sieve.management.base import SieveCommand
from sieve.pipeline_service import ReproductionService
from sieve.serializers import OrdersParamsSerializer, validated


class Command(SieveCommand):
    help = 'Prints the covering-construction order exponent next to the order of G_k'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--g', type=int, required=True, help='Genus')

    def run(self, **options):
        params = validated(OrdersParamsSerializer, {'g': options['g']})
        return ReproductionService.orders(params['g'])
