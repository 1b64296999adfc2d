"""
Normal-form check for surjections onto cyclic groups.
Run with: python manage.py nielsen_check [--upto 12]
"""
from sieve.management.base import SieveCommand
from sieve.pipeline_service import ReproductionService
from sieve.serializers import NielsenParamsSerializer, validated


class Command(SieveCommand):
    help = 'Checks that every surjection onto Z_n reaches (generator, e, e, e) under twists'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--upto', type=int, default=12, help='Largest cyclic group order')
        parser.add_argument('--genus', type=int, default=2)

    def run(self, **options):
        params = validated(NielsenParamsSerializer, {'upto': options['upto'], 'genus': options['genus']})
        return ReproductionService.nielsen_check(**params)
