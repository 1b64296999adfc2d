"""
Report schema and command parameter validation
"""
import json

from rest_framework import serializers
from rest_framework.utils.encoders import JSONEncoder

from sieve.decider import GEOMETRIC, INCONCLUSIVE, NONGEOMETRIC

VERDICTS = [GEOMETRIC, NONGEOMETRIC, INCONCLUSIVE]


def render_report(data):
    """Canonical JSON text of a report: sorted keys, two-space indent."""
    return json.dumps(data, cls=JSONEncoder, sort_keys=True, indent=2)


class RunManifestSerializer(serializers.Serializer):
    """
    Provenance embedded in every report
    """
    command = serializers.CharField()
    parameters = serializers.DictField()
    version = serializers.CharField()
    catalog_fingerprint = serializers.CharField(allow_null=True)
    wall_time = serializers.FloatField()
    verdict_summary = serializers.CharField()
    cached = serializers.BooleanField(default=False)


class CertificateSerializer(serializers.Serializer):
    twists = serializers.ListField(child=serializers.CharField())
    curve = serializers.CharField()


class DecisionReportSerializer(serializers.Serializer):
    verdict = serializers.ChoiceField(choices=VERDICTS)
    certificate = CertificateSerializer(allow_null=True)
    orbit_size = serializers.IntegerField()
    states_explored = serializers.IntegerField()
    truncated = serializers.BooleanField()
    depth_limit = serializers.IntegerField(allow_null=True)
    twist_set_complete = serializers.BooleanField()

    def validate(self, data):
        if data['verdict'] == GEOMETRIC and not data.get('certificate'):
            raise serializers.ValidationError('A geometric verdict needs a certificate.')
        if data['verdict'] == NONGEOMETRIC and data['truncated']:
            raise serializers.ValidationError('A nongeometric verdict cannot come from a truncated search.')
        return data


class OrbitReportSerializer(serializers.Serializer):
    representative = serializers.ListField(child=serializers.IntegerField())
    size = serializers.IntegerField()
    verdict = serializers.ChoiceField(choices=VERDICTS)
    certificate = CertificateSerializer(allow_null=True)


class ScanReportSerializer(serializers.Serializer):
    group = serializers.CharField()
    order = serializers.IntegerField()
    genus = serializers.IntegerField()
    homs = serializers.IntegerField()
    surjective_only = serializers.BooleanField()
    classes = serializers.IntegerField()
    orbits = serializers.IntegerField()
    verdicts = serializers.DictField(child=serializers.IntegerField())
    exists_nongeometric = serializers.BooleanField()
    witness = serializers.DictField(child=serializers.IntegerField(), allow_null=True)
    orbit_reports = OrbitReportSerializer(many=True)
    twist_set_complete = serializers.BooleanField()
    reduction = serializers.CharField(allow_null=True)


class MinimalityRowSerializer(serializers.Serializer):
    key = serializers.CharField()
    order = serializers.IntegerField()
    digest = serializers.CharField()
    fingerprint = serializers.DictField()
    exists_nongeometric = serializers.BooleanField()
    classes = serializers.IntegerField()
    orbits = serializers.IntegerField()
    cea = serializers.BooleanField(allow_null=True)
    witness = serializers.DictField(allow_null=True)


class IdentityCheckSerializer(serializers.Serializer):
    passed = serializers.BooleanField()
    pairs_checked = serializers.IntegerField()
    exhaustive = serializers.BooleanField()
    counterexample = serializers.JSONField(allow_null=True)


class CassonReportSerializer(serializers.Serializer):
    g = serializers.IntegerField()
    g_prime = serializers.IntegerField()
    base = serializers.IntegerField()
    exponent = serializers.IntegerField()
    order_symbolic = serializers.CharField()
    order = serializers.IntegerField(allow_null=True)


class FamilyOrderSerializer(serializers.Serializer):
    g = serializers.IntegerField()
    base = serializers.IntegerField()
    exponent = serializers.IntegerField()
    order_symbolic = serializers.CharField()
    order = serializers.IntegerField(allow_null=True)


class ReportSerializer(serializers.Serializer):
    """
    Top level of every command's output
    """
    manifest = RunManifestSerializer()
    verdict = serializers.JSONField()
    details = serializers.JSONField(required=False)
    notes = serializers.ListField(child=serializers.CharField(), required=False)
    refuted = serializers.BooleanField()
    refutations = serializers.ListField(child=serializers.JSONField(), required=False)


# Command parameters

class DecideParamsSerializer(serializers.Serializer):
    group = serializers.CharField()
    genus = serializers.IntegerField(min_value=1)
    surjective_only = serializers.BooleanField(default=True)
    budget = serializers.IntegerField(min_value=1, allow_null=True, default=None)
    depth = serializers.IntegerField(min_value=0, allow_null=True, default=None)
    natural = serializers.BooleanField(default=False)
    all_separating = serializers.BooleanField(default=False)

    def validate_group(self, value):
        value = value.strip()
        if not value:
            raise serializers.ValidationError('Group spec cannot be empty.')
        return value


class MinimalityParamsSerializer(serializers.Serializer):
    upto = serializers.IntegerField(min_value=2, max_value=31, default=31)
    only_order = serializers.IntegerField(min_value=2, max_value=31, allow_null=True, default=None)
    append_g2 = serializers.BooleanField(default=False)
    genus = serializers.IntegerField(min_value=1, max_value=2, default=2)

    def validate(self, data):
        if data.get('only_order') and data['only_order'] > data['upto']:
            raise serializers.ValidationError('--only-order must not exceed --upto.')
        return data


class OrdersParamsSerializer(serializers.Serializer):
    g = serializers.IntegerField(min_value=1)


class VerifyParamsSerializer(serializers.Serializer):
    mutate = serializers.ChoiceField(choices=['x1', 'y1', 'x2', 'y2'], allow_null=True, default=None)


class CatalogParamsSerializer(serializers.Serializer):
    max_order = serializers.IntegerField(min_value=2, max_value=31, default=31)


class NielsenParamsSerializer(serializers.Serializer):
    upto = serializers.IntegerField(min_value=1, max_value=31, default=12)
    genus = serializers.IntegerField(min_value=1, max_value=2, default=2)


def validated(serializer_class, data):
    """Run a params serializer and return its validated data, or raise ValidationError."""
    serializer = serializer_class(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data
