"""
Serializers for the JSON documents accepted by the gaussamp commands and API.
"""
import math

import numpy as np
from rest_framework import serializers

from .amplitude import AmplitudeSpec
from .conf import HARD_LIMITS
from .exceptions import InvalidInputError
from .matchgraph import as_symmetric
from .vibronic import SurfaceData, VibronicModel, cm1_to_hartree, model_from_surfaces


class ComplexField(serializers.Field):
    """A complex number written as [re, im]; a plain number is read as real."""
    default_error_messages = {
        'invalid': 'Expected a number or an [re, im] pair.',
        'not_finite': 'Complex entries must be finite.',
    }

    def to_internal_value(self, data):
        if isinstance(data, (list, tuple)) and len(data) == 2:
            parts = data
        elif isinstance(data, (int, float)) and not isinstance(data, bool):
            parts = (data, 0.0)
        else:
            self.fail('invalid')
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in parts):
            self.fail('invalid')
        if not all(math.isfinite(v) for v in parts):
            self.fail('not_finite')
        return complex(parts[0], parts[1])

    def to_representation(self, value):
        value = complex(value)
        return {'re': value.real, 'im': value.imag}


def _raise_as_validation(exc, field):
    raise serializers.ValidationError({field: str(exc)}) from exc


class MatrixSerializer(serializers.Serializer):
    """{"n": int, "entries": [[[re, im], ...], ...]}, row-major."""
    n = serializers.IntegerField(min_value=0)
    entries = serializers.ListField(
        child=serializers.ListField(child=ComplexField(), allow_empty=True),
        allow_empty=True,
    )

    def __init__(self, *args, require_symmetric=True, symmetry_tolerance=None, **kwargs):
        self.require_symmetric = require_symmetric
        self.symmetry_tolerance = symmetry_tolerance
        super().__init__(*args, **kwargs)

    def validate(self, attrs):
        n = attrs['n']
        entries = attrs['entries']
        if len(entries) != n or any(len(row) != n for row in entries):
            raise serializers.ValidationError({'entries': f"Expected {n} rows of {n} entries."})
        matrix = np.array(entries, dtype=np.complex128).reshape(n, n)
        if self.require_symmetric:
            try:
                matrix = as_symmetric(matrix, self.symmetry_tolerance)
            except InvalidInputError as exc:
                _raise_as_validation(exc, 'entries')
        attrs['matrix'] = matrix
        return attrs

    def to_domain(self):
        return self.validated_data['matrix']


class AmplitudeSpecSerializer(serializers.Serializer):
    """
    {"l": int, "m": [...], "n": [...], "alpha": [[re, im], ...],
     "U": matrix, "Uprime": matrix, "lambda": [...]}
    """
    l = serializers.IntegerField(min_value=1)  # noqa: E741
    m = serializers.ListField(child=serializers.IntegerField(min_value=0))
    n = serializers.ListField(child=serializers.IntegerField(min_value=0))
    alpha = serializers.ListField(child=ComplexField())
    U = MatrixSerializer(require_symmetric=False)
    Uprime = MatrixSerializer(require_symmetric=False)

    def get_fields(self):
        fields = super().get_fields()
        # 'lambda' is a keyword, so the field is attached here
        fields['lambda'] = serializers.ListField(child=serializers.FloatField(), source='lam')
        return fields

    def validate(self, attrs):
        modes = attrs['l']
        for name in ('m', 'n', 'alpha', 'lam'):
            if len(attrs[name]) != modes:
                key = 'lambda' if name == 'lam' else name
                raise serializers.ValidationError({key: f"Expected {modes} entries, got {len(attrs[name])}."})
        for name in ('U', 'Uprime'):
            if attrs[name]['n'] != modes:
                raise serializers.ValidationError({name: f"Expected a {modes}x{modes} matrix."})
        try:
            attrs['spec'] = AmplitudeSpec(
                attrs['m'], attrs['n'], attrs['alpha'],
                attrs['U']['matrix'], attrs['lam'], attrs['Uprime']['matrix'],
            )
        except InvalidInputError as exc:
            _raise_as_validation(exc, 'non_field_errors')
        return attrs

    def to_domain(self):
        return self.validated_data['spec']


def _float_list(**kwargs):
    return serializers.ListField(child=serializers.FloatField(), required=False, **kwargs)


def _float_matrix():
    return serializers.ListField(child=serializers.ListField(child=serializers.FloatField()), required=False)


class VibronicModelSerializer(serializers.Serializer):
    """
    Either the frequency form (wavenumbers, Duschinsky matrix, dimensionless
    displacement) or the Hessian form (mass-weighted atomic units).
    """
    FREQUENCY_FIELDS = ('frequencies_in_cm1', 'frequencies_final_cm1', 'duschinsky', 'displacement')
    HESSIAN_FIELDS = ('hessian_in', 'hessian_final', 'geometry_in', 'geometry_final')

    frequencies_in_cm1 = _float_list()
    frequencies_final_cm1 = _float_list()
    duschinsky = _float_matrix()
    displacement = _float_list()
    hessian_in = _float_matrix()
    hessian_final = _float_matrix()
    geometry_in = _float_list()
    geometry_final = _float_list()
    e_offset_cm1 = serializers.FloatField(required=False, default=0.0)

    def validate_frequencies_in_cm1(self, value):
        if any(v <= 0 for v in value):
            raise serializers.ValidationError("Frequencies must be positive.")
        return value

    def validate_frequencies_final_cm1(self, value):
        return self.validate_frequencies_in_cm1(value)

    def validate(self, attrs):
        has_frequencies = [name in attrs for name in self.FREQUENCY_FIELDS]
        has_hessians = [name in attrs for name in self.HESSIAN_FIELDS]
        if all(has_frequencies) and not any(has_hessians):
            build = self._from_frequencies
        elif all(has_hessians) and not any(has_frequencies):
            build = self._from_hessians
        else:
            raise serializers.ValidationError(
                "Give either all of " + ', '.join(self.FREQUENCY_FIELDS)
                + " or all of " + ', '.join(self.HESSIAN_FIELDS) + "."
            )
        try:
            attrs['model'] = build(attrs)
        except (InvalidInputError, ValueError) as exc:
            _raise_as_validation(exc, 'non_field_errors')
        return attrs

    @staticmethod
    def _from_frequencies(attrs):
        return VibronicModel.from_wavenumbers(
            attrs['frequencies_in_cm1'], attrs['frequencies_final_cm1'],
            attrs['duschinsky'], attrs['displacement'], attrs['e_offset_cm1'],
        )

    @staticmethod
    def _from_hessians(attrs):
        return model_from_surfaces(
            SurfaceData(attrs['hessian_in'], attrs['geometry_in']),
            SurfaceData(attrs['hessian_final'], attrs['geometry_final']),
            float(cm1_to_hartree(attrs['e_offset_cm1'])),
        )

    def to_domain(self):
        return self.validated_data['model']


def _quanta_list(value):
    try:
        return [int(v) for v in value.split(',')] if value.strip() else []
    except ValueError:
        raise serializers.ValidationError("Expected comma-separated non-negative integers.")


class QuantaField(serializers.CharField):
    """Comma-separated photon or vibrational quanta, e.g. "0,1,0"."""

    def to_internal_value(self, data):
        values = _quanta_list(super().to_internal_value(data))
        if any(v < 0 for v in values):
            raise serializers.ValidationError("Quanta must be non-negative.")
        return values


class RunOptionsSerializer(serializers.Serializer):
    """Query-string options shared by the POST endpoints."""
    threads = serializers.IntegerField(min_value=1, required=False)
    tolerance = serializers.FloatField(min_value=0.0, required=False)
    max_dim = serializers.IntegerField(min_value=0, max_value=HARD_LIMITS['HAFNIAN_MAX_DIM'], required=False)
    verify = serializers.BooleanField(required=False, default=False)
    cutoff = serializers.IntegerField(min_value=1, max_value=HARD_LIMITS['FOCK_CUTOFF'], required=False)
    n = QuantaField(required=False, allow_blank=True)
    m = QuantaField(required=False, allow_blank=True)
    max_quanta = serializers.IntegerField(min_value=0, required=False, default=0)
    threshold = serializers.FloatField(min_value=0.0, required=False, default=0.0)
