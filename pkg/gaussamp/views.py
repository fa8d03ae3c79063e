import logging

import numba as nb
from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response

from .amplitude import amplitude as pipeline_amplitude
from .conf import check_hard_limit, get_caps, get_tolerances
from .exceptions import CapExceededError, GaussAmpError, InvalidInputError
from .fockoracle import verify_amplitude
from .hafnian import haf_fast, lhaf_fast
from .matchgraph import permanent as ryser_permanent
from .serializers import (
    AmplitudeSpecSerializer,
    ComplexField,
    MatrixSerializer,
    RunOptionsSerializer,
    VibronicModelSerializer,
)
from .vibronic import fcf as franck_condon, spectrum as stick_spectrum

logger = logging.getLogger(__name__)


def _complex(value):
    return ComplexField().to_representation(value)


def _invalid(errors):
    return Response({'error': 'Invalid input', 'details': errors}, status=status.HTTP_400_BAD_REQUEST)


def _error_response(exc, what):
    if isinstance(exc, InvalidInputError):
        logger.warning("%s rejected: %s", what, exc)
        code = status.HTTP_400_BAD_REQUEST
    elif isinstance(exc, CapExceededError):
        logger.warning("%s refused: %s", what, exc)
        code = status.HTTP_413_REQUEST_ENTITY_TOO_LARGE
    else:
        logger.error("%s failed: %s", what, exc, exc_info=True)
        code = status.HTTP_422_UNPROCESSABLE_ENTITY
    return Response({'error': str(exc), 'type': type(exc).__name__}, status=code)


def _options(request):
    options = RunOptionsSerializer(data=request.query_params)
    if not options.is_valid():
        return None, options.errors
    return options.validated_data, None


def _caps(options, limit_name='HAFNIAN_MAX_DIM', cap_name='hafnian_dim'):
    max_dim = check_hard_limit(limit_name, options.get('max_dim'))
    return get_caps().with_overrides(**{cap_name: max_dim, 'threads': options.get('threads')})


@api_view(['GET'])
def health(request):
    """Liveness probe with the active caps."""
    caps = get_caps()
    return Response({
        'status': 'ok',
        'hafnian_max_dim': caps.hafnian_dim,
        'permanent_max_dim': caps.permanent_dim,
        'fock_cutoff': caps.fock_cutoff,
        'threads': caps.threads or nb.config.NUMBA_NUM_THREADS,
    }, status=status.HTTP_200_OK)


def _matrix_endpoint(request, kernel, what):
    options, errors = _options(request)
    if errors:
        return _invalid(errors)
    serializer = MatrixSerializer(data=request.data, symmetry_tolerance=options.get('tolerance'))
    if not serializer.is_valid():
        return _invalid(serializer.errors)
    try:
        caps = _caps(options)
        value = kernel(serializer.to_domain(), threads=options.get('threads'), cap=caps.hafnian_dim)
    except GaussAmpError as exc:
        return _error_response(exc, what)
    return Response({'value': _complex(value)}, status=status.HTTP_200_OK)


@api_view(['POST'])
def lhaf(request):
    """Loop hafnian of a symmetric matrix document."""
    return _matrix_endpoint(request, lhaf_fast, 'lhaf')


@api_view(['POST'])
def haf(request):
    return _matrix_endpoint(request, haf_fast, 'haf')


@api_view(['POST'])
def permanent(request):
    """Permanent of a square (not necessarily symmetric) matrix document."""
    options, errors = _options(request)
    if errors:
        return _invalid(errors)
    serializer = MatrixSerializer(data=request.data, require_symmetric=False)
    if not serializer.is_valid():
        return _invalid(serializer.errors)
    try:
        caps = _caps(options, 'PERMANENT_MAX_DIM', 'permanent_dim')
        value = ryser_permanent(serializer.to_domain(), cap=caps.permanent_dim)
    except GaussAmpError as exc:
        return _error_response(exc, 'permanent')
    return Response({'value': _complex(value)}, status=status.HTTP_200_OK)


@api_view(['POST'])
def amplitude(request):
    """
    <m| D(alpha) U(U) S(lam) U(U') |n> for an amplitude-spec document.
    ?verify=true adds the Fock-oracle value and the difference.
    """
    options, errors = _options(request)
    if errors:
        return _invalid(errors)
    serializer = AmplitudeSpecSerializer(data=request.data)
    if not serializer.is_valid():
        return _invalid(serializer.errors)
    spec = serializer.to_domain()
    try:
        caps = _caps(options)
        value = pipeline_amplitude(spec, threads=options.get('threads'), caps=caps)
        payload = {'value': _complex(value)}
        if options['verify']:
            reference, difference = verify_amplitude(
                spec, value, cutoff=options.get('cutoff'), tolerance=options.get('tolerance'),
            )
            payload.update({'oracle': _complex(reference), 'difference': difference})
    except GaussAmpError as exc:
        return _error_response(exc, 'amplitude')
    return Response(payload, status=status.HTTP_200_OK)


def _model_run(request):
    options, errors = _options(request)
    if errors:
        return None, None, None, _invalid(errors)
    serializer = VibronicModelSerializer(data=request.data)
    if not serializer.is_valid():
        return None, None, None, _invalid(serializer.errors)
    tolerances = get_tolerances().with_overrides(imaginary=options.get('tolerance'))
    return serializer.to_domain(), options, tolerances, None


@api_view(['POST'])
def fcf(request):
    """Franck-Condon factor <m_final|n_in>; quanta as ?n=0,1&m=2,0 (default all zero)."""
    model, options, tolerances, failure = _model_run(request)
    if failure:
        return failure
    try:
        value = franck_condon(
            model, options.get('n') or None, options.get('m') or None,
            threads=options.get('threads'), tolerances=tolerances, caps=_caps(options),
        )
    except GaussAmpError as exc:
        return _error_response(exc, 'fcf')
    return Response({'value': value}, status=status.HTTP_200_OK)


@api_view(['POST'])
def spectrum(request):
    model, options, tolerances, failure = _model_run(request)
    if failure:
        return failure
    try:
        result = stick_spectrum(
            model, options.get('n') or None, options['max_quanta'], options['threshold'],
            threads=options.get('threads'), tolerances=tolerances, caps=_caps(options),
        )
    except GaussAmpError as exc:
        return _error_response(exc, 'spectrum')
    return Response({
        'initial': list(result.initial),
        'max_quanta': result.max_total_quanta,
        'total_intensity': result.total_intensity,
        'lines': [
            {'energy_cm1': line.energy_cm1, 'intensity': line.intensity, 'm': list(line.final)}
            for line in result.lines
        ],
    }, status=status.HTTP_200_OK)
