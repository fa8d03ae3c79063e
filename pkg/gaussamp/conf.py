"""
Numeric configuration for the gaussamp app.

Values come from django.conf.settings (which reads them from the environment,
see backend/settings.py). Names missing from settings fall back to DEFAULTS so
the library also works under a bare settings module.
"""
from dataclasses import dataclass, fields, replace

from django.conf import settings

from .exceptions import InvalidInputError


DEFAULTS = {
    'HAFNIAN_MAX_DIM': 50,
    'HAFNIAN_CHUNK_SIZE': 65536,
    'HAFNIAN_THREADS': 0,
    'HAFNIAN_COMPENSATED_SUM': False,
    'PERMANENT_MAX_DIM': 20,
    'MATCHING_CAP': 16,
    'MATCHING_CAP_LOOPS': 14,
    'SYMMETRY_TOLERANCE': 1e-12,
    'UNITARITY_TOLERANCE': 1e-10,
    'CONSTRAINT_TOLERANCE': 1e-10,
    'RECONSTRUCTION_TOLERANCE': 1e-8,
    'SINGULARITY_TOLERANCE': 1e-12,
    'DEGENERACY_TOLERANCE': 1e-9,
    'ZETA_ZERO_TOLERANCE': 1e-14,
    'IMAGINARY_TOLERANCE': 1e-10,
    'ORTHOGONALITY_TOLERANCE': 1e-8,
    'HESSIAN_SYMMETRY_TOLERANCE': 1e-10,
    'FOCK_CUTOFF': 18,
    'FOCK_MAX_AMPLITUDES': 2 ** 24,
    'FOCK_LEAKAGE_LIMIT': 1e-4,
    'VERIFY_TOLERANCE': 1e-6,
    'DOUBLE_VACUUM_MODES': True,
}

# Upper bounds that neither the environment nor CLI flags may exceed.
HARD_LIMITS = {
    'HAFNIAN_MAX_DIM': 64,
    'PERMANENT_MAX_DIM': 30,
    'MATCHING_CAP': 18,
    'MATCHING_CAP_LOOPS': 16,
    'FOCK_CUTOFF': 200,
}


def setting(name):
    return getattr(settings, name, DEFAULTS[name])


@dataclass(frozen=True)
class Tolerances:
    symmetry: float
    unitarity: float
    constraint: float
    reconstruction: float
    singularity: float
    degeneracy: float
    zeta_zero: float
    imaginary: float
    orthogonality: float
    hessian_symmetry: float
    verify: float
    leakage: float

    def with_overrides(self, **overrides):
        known = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in overrides.items() if k in known and v is not None})


@dataclass(frozen=True)
class Caps:
    hafnian_dim: int
    permanent_dim: int
    matching: int
    matching_loops: int
    fock_cutoff: int
    fock_amplitudes: int
    chunk_size: int
    threads: int
    compensated_sum: bool
    double_vacuum: bool

    def with_overrides(self, **overrides):
        known = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in overrides.items() if k in known and v is not None})


def get_tolerances():
    return Tolerances(
        symmetry=float(setting('SYMMETRY_TOLERANCE')),
        unitarity=float(setting('UNITARITY_TOLERANCE')),
        constraint=float(setting('CONSTRAINT_TOLERANCE')),
        reconstruction=float(setting('RECONSTRUCTION_TOLERANCE')),
        singularity=float(setting('SINGULARITY_TOLERANCE')),
        degeneracy=float(setting('DEGENERACY_TOLERANCE')),
        zeta_zero=float(setting('ZETA_ZERO_TOLERANCE')),
        imaginary=float(setting('IMAGINARY_TOLERANCE')),
        orthogonality=float(setting('ORTHOGONALITY_TOLERANCE')),
        hessian_symmetry=float(setting('HESSIAN_SYMMETRY_TOLERANCE')),
        verify=float(setting('VERIFY_TOLERANCE')),
        leakage=float(setting('FOCK_LEAKAGE_LIMIT')),
    )


def get_caps():
    return Caps(
        hafnian_dim=min(int(setting('HAFNIAN_MAX_DIM')), HARD_LIMITS['HAFNIAN_MAX_DIM']),
        permanent_dim=min(int(setting('PERMANENT_MAX_DIM')), HARD_LIMITS['PERMANENT_MAX_DIM']),
        matching=min(int(setting('MATCHING_CAP')), HARD_LIMITS['MATCHING_CAP']),
        matching_loops=min(int(setting('MATCHING_CAP_LOOPS')), HARD_LIMITS['MATCHING_CAP_LOOPS']),
        fock_cutoff=min(int(setting('FOCK_CUTOFF')), HARD_LIMITS['FOCK_CUTOFF']),
        fock_amplitudes=int(setting('FOCK_MAX_AMPLITUDES')),
        chunk_size=max(1, int(setting('HAFNIAN_CHUNK_SIZE'))),
        threads=max(0, int(setting('HAFNIAN_THREADS'))),
        compensated_sum=bool(setting('HAFNIAN_COMPENSATED_SUM')),
        double_vacuum=bool(setting('DOUBLE_VACUUM_MODES')),
    )


def check_hard_limit(name, value):
    """Refuse a per-run override above HARD_LIMITS[name]."""
    limit = HARD_LIMITS.get(name)
    if value is not None and limit is not None and value > limit:
        raise InvalidInputError(f"{name} override {value} is above the hard limit {limit}")
    return value
