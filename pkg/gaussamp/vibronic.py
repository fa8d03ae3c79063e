"""
Franck-Condon factors and vibronic spectra in the harmonic approximation.

Frequency-weighted normal coordinates of the two surfaces are related by

    R_final = A R_in + d,   A = Omega_final^(1/2) O_D Omega_in^(-1/2)

and the Doktorov operator W = D(d/sqrt2) U(O_L) S(log l) U(O_R^T), built from
the SVD A = O_L diag(l) O_R^T, satisfies W^dagger R_in W = R_final. Final-state
vibrational levels are therefore |m_final> = W^dagger |m_in>, and

    FCF(n -> m) = <m_final | n_in> = <m| D(d/sqrt2) U(O_L) S(log l) U(O_R^T) |n>

is one Gaussian matrix element, evaluated by the hafnian pipeline.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh, qr
from scipy.special import eval_genlaguerre, gammaln, voigt_profile

from .amplitude import AmplitudePlan, AmplitudeSpec
from .conf import get_tolerances
from .exceptions import ConventionError, InvalidInputError
from .gaussian import doktorov_svd

logger = logging.getLogger(__name__)

CM1_PER_HARTREE = 219474.6313632


def cm1_to_hartree(value):
    return np.asarray(value, dtype=np.float64) / CM1_PER_HARTREE


def hartree_to_cm1(value):
    return np.asarray(value, dtype=np.float64) * CM1_PER_HARTREE


@dataclass(frozen=True, eq=False)
class VibronicModel:
    """
    Two harmonic surfaces: frequencies (atomic units), Duschinsky matrix O_D,
    frequency-weighted displacement d and electronic 0-0 energy.
    """
    omega_in: np.ndarray
    omega_final: np.ndarray
    duschinsky: np.ndarray
    displacement: np.ndarray
    e_offset: float = 0.0

    def __post_init__(self):
        omega_in = np.atleast_1d(np.asarray(self.omega_in, dtype=np.float64))
        omega_final = np.atleast_1d(np.asarray(self.omega_final, dtype=np.float64))
        duschinsky = np.atleast_2d(np.asarray(self.duschinsky, dtype=np.float64))
        displacement = np.atleast_1d(np.asarray(self.displacement, dtype=np.float64))
        modes = omega_in.shape[0]
        if omega_final.shape != (modes,) or duschinsky.shape != (modes, modes) or displacement.shape != (modes,):
            raise InvalidInputError(
                f"Inconsistent model shapes: omega_in {omega_in.shape}, omega_final {omega_final.shape}, "
                f"duschinsky {duschinsky.shape}, displacement {displacement.shape}"
            )
        if np.any(omega_in <= 0) or np.any(omega_final <= 0):
            raise InvalidInputError("All vibrational frequencies must be positive")
        tolerance = get_tolerances().orthogonality
        residual = float(np.max(np.abs(duschinsky @ duschinsky.T - np.eye(modes)), initial=0.0))
        if residual > tolerance:
            raise InvalidInputError(f"Duschinsky matrix is not orthogonal (residual {residual:.3e})")
        object.__setattr__(self, 'omega_in', omega_in)
        object.__setattr__(self, 'omega_final', omega_final)
        object.__setattr__(self, 'duschinsky', duschinsky)
        object.__setattr__(self, 'displacement', displacement)
        object.__setattr__(self, 'e_offset', float(self.e_offset))

    @classmethod
    def from_wavenumbers(cls, omega_in_cm1, omega_final_cm1, duschinsky, displacement, e_offset_cm1=0.0):
        return cls(
            cm1_to_hartree(omega_in_cm1), cm1_to_hartree(omega_final_cm1),
            duschinsky, displacement, float(cm1_to_hartree(e_offset_cm1)),
        )

    @property
    def modes(self):
        return self.omega_in.shape[0]

    def a_matrix(self):
        return np.diag(np.sqrt(self.omega_final)) @ self.duschinsky @ np.diag(1.0 / np.sqrt(self.omega_in))

    def reversed(self):
        """The same pair of surfaces with the roles of initial and final exchanged."""
        return VibronicModel(
            self.omega_final, self.omega_in, self.duschinsky.T,
            -np.linalg.solve(self.a_matrix(), self.displacement), -self.e_offset,
        )

    def rescaled(self, factor):
        """All frequencies and the 0-0 energy multiplied by factor; d unchanged."""
        return VibronicModel(
            self.omega_in * factor, self.omega_final * factor,
            self.duschinsky, self.displacement, self.e_offset * factor,
        )


@dataclass(frozen=True, eq=False)
class SurfaceData:
    """Mass-weighted Hessian and equilibrium geometry of one surface (atomic units)."""
    hessian: np.ndarray
    geometry: np.ndarray

    def __post_init__(self):
        hessian = np.atleast_2d(np.asarray(self.hessian, dtype=np.float64))
        geometry = np.atleast_1d(np.asarray(self.geometry, dtype=np.float64))
        size = geometry.shape[0]
        if hessian.shape != (size, size):
            raise InvalidInputError(f"Hessian shape {hessian.shape} does not match geometry length {size}")
        asymmetry = float(np.max(np.abs(hessian - hessian.T), initial=0.0))
        if asymmetry > get_tolerances().hessian_symmetry:
            raise InvalidInputError(f"Hessian is not symmetric (max asymmetry {asymmetry:.3e})")
        object.__setattr__(self, 'hessian', (hessian + hessian.T) / 2)
        object.__setattr__(self, 'geometry', geometry)


def normal_modes(hessian, tolerances=None):
    """
    Diagonalise H = O diag(omega^2) O^T.

    Frequencies come out ascending. Inside a block of equal frequencies the
    eigenvectors are replaced by a pivoted QR basis of the block's projector,
    and every column is signed so its largest-magnitude entry is positive.

    Raises:
        InvalidInputError: H is not positive definite
    """
    tolerances = tolerances or get_tolerances()
    values, vectors = eigh(np.asarray(hessian, dtype=np.float64))
    if values.size and values.min() <= 0:
        raise InvalidInputError(f"Hessian is not positive definite (smallest eigenvalue {values.min():.3e})")

    start = 0
    while start < values.size:
        stop = start + 1
        while stop < values.size and values[stop] - values[stop - 1] <= tolerances.degeneracy * values[stop]:
            stop += 1
        if stop - start > 1:
            block = vectors[:, start:stop]
            basis, _, _ = qr(block @ block.T, pivoting=True)
            vectors[:, start:stop] = basis[:, :stop - start]
        start = stop

    for col in range(vectors.shape[1]):
        pivot = np.argmax(np.abs(vectors[:, col]))
        if vectors[pivot, col] < 0:
            vectors[:, col] *= -1
    return np.sqrt(values), vectors


def model_from_surfaces(initial, final, e_offset=0.0):
    """
    Build the model from two surfaces.

    O_D = O_final^T O_in and d = Omega_final^(1/2) O_final^T (R0_in - R0_final).
    """
    if initial.geometry.shape != final.geometry.shape:
        raise InvalidInputError(
            f"Surfaces have different dimensions: {initial.geometry.shape} vs {final.geometry.shape}"
        )
    omega_in, o_in = normal_modes(initial.hessian)
    omega_final, o_final = normal_modes(final.hessian)
    duschinsky = o_final.T @ o_in
    displacement = np.sqrt(omega_final) * (o_final.T @ (initial.geometry - final.geometry))
    logger.info(
        "Model from Hessians: %d modes, |d| = %.4f", omega_in.shape[0], float(np.linalg.norm(displacement))
    )
    return VibronicModel(omega_in, omega_final, duschinsky, displacement, e_offset)


def _quanta(values, modes, name):
    values = tuple(int(v) for v in (values if values is not None else (0,) * modes))
    if len(values) != modes or any(v < 0 for v in values):
        raise InvalidInputError(f"{name} must be {modes} non-negative integers, got {values}")
    return values


def fcf_spec(model, n, m):
    """AmplitudeSpec of <m| D(d/sqrt2) U(O_L) S(log l) U(O_R^T) |n>."""
    o_left, values, o_right = doktorov_svd(model.a_matrix())
    return AmplitudeSpec(
        _quanta(m, model.modes, 'm'),
        _quanta(n, model.modes, 'n'),
        model.displacement / np.sqrt(2.0),
        o_left,
        np.log(values),
        o_right.T,
    )


def fcf_plan(model, n, **kwargs):
    """AmplitudePlan for all FCFs out of the initial level n."""
    return AmplitudePlan.from_spec(fcf_spec(model, n, n), **kwargs)


def _real_fcf(value, tolerance=None):
    if tolerance is None:
        tolerance = get_tolerances().imaginary
    if abs(value.imag) > tolerance * (1.0 + abs(value)):
        raise ConventionError(f"Franck-Condon factor {value} has a significant imaginary part")
    return float(value.real)


def fcf(model, n, m, threads=None, tolerances=None, caps=None):
    """
    Franck-Condon factor <m_final | n_in>.

    Args:
        model: VibronicModel
        n: initial-surface quanta per mode
        m: final-surface quanta per mode

    Returns:
        float

    Raises:
        ConventionError: the amplitude came back complex
    """
    plan = fcf_plan(model, n, tolerances=tolerances, caps=caps)
    return _real_fcf(plan.amplitude(_quanta(m, model.modes, 'm'), threads=threads), plan.tolerances.imaginary)


def huang_rhys_fcf(n, m, huang_rhys):
    """
    Squared FCF between levels n and m of two equal-frequency oscillators
    displaced by Huang-Rhys factor S = d^2 / 2.
    """
    low, high = min(n, m), max(n, m)
    gap = high - low
    log_ratio = gammaln(low + 1.0) - gammaln(high + 1.0)
    laguerre = eval_genlaguerre(low, gap, huang_rhys)
    return float(np.exp(-huang_rhys + log_ratio) * huang_rhys ** gap * laguerre ** 2)


@dataclass(frozen=True)
class SpectrumLine:
    energy: float
    intensity: float
    final: tuple

    @property
    def energy_cm1(self):
        return float(hartree_to_cm1(self.energy))


@dataclass(frozen=True)
class SpectrumResult:
    lines: list = field(default_factory=list)
    total_intensity: float = 0.0
    initial: tuple = ()
    max_total_quanta: int = 0


def final_states(modes, max_total):
    """All m with sum(m) <= max_total, by increasing total then lexicographically."""
    def compositions(total, slots):
        if slots == 1:
            yield (total,)
            return
        for head in range(total, -1, -1):
            for tail in compositions(total - head, slots - 1):
                yield (head,) + tail

    for total in range(max_total + 1):
        yield from compositions(total, modes)


def spectrum(model, initial=None, max_total_quanta=0, threshold=0.0, threads=None, tolerances=None, caps=None):
    """
    Stick spectrum from the initial level.

    Every final level m with sum(m) <= max_total_quanta is evaluated;
    energy = E_offset + m.omega_final - n.omega_in and intensity = FCF^2. Lines
    below threshold are left out of `lines` but counted in total_intensity.
    """
    if max_total_quanta < 0:
        raise InvalidInputError(f"max_total_quanta must be non-negative, got {max_total_quanta}")
    initial = _quanta(initial, model.modes, 'initial')
    plan = fcf_plan(model, initial, tolerances=tolerances, caps=caps)
    start_energy = float(np.dot(initial, model.omega_in))

    lines = []
    total = 0.0
    for final in final_states(model.modes, max_total_quanta):
        intensity = _real_fcf(plan.amplitude(final, threads=threads), plan.tolerances.imaginary) ** 2
        total += intensity
        if intensity >= threshold and intensity > 0.0:
            energy = model.e_offset + float(np.dot(final, model.omega_final)) - start_energy
            lines.append(SpectrumLine(energy, intensity, final))
    lines.sort(key=lambda line: (line.energy, line.final))
    logger.info(
        "Spectrum from %s up to %d quanta: %d lines kept, total intensity %.6f",
        initial, max_total_quanta, len(lines), total,
    )
    return SpectrumResult(lines, total, initial, max_total_quanta)


def broaden(lines, grid, sigma, gamma):
    """
    Voigt-broadened line shape on grid (same units as the line energies);
    each line integrates to its intensity.
    """
    grid = np.asarray(grid, dtype=np.float64)
    profile = np.zeros_like(grid)
    for energy, intensity in lines:
        profile += intensity * voigt_profile(grid - energy, sigma, gamma)
    return profile
