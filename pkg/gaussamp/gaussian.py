"""
Gaussian unitaries as Heisenberg-picture maps on annihilation operators.

A GaussianMap (E, F, delta) for the unitary W means

    W^dagger a_i W = sum_j E[i, j] a_j + F[i, j] a_j^dagger + delta_i

Elementary constructors cover displacement, single- and two-mode squeezing and
passive (linear-optical) unitaries. compose() multiplies unitaries,
bloch_messiah() splits a displacement-free map into passive . squeeze .
passive, and doktorov_factorize() builds the displacement-rotation-squeeze-
rotation product that realises an affine change of frequency-weighted
coordinates R -> A R + d.
"""
import logging
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.linalg import eigh, null_space, svd

from .conf import get_tolerances
from .exceptions import (
    DecompositionError,
    GaussianConstraintError,
    InvalidInputError,
    NonUnitaryMatrixError,
    SingularMatrixError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GaussianMap:
    E: np.ndarray
    F: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        e_matrix = np.atleast_2d(np.asarray(self.E, dtype=np.complex128))
        f_matrix = np.atleast_2d(np.asarray(self.F, dtype=np.complex128))
        delta = np.atleast_1d(np.asarray(self.delta, dtype=np.complex128))
        modes = e_matrix.shape[0]
        if e_matrix.shape != (modes, modes) or f_matrix.shape != (modes, modes) or delta.shape != (modes,):
            raise InvalidInputError(
                f"Inconsistent GaussianMap shapes: E {e_matrix.shape}, F {f_matrix.shape}, delta {delta.shape}"
            )
        object.__setattr__(self, 'E', e_matrix)
        object.__setattr__(self, 'F', f_matrix)
        object.__setattr__(self, 'delta', delta)

    @classmethod
    def identity(cls, modes):
        return cls(np.eye(modes), np.zeros((modes, modes)), np.zeros(modes))

    @property
    def modes(self):
        return self.E.shape[0]

    def constraint_residual(self):
        """Largest violation of E E^dagger - F F^dagger = I and E F^T = (E F^T)^T."""
        commutator = self.E @ self.E.conj().T - self.F @ self.F.conj().T - np.eye(self.modes)
        ef = self.E @ self.F.T
        return max(float(np.max(np.abs(commutator), initial=0.0)), float(np.max(np.abs(ef - ef.T), initial=0.0)))

    def validate(self, tolerance=None):
        if tolerance is None:
            tolerance = get_tolerances().constraint
        residual = self.constraint_residual()
        if residual > tolerance:
            raise GaussianConstraintError(
                f"Map violates the bosonic constraints by {residual:.3e} (tolerance {tolerance:.1e})"
            )
        return self

    def max_difference(self, other):
        return max(
            float(np.max(np.abs(self.E - other.E), initial=0.0)),
            float(np.max(np.abs(self.F - other.F), initial=0.0)),
            float(np.max(np.abs(self.delta - other.delta), initial=0.0)),
        )

    def to_quadrature(self):
        """
        Real symplectic form acting on (R_1..R_L, P_1..P_L).

        Returns:
            tuple: (S, shift) with W^dagger (R, P) W = S (R, P) + shift
        """
        plus = self.E + self.F
        minus = self.E - self.F
        symplectic = np.block([
            [plus.real, -minus.imag],
            [plus.imag, minus.real],
        ])
        shift = np.sqrt(2.0) * np.concatenate([self.delta.real, self.delta.imag])
        return symplectic, shift


@dataclass(frozen=True, eq=False)
class BlochMessiahFactors:
    """U(U) S(lam) U(Uprime) with lam >= 0 sorted in descending order."""
    U: np.ndarray
    lam: np.ndarray
    Uprime: np.ndarray

    @property
    def modes(self):
        return len(self.lam)

    def as_map(self):
        return compose_chain([passive_map(self.U), squeeze_map(self.lam), passive_map(self.Uprime)])


def displacement_map(alpha):
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.complex128))
    modes = alpha.shape[0]
    return GaussianMap(np.eye(modes), np.zeros((modes, modes)), alpha)


def squeeze_map(lam):
    lam = np.atleast_1d(np.asarray(lam, dtype=np.float64))
    return GaussianMap(np.diag(np.cosh(lam)), np.diag(np.sinh(lam)), np.zeros(lam.shape[0]))


def two_mode_squeeze_map(t, i, j, modes):
    """Map of exp(t (a_i^dagger a_j^dagger - a_i a_j)) on a register of `modes` modes."""
    if i == j:
        raise InvalidInputError(f"Two-mode squeezing needs distinct modes, got {i} and {j}")
    if not (0 <= i < modes and 0 <= j < modes):
        raise InvalidInputError(f"Modes ({i}, {j}) out of range for {modes} modes")
    e_matrix = np.eye(modes, dtype=np.complex128)
    f_matrix = np.zeros((modes, modes), dtype=np.complex128)
    e_matrix[i, i] = e_matrix[j, j] = np.cosh(t)
    f_matrix[i, j] = f_matrix[j, i] = np.sinh(t)
    return GaussianMap(e_matrix, f_matrix, np.zeros(modes))


def check_unitary(matrix, tolerance=None, name='U'):
    if tolerance is None:
        tolerance = get_tolerances().unitarity
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {matrix.shape}")
    residual = float(np.max(np.abs(matrix @ matrix.conj().T - np.eye(matrix.shape[0])), initial=0.0))
    if residual > tolerance:
        raise NonUnitaryMatrixError(f"{name} is not unitary: max |U U^dagger - I| = {residual:.3e}")
    return matrix


def passive_map(unitary, tolerance=None):
    unitary = check_unitary(unitary, tolerance)
    modes = unitary.shape[0]
    return GaussianMap(unitary, np.zeros((modes, modes)), np.zeros(modes))


def compose(first, second):
    """
    Map of the operator product W1 W2, where first is the map of W1 and
    second the map of W2.
    """
    if first.modes != second.modes:
        raise InvalidInputError(f"Cannot compose maps on {first.modes} and {second.modes} modes")
    e1, f1, d1 = first.E, first.F, first.delta
    e2, f2, d2 = second.E, second.F, second.delta
    return GaussianMap(
        e1 @ e2 + f1 @ f2.conj(),
        e1 @ f2 + f1 @ e2.conj(),
        e1 @ d2 + f1 @ d2.conj() + d1,
    )


def compose_chain(maps):
    """Map of the product W1 W2 ... Wk for maps listed in product order."""
    return reduce(compose, maps)


def takagi(matrix, tolerance=None):
    """
    Takagi factorization of a complex symmetric matrix.

    Works on the real symmetric embedding [[Re N, Im N], [Im N, -Re N]],
    whose spectrum is +-s; an eigenvector (x, y) of +s gives the Takagi
    vector x + i y. eigh keeps clustered eigenvectors accurate, so close
    values need no grouping.

    Args:
        matrix: complex symmetric N
        tolerance: level below which a value counts as zero

    Returns:
        tuple: (s, Q) with N = Q diag(s) Q^T, Q unitary, s descending
    """
    if tolerance is None:
        tolerance = get_tolerances().degeneracy
    matrix = np.asarray(matrix, dtype=np.complex128)
    size = matrix.shape[0]
    if size == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    matrix = (matrix + matrix.T) / 2
    embedding = np.block([[matrix.real, matrix.imag], [matrix.imag, -matrix.real]])
    values, vectors = eigh(embedding)
    floor = max(tolerance, 64 * np.finfo(np.float64).eps * float(np.max(np.abs(values))))
    keep = np.flatnonzero(values > floor)[::-1]
    unitary = vectors[:size, keep] + 1j * vectors[size:, keep]
    if keep.size == 0:
        unitary = np.eye(size, dtype=np.complex128)
    elif keep.size < size:
        # the null space of N takes any orthonormal completion
        unitary = np.hstack([unitary, null_space(unitary.conj().T)])
    return np.concatenate([values[keep], np.zeros(size - keep.size)]), unitary


def canonical_factors(unitary, lam, unitary_prime):
    """
    Bring U(U) S(lam) U(Uprime) to the form with lam >= 0 sorted descending.

    A negative squeeze uses S(-r) = U(i) S(r) U(-i): column j of U picks up
    a factor i and row j of Uprime a factor -i.
    """
    unitary = np.array(unitary, dtype=np.complex128)
    unitary_prime = np.array(unitary_prime, dtype=np.complex128)
    lam = np.array(lam, dtype=np.float64)
    negative = lam < 0
    unitary[:, negative] *= 1j
    unitary_prime[negative, :] *= -1j
    lam = np.abs(lam)
    order = np.argsort(-lam, kind='stable')
    return BlochMessiahFactors(unitary[:, order], lam[order], unitary_prime[order, :])


def bloch_messiah(gaussian_map, tolerances=None):
    """
    Factor a displacement-free GaussianMap as U(U) S(lam) U(Uprime).

    With E = U cosh(lam) Uprime and F = U sinh(lam) Uprime^*, the product
    F E^T = U diag(sinh lam cosh lam) U^T is complex symmetric. Its Takagi
    factorization gives U and lam; Uprime = cosh(lam)^-1 U^dagger E.

    Raises:
        GaussianConstraintError: input is not a valid bosonic map
        InvalidInputError: the map carries a displacement
        DecompositionError: eigensolver failed or the factors do not reproduce the map
    """
    tolerances = tolerances or get_tolerances()
    gaussian_map.validate(tolerances.constraint)
    if np.max(np.abs(gaussian_map.delta), initial=0.0) > tolerances.constraint:
        raise InvalidInputError("Bloch-Messiah decomposition needs a map without displacement")

    try:
        values, unitary = takagi(gaussian_map.F @ gaussian_map.E.T, tolerances.degeneracy)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise DecompositionError(f"Takagi factorization of F E^T failed: {exc}") from exc

    lam = np.arcsinh(2.0 * values) / 2.0
    unitary_prime = (unitary.conj().T @ gaussian_map.E) / np.cosh(lam)[:, None]

    factors = canonical_factors(unitary, lam, unitary_prime)
    error = factors.as_map().max_difference(gaussian_map)
    logger.debug("Bloch-Messiah on %d modes: reconstruction error %.3e", gaussian_map.modes, error)
    if not np.isfinite(error) or error > tolerances.reconstruction:
        raise DecompositionError(
            f"Bloch-Messiah factors reproduce the map only to {error:.3e} "
            f"(tolerance {tolerances.reconstruction:.1e})"
        )
    return factors


def doktorov_svd(a_matrix, tolerance=None):
    """
    SVD A = O_L diag(l) O_R^T of a real invertible matrix.

    The largest-magnitude entry of every column of O_L is made positive (the
    matching column of O_R flips with it).
    """
    if tolerance is None:
        tolerance = get_tolerances().singularity
    a_matrix = np.atleast_2d(np.asarray(a_matrix, dtype=np.float64))
    if a_matrix.ndim != 2 or a_matrix.shape[0] != a_matrix.shape[1]:
        raise InvalidInputError(f"A must be square, got shape {a_matrix.shape}")
    o_left, values, o_right_t = svd(a_matrix)
    o_right = o_right_t.T.copy()
    for col in range(o_left.shape[1]):
        pivot = np.argmax(np.abs(o_left[:, col]))
        if o_left[pivot, col] < 0:
            o_left[:, col] *= -1
            o_right[:, col] *= -1
    if values.size and values.min() <= tolerance:
        raise SingularMatrixError(f"A is singular: smallest singular value {values.min():.3e}")
    return o_left, values, o_right


def doktorov_factorize(a_matrix, displacement, tolerance=None):
    """
    Factors [D(d/sqrt2), U(O_L), S(log l), U(O_R^T)] in operator-product order.

    Their product W satisfies W^dagger R W = A R + d on the position
    quadratures R = (a + a^dagger)/sqrt2.
    """
    o_left, values, o_right = doktorov_svd(a_matrix, tolerance)
    displacement = np.atleast_1d(np.asarray(displacement, dtype=np.float64))
    if displacement.shape != (o_left.shape[0],):
        raise InvalidInputError(f"d has shape {displacement.shape}, expected ({o_left.shape[0]},)")
    return [
        displacement_map(displacement / np.sqrt(2.0)),
        passive_map(o_left),
        squeeze_map(np.log(values)),
        passive_map(o_right.T),
    ]
