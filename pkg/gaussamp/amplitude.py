"""
Fock-basis matrix elements of Gaussian unitaries as loop hafnians.

    nu = <m| D(alpha) U(U) S(lam) U(U') |n>

The ket photons n are moved to the bra side with two-mode squeezers on
ancilla modes: T(t)|0, 0> projected on <n| of the ancillas gives
tanh^n(t)/cosh(t), so

    nu = R <m, n| Q |0>,   Q = (U(U) S(lam) U(U') (x) I) T(t),
    R = prod_j cosh(t_j) / tanh^(n_j)(t_j),   sinh^2 t_j = n_j.

Q has a Bloch-Messiah decomposition U(U~) S(lam~) U(U~'), and U(U~') leaves
the vacuum alone, so <p| Q |0> with p = (m, n) is the vacuum-to-Fock
amplitude of a squeezed displaced vacuum:

    <p| Q |0> = T lhaf(B^(p)),   B = U~ tanh(lam~) U~^T,   zeta = alpha~ - B alpha~^*,
    T = exp(-(|alpha~|^2 - alpha~^dagger B alpha~^*)/2) / sqrt(prod_j p_j! cosh lam~_j),

where B^(p) repeats row/column j of B p_j times and carries zeta^(p) on its
diagonal.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag
from scipy.special import gammaln

from .conf import get_caps, get_tolerances
from .exceptions import InvalidInputError, PrefactorOverflowError
from .gaussian import (
    GaussianMap,
    bloch_messiah,
    canonical_factors,
    check_unitary,
    compose,
    compose_chain,
    displacement_map,
    passive_map,
    squeeze_map,
    two_mode_squeeze_map,
)
from .hafnian import RepetitionVector, expand_repetition, haf_fast, lhaf_fast

logger = logging.getLogger(__name__)

# log of the largest finite double
_LOG_MAX = math.log(np.finfo(np.float64).max)


def _photons(values, modes, name):
    values = tuple(int(v) for v in values)
    if len(values) != modes:
        raise InvalidInputError(f"{name} has {len(values)} entries, expected {modes}")
    if any(v < 0 for v in values):
        raise InvalidInputError(f"{name} must be non-negative, got {values}")
    return values


@dataclass(frozen=True, eq=False)
class AmplitudeSpec:
    """The tuple (m, n, alpha, U, lam, U') of <m| D(alpha) U(U) S(lam) U(U') |n>."""
    m: tuple
    n: tuple
    alpha: np.ndarray
    U: np.ndarray
    lam: np.ndarray
    Uprime: np.ndarray

    def __post_init__(self):
        unitary = check_unitary(self.U, name='U')
        modes = unitary.shape[0]
        unitary_prime = check_unitary(self.Uprime, name="U'")
        alpha = np.atleast_1d(np.asarray(self.alpha, dtype=np.complex128))
        lam = np.atleast_1d(np.asarray(self.lam, dtype=np.float64))
        if unitary_prime.shape[0] != modes or alpha.shape != (modes,) or lam.shape != (modes,):
            raise InvalidInputError(
                f"Inconsistent mode counts: U {unitary.shape}, U' {unitary_prime.shape}, "
                f"alpha {alpha.shape}, lambda {lam.shape}"
            )
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(lam))):
            raise InvalidInputError("alpha and lambda must be finite")
        object.__setattr__(self, 'U', unitary)
        object.__setattr__(self, 'Uprime', unitary_prime)
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'lam', lam)
        object.__setattr__(self, 'm', _photons(self.m, modes, 'm'))
        object.__setattr__(self, 'n', _photons(self.n, modes, 'n'))

    @classmethod
    def identity(cls, modes, m=None, n=None):
        zeros = (0,) * modes
        return cls(m or zeros, n or zeros, np.zeros(modes), np.eye(modes), np.zeros(modes), np.eye(modes))

    @property
    def modes(self):
        return len(self.m)

    @property
    def total_photons(self):
        return sum(self.m) + sum(self.n)

    def gaussian_map(self):
        return compose_chain([
            displacement_map(self.alpha),
            passive_map(self.U),
            squeeze_map(self.lam),
            passive_map(self.Uprime),
        ])

    def with_photons(self, m=None, n=None):
        return AmplitudeSpec(
            self.m if m is None else m, self.n if n is None else n,
            self.alpha, self.U, self.lam, self.Uprime,
        )

    def adjoint(self):
        """
        Spec of <n| X^dagger |m>, the complex conjugate of this amplitude.

        X^dagger = U(U'^dagger) S(-lam) U(U^dagger) D(-alpha); the displacement
        is commuted to the front with U(V) D(b) = D(V b) U(V) and
        S(-lam) D(b) = D(cosh(lam) b - sinh(lam) b^*) S(-lam).
        """
        shifted = -(self.U.conj().T @ self.alpha)
        squeezed = np.cosh(self.lam) * shifted - np.sinh(self.lam) * np.conj(shifted)
        return AmplitudeSpec(
            self.n, self.m,
            self.Uprime.conj().T @ squeezed,
            self.Uprime.conj().T,
            -self.lam,
            self.U.conj().T,
        )


@dataclass(frozen=True, eq=False)
class DoubledProblem:
    p: tuple
    alpha_tilde: np.ndarray
    t: np.ndarray
    factors: object

    @property
    def modes(self):
        return len(self.p)


def _doubled_map(spec, t):
    modes = spec.modes
    physical = compose_chain([passive_map(spec.U), squeeze_map(spec.lam), passive_map(spec.Uprime)])
    embedded = GaussianMap(
        block_diag(physical.E, np.eye(modes)),
        block_diag(physical.F, np.zeros((modes, modes))),
        np.zeros(2 * modes),
    )
    squeezers = [two_mode_squeeze_map(t[j], j, modes + j, 2 * modes) for j in range(modes)]
    return compose(embedded, compose_chain(squeezers)) if squeezers else embedded


def build_doubled(spec, t=None, tolerances=None):
    """
    Double the modes and factor Q = (U(U) S(lam) U(U') (x) I) T(t).

    Args:
        spec: AmplitudeSpec
        t: two-mode squeeze parameters; default asinh(sqrt(n_j)). Any t_j > 0
           gives the same amplitude for n_j >= 1.

    Returns:
        DoubledProblem
    """
    modes = spec.modes
    if t is None:
        t = np.arcsinh(np.sqrt(np.asarray(spec.n, dtype=np.float64)))
    else:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if t.shape != (modes,):
            raise InvalidInputError(f"t has shape {t.shape}, expected ({modes},)")
        if any(n_j > 0 and t_j <= 0 for n_j, t_j in zip(spec.n, t)):
            raise InvalidInputError("t_j must be positive wherever n_j > 0")

    factors = bloch_messiah(_doubled_map(spec, t), tolerances)
    return DoubledProblem(
        p=spec.m + spec.n,
        alpha_tilde=np.concatenate([spec.alpha, np.zeros(modes, dtype=np.complex128)]),
        t=t,
        factors=factors,
    )


def assemble_B_zeta(factors, alpha_tilde):
    """B = U~ tanh(lam~) U~^T (symmetrised) and zeta = alpha~ - B alpha~^*."""
    alpha_tilde = np.asarray(alpha_tilde, dtype=np.complex128)
    b_matrix = factors.U @ np.diag(np.tanh(factors.lam)) @ factors.U.T
    b_matrix = (b_matrix + b_matrix.T) / 2
    zeta = alpha_tilde - b_matrix @ alpha_tilde.conj()
    return b_matrix, zeta


def _log_r(n, t):
    log_r = 0.0
    for n_j, t_j in zip(n, t):
        log_r += math.log(math.cosh(t_j))
        if n_j:
            if t_j <= 0:
                raise InvalidInputError("t_j must be positive wherever n_j > 0")
            log_r -= n_j * math.log(math.tanh(t_j))
    return log_r


def _log_gaussian(alpha_tilde, b_matrix, lam):
    alpha_tilde = np.asarray(alpha_tilde, dtype=np.complex128)
    quadratic = np.vdot(alpha_tilde, alpha_tilde).real - alpha_tilde.conj() @ b_matrix @ alpha_tilde.conj()
    return complex(-0.5 * quadratic - 0.5 * float(np.sum(np.log(np.cosh(lam)))))


def _exp_checked(log_value, what):
    if log_value.real > _LOG_MAX:
        raise PrefactorOverflowError(f"{what} overflows: log-magnitude {log_value.real:.1f}")
    return np.exp(log_value)


def log_prefactors(spec, doubled, b_matrix):
    """(log R, log T) without exponentiating."""
    log_r = _log_r(spec.n, doubled.t)
    log_t = _log_gaussian(doubled.alpha_tilde, b_matrix, doubled.factors.lam)
    log_t -= 0.5 * float(np.sum(gammaln(np.asarray(doubled.p, dtype=np.float64) + 1.0)))
    return log_r, log_t


def prefactors(spec, doubled, b_matrix):
    """
    R = prod_j cosh(t_j) / tanh^(n_j)(t_j) and
    T = exp(-(|a|^2 - a^dagger B a^*)/2) / sqrt(prod_j p_j! cosh lam~_j), a = alpha~.

    Both are formed in log space (log-gamma for p_j!) and exponentiated last.
    """
    log_r, log_t = log_prefactors(spec, doubled, b_matrix)
    return float(_exp_checked(complex(log_r), 'R').real), complex(_exp_checked(log_t, 'T'))


class AmplitudePlan:
    """
    Everything about <m| X |n> that does not depend on m.

    The Bloch-Messiah factors, B, zeta and R are computed once for a fixed
    Gaussian unitary X and ket n; amplitude(m) then only expands B and runs the
    hafnian kernel. Instances are immutable after construction and may be
    shared across threads.
    """

    def __init__(self, alpha, unitary, lam, unitary_prime, n, t=None, double_vacuum=None,
                 tolerances=None, caps=None):
        self.tolerances = tolerances or get_tolerances()
        self.caps = caps or get_caps()
        reference = AmplitudeSpec(n, n, alpha, unitary, lam, unitary_prime)
        self.alpha = reference.alpha
        self.n = reference.n
        self.modes = reference.modes
        if double_vacuum is None:
            double_vacuum = self.caps.double_vacuum
        self.doubled = bool(double_vacuum or any(self.n) or t is not None)

        if self.doubled:
            problem = build_doubled(reference, t=t, tolerances=self.tolerances)
            self.factors = problem.factors
            self.alpha_tilde = problem.alpha_tilde
            self.t = problem.t
        else:
            # With n = 0 the ket is the vacuum already and no ancillas are needed.
            self.factors = canonical_factors(reference.U, reference.lam, reference.Uprime)
            self.alpha_tilde = reference.alpha
            self.t = np.zeros(0)

        self.B, self.zeta = assemble_B_zeta(self.factors, self.alpha_tilde)
        self.log_r = _log_r(self.n, self.t) if self.doubled else 0.0
        self.log_gaussian = _log_gaussian(self.alpha_tilde, self.B, self.factors.lam)
        self.zero_displacement = not np.any(self.alpha)
        self.zeta_is_zero = float(np.max(np.abs(self.zeta), initial=0.0)) <= self.tolerances.zeta_zero
        logger.debug(
            "Amplitude plan on %d modes (doubled=%s): lam~ = %s",
            self.modes, self.doubled, np.array2string(self.factors.lam, precision=4),
        )

    @classmethod
    def from_spec(cls, spec, **kwargs):
        return cls(spec.alpha, spec.U, spec.lam, spec.Uprime, spec.n, **kwargs)

    def repetition(self, m):
        m = _photons(m, self.modes, 'm')
        return RepetitionVector(m + self.n if self.doubled else m)

    def amplitude(self, m, threads=None):
        p = self.repetition(m)
        if self.zero_displacement and p.total % 2:
            return 0j
        expanded = expand_repetition(self.B, self.zeta, p, cap=self.caps.hafnian_dim)
        if self.zeta_is_zero:
            value = haf_fast(expanded, threads=threads, cap=self.caps.hafnian_dim)
        else:
            value = lhaf_fast(expanded, threads=threads, cap=self.caps.hafnian_dim)
        log_t = self.log_gaussian - 0.5 * float(np.sum(gammaln(np.asarray(p.p, dtype=np.float64) + 1.0)))
        return complex(_exp_checked(self.log_r + log_t, 'R*T') * value)


def amplitude(spec, threads=None, double_vacuum=None, tolerances=None, caps=None):
    """
    nu = <m| D(alpha) U(U) S(lam) U(U') |n> = R T lhaf(B^(p)).

    With alpha = 0 an odd total photon number returns exactly 0 and the
    hafnian (zero-diagonal) kernel is used.
    """
    plan = AmplitudePlan.from_spec(spec, double_vacuum=double_vacuum, tolerances=tolerances, caps=caps)
    return plan.amplitude(spec.m, threads=threads)


def probability(spec, **kwargs):
    return abs(amplitude(spec, **kwargs)) ** 2


def coherent_amplitude(beta, alpha, unitary, lam):
    """
    <beta| D(alpha) U(U) S(lam) |0> in closed form.

    The state is prefactor * exp(a^dagger.B.a^dagger/2 + zeta.a^dagger)|0>, and a
    coherent bra replaces a^dagger by beta^*.
    """
    unitary = check_unitary(unitary)
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.complex128))
    beta = np.atleast_1d(np.asarray(beta, dtype=np.complex128))
    lam = np.atleast_1d(np.asarray(lam, dtype=np.float64))
    if not (alpha.shape == beta.shape == lam.shape == (unitary.shape[0],)):
        raise InvalidInputError("beta, alpha, lambda and U must agree on the mode count")
    b_matrix = unitary @ np.diag(np.tanh(lam)) @ unitary.T
    zeta = alpha - b_matrix @ alpha.conj()
    bra = beta.conj()
    exponent = (
        _log_gaussian(alpha, b_matrix, lam)
        + 0.5 * bra @ b_matrix @ bra
        + zeta @ bra
        - 0.5 * np.vdot(beta, beta).real
    )
    return complex(_exp_checked(complex(exponent), 'coherent amplitude'))
