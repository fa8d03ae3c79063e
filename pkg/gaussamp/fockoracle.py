"""
Brute-force Fock-space simulator used to verify the hafnian pipeline.

States live in the cube {0..c-1}^L of photon tuples. Displacement and
squeezing matrices are matrix exponentials of the generators, built on a
padded space and then cut back to the cube so their cube entries are exact to
round-off. Passive unitaries act sector by sector of total photon number.
Everything that falls outside the cube is lost; TruncatedState.leakage reports
how much norm that was.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .conf import get_caps, get_tolerances
from .exceptions import CapExceededError, InvalidInputError, TruncationError, VerificationError
from .gaussian import check_unitary

logger = logging.getLogger(__name__)

_TAIL = 1e-14


@dataclass(frozen=True, eq=False)
class TruncatedState:
    amplitudes: np.ndarray

    @property
    def modes(self):
        return self.amplitudes.ndim

    @property
    def cutoff(self):
        return self.amplitudes.shape[0] if self.amplitudes.ndim else 1

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    @property
    def leakage(self):
        return max(0.0, 1.0 - self.norm ** 2)

    def amplitude(self, photons):
        return complex(self.amplitudes[tuple(photons)])


def _check_size(modes, cutoff):
    if cutoff < 1:
        raise InvalidInputError(f"Cutoff must be at least 1, got {cutoff}")
    limit = get_caps().fock_amplitudes
    if cutoff ** modes > limit:
        raise CapExceededError('Fock amplitude count', cutoff ** modes, limit)


def vacuum(modes, cutoff):
    _check_size(modes, cutoff)
    amplitudes = np.zeros((cutoff,) * modes, dtype=np.complex128)
    amplitudes[(0,) * modes] = 1.0
    return TruncatedState(amplitudes)


def fock_state(photons, cutoff):
    photons = tuple(int(v) for v in photons)
    if any(v < 0 or v >= cutoff for v in photons):
        raise InvalidInputError(f"Photon numbers {photons} do not fit below cutoff {cutoff}")
    _check_size(len(photons), cutoff)
    amplitudes = np.zeros((cutoff,) * len(photons), dtype=np.complex128)
    amplitudes[photons] = 1.0
    return TruncatedState(amplitudes)


def _apply_single(state, mode, matrix):
    moved = np.tensordot(matrix, state.amplitudes, axes=([1], [mode]))
    return TruncatedState(np.moveaxis(moved, 0, mode))


def _ladder(size):
    return np.diag(np.sqrt(np.arange(1, size, dtype=np.float64)), 1)


def _cut(generator, cutoff):
    return expm(generator)[:cutoff, :cutoff]


def displacement_matrix(alpha, cutoff):
    size = cutoff + int(abs(alpha) ** 2 + 10 * abs(alpha)) + 30
    lower = _ladder(size)
    return _cut(alpha * lower.T - np.conj(alpha) * lower, cutoff)


def _geometric_padding(ratio, steps_per_decay=1):
    if ratio < 1e-3:
        return 16
    return min(int(steps_per_decay * math.log(_TAIL) / math.log(ratio)) + 24, 1600)


def squeeze_matrix(lam, cutoff):
    size = cutoff + _geometric_padding(abs(math.tanh(lam)), 2)
    lower = _ladder(size)
    return _cut(0.5 * lam * (lower.T @ lower.T - lower @ lower), cutoff)


def apply_displacement(state, mode, alpha):
    """exp(alpha a^dagger - alpha^* a) on one mode."""
    return _apply_single(state, mode, displacement_matrix(complex(alpha), state.cutoff))


def apply_squeeze(state, mode, lam):
    """exp(lam/2 (a^dagger^2 - a^2)) on one mode."""
    return _apply_single(state, mode, squeeze_matrix(float(lam), state.cutoff))


def apply_two_mode_squeeze(state, i, j, t):
    """
    exp(t (a_i^dagger a_j^dagger - a_i a_j)).

    The generator conserves n_i - n_j, so it is exponentiated separately on
    each chain {(k + shift, k)}.
    """
    if i == j:
        raise InvalidInputError("Two-mode squeezing needs distinct modes")
    cutoff = state.cutoff
    work = np.moveaxis(state.amplitudes, (i, j), (0, 1))
    rest_shape = work.shape[2:]
    work = work.reshape(cutoff, cutoff, -1)
    out = np.zeros_like(work)
    padding = _geometric_padding(abs(math.tanh(t)))
    for shift in range(-(cutoff - 1), cutoff):
        start = max(0, -shift)
        length = cutoff - abs(shift)
        size = length + padding
        k = start + np.arange(size - 1)
        weights = t * np.sqrt((k + shift + 1.0) * (k + 1.0))
        generator = np.diag(weights, -1) - np.diag(weights, 1)
        block = _cut(generator, length)
        rows = start + shift + np.arange(length)
        cols = start + np.arange(length)
        out[rows, cols, :] = block @ work[rows, cols, :]
    out = out.reshape((cutoff, cutoff) + rest_shape)
    return TruncatedState(np.moveaxis(out, (0, 1), (i, j)))


def apply_passive(state, unitary):
    """
    The passive unitary U(U): U(U) a_k^dagger U(U)^dagger = sum_l U[l, k] a_l^dagger.

    Within each sector of total photon number N its matrix is built column by
    column from sector N - 1: with k the last occupied mode of n,
    U(U)|n> = n_k^(-1/2) sum_l U[l, k] a_l^dagger U(U)|n - e_k>.
    Rows and columns are restricted to the cube, which is exact because
    lowering a cube state stays in the cube.
    """
    unitary = check_unitary(unitary)
    modes, cutoff = state.modes, state.cutoff
    if unitary.shape[0] != modes:
        raise InvalidInputError(f"U acts on {unitary.shape[0]} modes, state has {modes}")

    grid = np.indices((cutoff,) * modes).reshape(modes, -1).T
    totals = grid.sum(axis=1)
    strides = np.array([cutoff ** (modes - 1 - l) for l in range(modes)])
    position = np.zeros(grid.shape[0], dtype=np.int64)
    flat_in = state.amplitudes.reshape(-1)
    flat_out = np.zeros_like(flat_in)

    flat_out[0] = flat_in[0]
    position[0] = 0
    previous = np.ones((1, 1), dtype=np.complex128)
    for total in range(1, int(totals.max()) + 1):
        flat = np.flatnonzero(totals == total)
        position[flat] = np.arange(flat.size)
        states = grid[flat]

        last = modes - 1 - np.argmax(states[:, ::-1] > 0, axis=1)
        parents = position[flat - strides[last]]
        scale = 1.0 / np.sqrt(states[np.arange(flat.size), last])

        current = np.zeros((flat.size, flat.size), dtype=np.complex128)
        for l in range(modes):
            occupied = states[:, l] > 0
            if not occupied.any():
                continue
            lowered = position[flat[occupied] - strides[l]]
            raised = np.sqrt(states[occupied, l])[:, None] * previous[lowered][:, parents]
            current[occupied] += raised * (unitary[l, last] * scale)[None, :]

        flat_out[flat] = current @ flat_in[flat]
        previous = current

    return TruncatedState(flat_out.reshape(state.amplitudes.shape))


def annihilate(state, mode):
    """a_mode applied to the state (not normalised)."""
    return _apply_single(state, mode, _ladder(state.cutoff))


def create(state, mode):
    """a_mode^dagger applied to the state, truncated to the cube (not normalised)."""
    return _apply_single(state, mode, _ladder(state.cutoff).T)


def apply_map_chain(state, operations):
    """
    Apply elementary operations right to left, i.e. as the operator product
    they are listed in.

    Each operation is one of ('D', alpha_vector), ('S', lam_vector),
    ('U', matrix), ('T', t, i, j).
    """
    for operation in reversed(operations):
        kind = operation[0]
        if kind == 'D':
            for mode, alpha in enumerate(np.atleast_1d(operation[1])):
                if alpha != 0:
                    state = apply_displacement(state, mode, alpha)
        elif kind == 'S':
            for mode, lam in enumerate(np.atleast_1d(operation[1])):
                if lam != 0:
                    state = apply_squeeze(state, mode, lam)
        elif kind == 'U':
            state = apply_passive(state, operation[1])
        elif kind == 'T':
            state = apply_two_mode_squeeze(state, operation[2], operation[3], operation[1])
        else:
            raise InvalidInputError(f"Unknown operation {kind!r}")
    return state


def _raise_on_leakage(state, cutoff, limit):
    if limit is None:
        limit = get_tolerances().leakage
    logger.debug("Oracle state at cutoff %d: leakage %.3e", cutoff, state.leakage)
    if state.leakage > limit:
        raise TruncationError(state.leakage, limit, cutoff)


def oracle_amplitude(spec, cutoff=None, leakage_limit=None):
    """
    <m| D(alpha) U(U) S(lam) U(U') |n> by direct simulation.

    Returns:
        tuple: (value, leakage)

    Raises:
        TruncationError: leakage above FOCK_LEAKAGE_LIMIT (or leakage_limit)
    """
    if cutoff is None:
        cutoff = get_caps().fock_cutoff
    if max(max(spec.m, default=0), max(spec.n, default=0)) >= cutoff:
        raise InvalidInputError(f"Cutoff {cutoff} must exceed every requested photon number")
    state = fock_state(spec.n, cutoff)
    state = apply_map_chain(state, [('D', spec.alpha), ('U', spec.U), ('S', spec.lam), ('U', spec.Uprime)])
    _raise_on_leakage(state, cutoff, leakage_limit)
    return state.amplitude(spec.m), state.leakage


def oracle_coherent_amplitude(beta, alpha, unitary, lam, cutoff=None, leakage_limit=None):
    """<beta| D(alpha) U(U) S(lam) |0> with the coherent bra expanded to the cutoff."""
    if cutoff is None:
        cutoff = get_caps().fock_cutoff
    beta = np.atleast_1d(np.asarray(beta, dtype=np.complex128))
    state = vacuum(beta.shape[0], cutoff)
    state = apply_map_chain(state, [('D', alpha), ('U', unitary), ('S', lam)])
    _raise_on_leakage(state, cutoff, leakage_limit)

    k = np.arange(cutoff)
    log_factorial = np.array([math.lgamma(v + 1.0) for v in k])
    value = state.amplitudes
    for b in beta:
        # <beta|k> = exp(-|beta|^2/2) conj(beta)^k / sqrt(k!)
        bra = np.exp(-abs(b) ** 2 / 2 - 0.5 * log_factorial) * np.conj(b) ** k
        value = np.tensordot(bra, value, axes=([0], [0]))
    return complex(value), state.leakage


def verify_amplitude(spec, value, cutoff=None, tolerance=None, leakage_limit=None):
    """
    Compare a pipeline amplitude with the oracle.

    Returns:
        tuple: (oracle value, |value - oracle|)

    Raises:
        VerificationError: the difference exceeds tolerance (default VERIFY_TOLERANCE)
    """
    if tolerance is None:
        tolerance = get_tolerances().verify
    reference, leakage = oracle_amplitude(spec, cutoff=cutoff, leakage_limit=leakage_limit)
    difference = abs(complex(value) - reference)
    logger.info("Oracle check: difference %.3e (leakage %.3e)", difference, leakage)
    if difference > tolerance:
        raise VerificationError(complex(value), reference, difference, tolerance)
    return reference, difference
