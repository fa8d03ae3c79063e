"""
Fast hafnian and loop-hafnian kernels.

The loop hafnian of a 2m x 2m symmetric matrix A is evaluated by the
power-trace inclusion-exclusion formula over subsets S of the m vertex pairs
(2j, 2j + 1):

    lhaf(A) = sum_S (-1)^(m - |S|) [x^m] exp( sum_k c_k(S) x^k )

    c_k(S) = tr((A_S X)^k) / (2k) + (X d_S)^T (A_S X)^(k - 1) d_S / 2

where A_S keeps the rows/columns of the pairs in S, X swaps the two vertices
of each pair and d_S is the diagonal of A_S. Power traces come from the
eigenvalues of A_S X, which costs O(n^3) per subset and O(n^3 2^(n/2)) in
total. Odd dimensions are padded with an isolated vertex carrying a unit loop.

Subsets are evaluated in chunks by a numba kernel; every chunk returns its
per-subset summands and the chunks are summed in ascending subset order, so
the result does not depend on the number of worker threads.
"""
import logging
import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from .conf import get_caps
from .exceptions import CapExceededError, InvalidInputError
from .matchgraph import as_symmetric

logger = logging.getLogger(__name__)

# Below this many subsets a chunk runs on the serial kernel.
_PARALLEL_THRESHOLD = 512


@dataclass(frozen=True)
class RepetitionVector:
    """Photon counts p_j telling how often row/column j of B is repeated."""
    p: tuple

    def __post_init__(self):
        counts = tuple(int(v) for v in self.p)
        if any(v < 0 for v in counts):
            raise InvalidInputError(f"Repetition counts must be non-negative, got {counts}")
        object.__setattr__(self, 'p', counts)

    @property
    def total(self):
        return sum(self.p)

    def indices(self):
        """The multiset S_p as a flat index list: j repeated p_j times."""
        return [j for j, count in enumerate(self.p) for _ in range(count)]


@nb.njit(cache=True)
def _subset_term(matrix, loops, mask, half):
    size = 0
    for j in range(half):
        if (mask >> j) & 1:
            size += 1
    if size == 0:
        return 0j

    dim = 2 * size
    kept = np.empty(dim, dtype=np.int64)
    pos = 0
    for j in range(half):
        if (mask >> j) & 1:
            kept[pos] = 2 * j
            kept[pos + 1] = 2 * j + 1
            pos += 2

    ax = np.empty((dim, dim), dtype=np.complex128)
    for r in range(dim):
        for c in range(dim):
            ax[r, c] = matrix[kept[r], kept[c ^ 1]]

    eigenvalues = np.linalg.eigvals(ax)
    powers = np.ones(dim, dtype=np.complex128)
    coeffs = np.zeros(half + 1, dtype=np.complex128)

    diag = np.empty(dim, dtype=np.complex128)
    swapped = np.empty(dim, dtype=np.complex128)
    walk = np.empty(dim, dtype=np.complex128)
    if loops:
        for r in range(dim):
            diag[r] = matrix[kept[r], kept[r]]
        for r in range(dim):
            swapped[r] = diag[r ^ 1]
            walk[r] = diag[r]

    for k in range(1, half + 1):
        powers = powers * eigenvalues
        coeffs[k] = np.sum(powers) / (2.0 * k)
        if loops:
            acc = 0j
            for r in range(dim):
                acc += swapped[r] * walk[r]
            coeffs[k] += 0.5 * acc
            walk = ax @ walk

    # [x^half] exp(sum_k coeffs[k] x^k) via g_j = (1/j) sum_k k c_k g_(j-k)
    series = np.zeros(half + 1, dtype=np.complex128)
    series[0] = 1.0
    for j in range(1, half + 1):
        acc = 0j
        for k in range(1, j + 1):
            acc += k * coeffs[k] * series[j - k]
        series[j] = acc / j

    if (half - size) % 2:
        return -series[half]
    return series[half]


@nb.njit(cache=True, parallel=True)
def _summands_parallel(matrix, loops, start, count, half):
    out = np.empty(count, dtype=np.complex128)
    for offset in nb.prange(count):
        out[offset] = _subset_term(matrix, loops, start + offset, half)
    return out


@nb.njit(cache=True)
def _summands_serial(matrix, loops, start, count, half):
    out = np.empty(count, dtype=np.complex128)
    for offset in range(count):
        out[offset] = _subset_term(matrix, loops, start + offset, half)
    return out


def _scale(matrix):
    """Rescale so entries are O(1): off-diagonal by 1/s, diagonal by 1/sqrt(s)."""
    n = matrix.shape[0]
    if n <= 10:
        return matrix, 1.0
    scale = float(np.sum(np.abs(matrix))) / n ** 2 / math.sqrt(2.0)
    if scale == 0.0:
        return matrix, 1.0
    scaled = matrix / scale
    np.fill_diagonal(scaled, np.diag(matrix) / math.sqrt(scale))
    return scaled, scale


def _set_threads(threads):
    if threads and threads > 0:
        nb.set_num_threads(min(int(threads), nb.config.NUMBA_NUM_THREADS))


def _power_trace_sum(matrix, loops, threads=None, chunk_size=None, compensated=None):
    caps = get_caps()
    chunk_size = chunk_size or caps.chunk_size
    compensated = caps.compensated_sum if compensated is None else compensated
    threads = caps.threads if threads is None else threads

    if matrix.shape[0] % 2:
        padded = np.zeros((matrix.shape[0] + 1,) * 2, dtype=np.complex128)
        padded[0, 0] = 1.0
        padded[1:, 1:] = matrix
        matrix = padded

    matrix, scale = _scale(np.ascontiguousarray(matrix))
    half = matrix.shape[0] // 2
    n_subsets = 1 << half
    _set_threads(threads)

    logger.debug(
        "Power-trace %s over %d subsets (dim %d, chunk %d)",
        'lhaf' if loops else 'haf', n_subsets, 2 * half, chunk_size,
    )

    chunk_sums = []
    real_parts = []
    imag_parts = []
    for start in range(0, n_subsets, chunk_size):
        count = min(chunk_size, n_subsets - start)
        if count < _PARALLEL_THRESHOLD or threads == 1:
            summands = _summands_serial(matrix, loops, start, count, half)
        else:
            summands = _summands_parallel(matrix, loops, start, count, half)
        if compensated:
            real_parts.extend(summands.real.tolist())
            imag_parts.extend(summands.imag.tolist())
        else:
            chunk_sums.append(np.sum(summands))

    if compensated:
        total = complex(math.fsum(real_parts), math.fsum(imag_parts))
    else:
        total = complex(np.sum(np.array(chunk_sums, dtype=np.complex128)))
    return total * scale ** half


def _prepare(matrix, cap):
    matrix = as_symmetric(matrix)
    if cap is None:
        cap = get_caps().hafnian_dim
    if matrix.shape[0] > cap:
        raise CapExceededError('hafnian dimension', matrix.shape[0], cap)
    return matrix


def lhaf_fast(matrix, threads=None, cap=None, compensated=None):
    """
    Loop hafnian in O(n^3 2^(n/2)).

    Args:
        matrix: complex symmetric matrix; its diagonal weights the loops
        threads: numba worker count (None: HAFNIAN_THREADS, 0: numba default)
        cap: largest accepted dimension (default HAFNIAN_MAX_DIM)
        compensated: use exactly rounded summation over subsets

    Returns:
        complex: lhaf(matrix); 1 for the empty matrix
    """
    matrix = _prepare(matrix, cap)
    if matrix.shape[0] == 0:
        return 1 + 0j
    if not np.any(matrix):
        return 0j
    return _power_trace_sum(matrix, True, threads=threads, compensated=compensated)


def haf_fast(matrix, threads=None, cap=None, compensated=None):
    """Hafnian in O(n^3 2^(n/2)); the diagonal is ignored and odd n gives 0."""
    matrix = _prepare(matrix, cap)
    n = matrix.shape[0]
    if n == 0:
        return 1 + 0j
    if n % 2:
        return 0j
    matrix = matrix.copy()
    np.fill_diagonal(matrix, 0)
    if not np.any(matrix):
        return 0j
    return _power_trace_sum(matrix, False, threads=threads, compensated=compensated)


def expand_repetition(b_matrix, zeta, p, cap=None):
    """
    Repeat rows/columns of B by p and put zeta^(p) on the diagonal.

    Index j of B (and of zeta) appears p_j times, and is dropped when p_j == 0.
    The diagonal of the expanded B is overwritten by the expanded zeta.

    Args:
        b_matrix: symmetric matrix of dimension len(p)
        zeta: complex vector of dimension len(p)
        p: RepetitionVector or sequence of non-negative ints
        cap: largest accepted total P (default HAFNIAN_MAX_DIM)

    Returns:
        np.ndarray: symmetric P x P matrix
    """
    if not isinstance(p, RepetitionVector):
        p = RepetitionVector(tuple(p))
    b_matrix = np.asarray(b_matrix, dtype=np.complex128)
    zeta = np.asarray(zeta, dtype=np.complex128)
    if b_matrix.shape != (len(p.p), len(p.p)) or zeta.shape != (len(p.p),):
        raise InvalidInputError(
            f"Dimension mismatch: B {b_matrix.shape}, zeta {zeta.shape}, p of length {len(p.p)}"
        )
    if cap is None:
        cap = get_caps().hafnian_dim
    if p.total > cap:
        raise CapExceededError('total photon number', p.total, cap)
    idx = p.indices()
    expanded = b_matrix[np.ix_(idx, idx)].copy()
    np.fill_diagonal(expanded, zeta[idx])
    return expanded
