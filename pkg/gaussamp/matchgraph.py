"""
Perfect matchings of complete graphs (with and without loops) and the
brute-force matrix functions defined by summing over them.

These routines are deliberately exhaustive: they are the reference that the
fast kernels in hafnian.py are checked against. Vertices are 0-indexed here;
Matching.__str__ prints the 1-based labels used in the literature.
"""
import logging
import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from .conf import get_caps, get_tolerances
from .exceptions import CapExceededError, InvalidInputError, NonSymmetricMatrixError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Matching:
    """A set of vertex pairs (i, j), i <= j; (i, i) is a loop."""
    pairs: tuple

    @property
    def loops(self):
        return tuple(i for i, j in self.pairs if i == j)

    def vertices(self):
        covered = []
        for i, j in self.pairs:
            covered.append(i)
            if j != i:
                covered.append(j)
        return covered

    def is_perfect(self, n):
        covered = self.vertices()
        return len(covered) == len(set(covered)) and sorted(covered) == list(range(n))

    def weight(self, matrix):
        product = 1 + 0j
        for i, j in self.pairs:
            product *= matrix[i][j]
        return product

    def __str__(self):
        return ''.join(f'({i + 1},{j + 1})' for i, j in self.pairs)


def as_symmetric(data, tolerance=None):
    """
    Coerce data to a complex symmetric matrix.

    Args:
        data: square array-like of complex values
        tolerance: largest accepted |A[i][j] - A[j][i]| (default SYMMETRY_TOLERANCE)

    Returns:
        np.ndarray: (A + A.T) / 2 as complex128

    Raises:
        InvalidInputError: data is not a square matrix
        NonSymmetricMatrixError: asymmetry above tolerance
    """
    if tolerance is None:
        tolerance = get_tolerances().symmetry
    matrix = np.asarray(data, dtype=np.complex128)
    if matrix.size == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidInputError(f"Expected a square matrix, got shape {matrix.shape}")
    asymmetry = float(np.max(np.abs(matrix - matrix.T)))
    if asymmetry > tolerance:
        raise NonSymmetricMatrixError(
            f"Matrix is not symmetric: max |G[i][j] - G[j][i]| = {asymmetry:.3e} > {tolerance:.1e}"
        )
    return (matrix + matrix.T) / 2


def adjacency_matrix(n, edges):
    """0-1 adjacency matrix of a graph on n vertices; an edge (i, i) is a loop."""
    matrix = np.zeros((n, n), dtype=np.complex128)
    for i, j in edges:
        matrix[i, j] = 1
        matrix[j, i] = 1
    return matrix


def bipartite_matrix(weights):
    """The symmetric block matrix [[0, W], [W^T, 0]] whose hafnian is per(W)."""
    weights = np.asarray(weights, dtype=np.complex128)
    rows, cols = weights.shape
    matrix = np.zeros((rows + cols, rows + cols), dtype=np.complex128)
    matrix[:rows, rows:] = weights
    matrix[rows:, :rows] = weights.T
    return matrix


def _check_cap(n, allow_loops, cap=None):
    if n < 0:
        raise InvalidInputError(f"Vertex count must be non-negative, got {n}")
    if cap is None:
        caps = get_caps()
        cap = caps.matching_loops if allow_loops else caps.matching
    if n > cap:
        kind = 'loop matching enumeration size' if allow_loops else 'matching enumeration size'
        raise CapExceededError(kind, n, cap)


def _matchings(vertices, allow_loops):
    # Recursion on the lowest unmatched vertex: pair it with each larger vertex,
    # then (if allowed) close it with a loop.
    if not vertices:
        yield ()
        return
    first, rest = vertices[0], vertices[1:]
    for idx, partner in enumerate(rest):
        remaining = rest[:idx] + rest[idx + 1:]
        for tail in _matchings(remaining, allow_loops):
            yield ((first, partner),) + tail
    if allow_loops:
        for tail in _matchings(rest, allow_loops):
            yield ((first, first),) + tail


def iter_perfect_matchings(n, allow_loops=False, cap=None):
    """Lazily yield every perfect matching of the complete graph on n vertices."""
    _check_cap(n, allow_loops, cap)
    for pairs in _matchings(tuple(range(n)), allow_loops):
        yield Matching(pairs)


def enumerate_perfect_matchings(n, allow_loops=False, cap=None):
    """
    Every perfect matching of the complete graph on n vertices, exactly once.

    Loops are included iff allow_loops. n == 0 gives the single empty matching;
    odd n without loops gives none.
    """
    return list(iter_perfect_matchings(n, allow_loops, cap))


def pmp_count(n):
    """(n - 1)!! for even n, 0 for odd n, 1 for n == 0."""
    if n < 0:
        raise InvalidInputError(f"Vertex count must be non-negative, got {n}")
    if n % 2:
        return 0
    return math.prod(range(1, n, 2))


def spm_count(n, cap=None):
    """
    Number of perfect matchings with loops on n vertices.

    Counts the branches of the enumeration recursion (loop the first vertex, or
    pair it with one of the k - 1 others) without materialising the matchings.
    """
    _check_cap(n, True, cap)
    counts = [1, 1]
    for k in range(2, n + 1):
        counts.append(counts[k - 1] + (k - 1) * counts[k - 2])
    return counts[n]


def _matching_sum(matrix, vertices, allow_loops):
    if not vertices:
        return 1 + 0j
    first, rest = vertices[0], vertices[1:]
    total = 0j
    row = matrix[first]
    for idx, partner in enumerate(rest):
        total += row[partner] * _matching_sum(matrix, rest[:idx] + rest[idx + 1:], allow_loops)
    if allow_loops:
        total += row[first] * _matching_sum(matrix, rest, allow_loops)
    return total


def haf_bruteforce(matrix, cap=None):
    """Hafnian as the sum over loopless perfect matchings; 1 for n == 0, 0 for odd n."""
    matrix = as_symmetric(matrix)
    n = matrix.shape[0]
    _check_cap(n, False, cap)
    if n % 2:
        return 0j
    return _matching_sum(matrix.tolist(), tuple(range(n)), False)


def lhaf_bruteforce(matrix, cap=None):
    """Loop hafnian: diagonal entry A[i][i] weights the loop (i, i); 1 for n == 0."""
    matrix = as_symmetric(matrix)
    n = matrix.shape[0]
    _check_cap(n, True, cap)
    return _matching_sum(matrix.tolist(), tuple(range(n)), True)


@nb.njit(cache=True)
def _ryser_gray(matrix):
    n = matrix.shape[0]
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0j
    previous = 0
    size = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        flipped = gray ^ previous
        col = 0
        while (flipped >> col) & 1 == 0:
            col += 1
        if gray & flipped:
            size += 1
            for i in range(n):
                row_sums[i] += matrix[i, col]
        else:
            size -= 1
            for i in range(n):
                row_sums[i] -= matrix[i, col]
        previous = gray
        product = 1.0 + 0j
        for i in range(n):
            product *= row_sums[i]
        if (n - size) % 2:
            total -= product
        else:
            total += product
    return total


def permanent(weights, cap=None):
    """
    Permanent by Ryser inclusion-exclusion with Gray-code subset order.

    Args:
        weights: square complex matrix (need not be symmetric)
        cap: largest accepted dimension (default PERMANENT_MAX_DIM)

    Returns:
        complex
    """
    weights = np.ascontiguousarray(weights, dtype=np.complex128)
    if weights.size == 0:
        return 1 + 0j
    if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
        raise InvalidInputError(f"Permanent needs a square matrix, got shape {weights.shape}")
    if cap is None:
        cap = get_caps().permanent_dim
    if weights.shape[0] > cap:
        raise CapExceededError('permanent dimension', weights.shape[0], cap)
    logger.debug("Ryser permanent of a %dx%d matrix", *weights.shape)
    return complex(_ryser_gray(weights))
