import numpy as np
from django.test import SimpleTestCase, override_settings

from gaussamp.exceptions import CapExceededError, InvalidInputError, NonSymmetricMatrixError
from gaussamp.hafnian import RepetitionVector, _power_trace_sum, expand_repetition, haf_fast, lhaf_fast
from gaussamp.matchgraph import bipartite_matrix, haf_bruteforce, lhaf_bruteforce, permanent

from .helpers import load_fixture, random_symmetric, relative_error


class PowerTraceKernelTests(SimpleTestCase):
    def test_g1(self):
        matrix = np.array(load_fixture('g1.json')['entries'], dtype=complex)
        self.assertLess(abs(lhaf_fast(matrix) - 2), 1e-12)
        self.assertLess(abs(haf_fast(matrix) - 1), 1e-12)

    def test_trivial_matrices(self):
        self.assertEqual(lhaf_fast(np.zeros((0, 0))), 1)
        self.assertEqual(haf_fast(np.zeros((0, 0))), 1)
        self.assertEqual(lhaf_fast(np.zeros((4, 4))), 0)
        self.assertEqual(haf_fast(np.ones((5, 5))), 0)
        self.assertLess(abs(lhaf_fast([[3.0]]) - 3.0), 1e-14)

    def test_agrees_with_bruteforce_on_random_matrices(self):
        rng = np.random.default_rng(20240101)
        for _ in range(200):
            n = int(rng.integers(2, 13))
            matrix = random_symmetric(rng, n)
            fast = lhaf_fast(matrix)
            brute = lhaf_bruteforce(matrix)
            self.assertLess(relative_error(fast, brute), 1e-10, f"n={n}")

    def test_hafnian_ignores_diagonal(self):
        rng = np.random.default_rng(3)
        matrix = random_symmetric(rng, 8)
        self.assertLess(relative_error(haf_fast(matrix), haf_bruteforce(matrix)), 1e-10)

    def test_permanent_identity(self):
        rng = np.random.default_rng(99)
        for _ in range(50):
            size = int(rng.integers(1, 7))
            weights = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
            block = bipartite_matrix(weights)
            self.assertLess(relative_error(lhaf_fast(block), permanent(weights)), 1e-10)

    def test_result_independent_of_threads_and_chunking(self):
        rng = np.random.default_rng(5)
        matrix = random_symmetric(rng, 22)
        single = lhaf_fast(matrix, threads=1)
        several = lhaf_fast(matrix, threads=2)
        self.assertLess(abs(single - several), 1e-10 * abs(single))
        chunked = _power_trace_sum(matrix, True, threads=1, chunk_size=37)
        self.assertLess(abs(single - chunked), 1e-10 * abs(single))
        compensated = lhaf_fast(matrix, threads=1, compensated=True)
        self.assertLess(abs(single - compensated), 1e-10 * abs(single))

    def test_repeatable(self):
        rng = np.random.default_rng(8)
        matrix = random_symmetric(rng, 14)
        self.assertEqual(lhaf_fast(matrix, threads=1), lhaf_fast(matrix, threads=1))

    def test_rejects_bad_input(self):
        with self.assertRaises(NonSymmetricMatrixError):
            lhaf_fast([[1, 2], [3, 4]])
        with self.assertRaises(CapExceededError):
            lhaf_fast(np.ones((6, 6)), cap=4)

    @override_settings(HAFNIAN_MAX_DIM=4)
    def test_cap_from_settings(self):
        with self.assertRaises(CapExceededError):
            haf_fast(np.ones((6, 6)))


class RepetitionTests(SimpleTestCase):
    def test_repetition_vector(self):
        p = RepetitionVector([2, 0, 1])
        self.assertEqual(p.total, 3)
        self.assertEqual(p.indices(), [0, 0, 2])
        with self.assertRaises(InvalidInputError):
            RepetitionVector([1, -1])

    def test_expand(self):
        b_matrix = np.array([[0.1, 0.2], [0.2, 0.3]], dtype=complex)
        zeta = np.array([1.0 + 1j, 2.0])
        expanded = expand_repetition(b_matrix, zeta, [2, 0])
        np.testing.assert_allclose(expanded, [[1 + 1j, 0.1], [0.1, 1 + 1j]])
        np.testing.assert_allclose(expand_repetition(b_matrix, zeta, [0, 1]), [[2.0]])
        self.assertEqual(expand_repetition(b_matrix, zeta, [0, 0]).shape, (0, 0))

    def test_expand_rejects_mismatch_and_cap(self):
        with self.assertRaises(InvalidInputError):
            expand_repetition(np.zeros((2, 2)), np.zeros(3), [1, 1])
        with self.assertRaises(CapExceededError):
            expand_repetition(np.zeros((2, 2)), np.zeros(2), [30, 30], cap=50)

    def test_expansion_is_permutation_invariant(self):
        rng = np.random.default_rng(17)
        b_matrix = random_symmetric(rng, 4, scale=0.5)
        zeta = rng.normal(size=4) + 1j * rng.normal(size=4)
        p = np.array([1, 3, 0, 2])
        order = rng.permutation(4)
        reference = lhaf_fast(expand_repetition(b_matrix, zeta, p))
        permuted = lhaf_fast(expand_repetition(b_matrix[np.ix_(order, order)], zeta[order], p[order]))
        self.assertLess(relative_error(permuted, reference), 1e-10)

    def test_hafnian_equals_loop_hafnian_without_diagonal(self):
        rng = np.random.default_rng(18)
        matrix = random_symmetric(rng, 10)
        hollow = matrix - np.diag(np.diag(matrix))
        self.assertLess(relative_error(haf_fast(matrix), lhaf_fast(hollow)), 1e-12)
