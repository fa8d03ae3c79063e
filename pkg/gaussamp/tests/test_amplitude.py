"""
Amplitude pipeline tests. Oracle comparisons stay on a parameter grid where the
truncated Fock simulator loses less than 1e-3 of the norm; larger squeezing or
displacement on three modes leaks too much at practical cutoffs to check 1e-8.
"""
import math

import numpy as np
from django.test import SimpleTestCase

from gaussamp.amplitude import (
    AmplitudePlan,
    AmplitudeSpec,
    _exp_checked,
    amplitude,
    assemble_B_zeta,
    build_doubled,
    coherent_amplitude,
    probability,
    prefactors,
)
from gaussamp.exceptions import InvalidInputError, NonUnitaryMatrixError, PrefactorOverflowError
from gaussamp.fockoracle import oracle_amplitude
from gaussamp.hafnian import expand_repetition
from gaussamp.matchgraph import haf_bruteforce

from .helpers import random_orthogonal, random_unitary, relative_error

# (modes, max photons per mode, max |lam|, max |alpha|, oracle cutoff, cases)
ORACLE_GRID = [
    (1, 4, 0.8, 1.2, 60, 40),
    (2, 2, 0.5, 0.8, 30, 30),
    (3, 2, 0.3, 0.4, 16, 30),
]


def random_spec(rng, modes, max_photons, max_lam, max_alpha, zero_alpha=False):
    alpha = np.zeros(modes, dtype=complex)
    if not zero_alpha:
        radius = rng.uniform(0, max_alpha, modes)
        alpha = radius * np.exp(2j * np.pi * rng.uniform(size=modes))
    return AmplitudeSpec(
        tuple(int(v) for v in rng.integers(0, max_photons + 1, modes)),
        tuple(int(v) for v in rng.integers(0, max_photons + 1, modes)),
        alpha,
        random_unitary(rng, modes),
        rng.uniform(-max_lam, max_lam, modes),
        random_unitary(rng, modes),
    )


class AmplitudeSpecTests(SimpleTestCase):
    def test_validation(self):
        with self.assertRaises(InvalidInputError):
            AmplitudeSpec((-1,), (0,), [0.0], [[1.0]], [0.0], [[1.0]])
        with self.assertRaises(InvalidInputError):
            AmplitudeSpec((0, 0), (0,), [0.0], [[1.0]], [0.0], [[1.0]])
        with self.assertRaises(NonUnitaryMatrixError):
            AmplitudeSpec((0,), (0,), [0.0], [[2.0]], [0.0], [[1.0]])

    def test_gaussian_map_is_valid(self):
        spec = random_spec(np.random.default_rng(1), 3, 2, 0.8, 1.0)
        spec.gaussian_map().validate()
        self.assertEqual(spec.total_photons, sum(spec.m) + sum(spec.n))


class ClosedFormAmplitudeTests(SimpleTestCase):
    def test_identity(self):
        self.assertAlmostEqual(amplitude(AmplitudeSpec.identity(1)), 1.0, places=14)
        self.assertAlmostEqual(amplitude(AmplitudeSpec.identity(2, m=(1, 2), n=(1, 2))), 1.0, places=12)
        self.assertAlmostEqual(abs(amplitude(AmplitudeSpec.identity(2, m=(2, 1), n=(1, 2)))), 0.0, places=12)

    def test_squeezed_vacuum(self):
        for lam in (0.1, 0.5, -0.7):
            spec = AmplitudeSpec((2,), (0,), [0.0], [[1.0]], [lam], [[1.0]])
            expected = math.tanh(lam) / math.sqrt(2 * math.cosh(lam))
            self.assertAlmostEqual(abs(amplitude(spec) - expected), 0.0, places=12)

    def test_coherent_state(self):
        alpha = 0.7 + 0.4j
        for k in range(6):
            spec = AmplitudeSpec((k,), (0,), [alpha], [[1.0]], [0.0], [[1.0]])
            expected = np.exp(-abs(alpha) ** 2 / 2) * alpha ** k / math.sqrt(math.factorial(k))
            self.assertAlmostEqual(abs(amplitude(spec) - expected), 0.0, places=12)

    def test_beam_splitter_moves_a_photon(self):
        unitary = random_unitary(np.random.default_rng(2), 2)
        spec = AmplitudeSpec((1, 0), (0, 1), [0.0, 0.0], unitary, [0.0, 0.0], np.eye(2))
        self.assertAlmostEqual(abs(amplitude(spec) - unitary[0, 1]), 0.0, places=12)

    def test_odd_parity_without_displacement_is_zero(self):
        spec = AmplitudeSpec((1, 0), (0, 2), [0.0, 0.0], random_unitary(np.random.default_rng(3), 2),
                             [0.4, 0.2], np.eye(2))
        self.assertEqual(amplitude(spec), 0)

    def test_overflow_guard(self):
        with self.assertRaises(PrefactorOverflowError):
            _exp_checked(complex(1000.0), 'R')


class OracleAgreementTests(SimpleTestCase):
    def test_random_specs(self):
        rng = np.random.default_rng(424242)
        for modes, max_photons, max_lam, max_alpha, cutoff, cases in ORACLE_GRID:
            for _ in range(cases):
                spec = random_spec(rng, modes, max_photons, max_lam, max_alpha)
                reference, _ = oracle_amplitude(spec, cutoff=cutoff, leakage_limit=1e-3)
                value = amplitude(spec)
                self.assertLess(abs(value - reference), 1e-8, f"{spec.m} {spec.n} on {modes} modes")

    def test_nearly_equal_squeezing(self):
        rng = np.random.default_rng(425)
        for gap in (1e-7, 1e-8, 1e-9):
            for _ in range(6):
                spec = AmplitudeSpec(
                    (1, 1), (0, 0), [0.0, 0.0],
                    random_unitary(rng, 2), [0.5, 0.5 + gap], random_unitary(rng, 2),
                )
                reference, _ = oracle_amplitude(spec, cutoff=30, leakage_limit=1e-3)
                self.assertLess(abs(amplitude(spec) - reference), 1e-8, f"gap {gap}")

    def test_adjoint_is_complex_conjugate(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            spec = random_spec(rng, 2, 2, 0.6, 0.8)
            self.assertLess(abs(amplitude(spec.adjoint()) - np.conj(amplitude(spec))), 1e-10)

    def test_vacuum_ket_without_doubling(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            spec = random_spec(rng, 2, 3, 0.8, 1.0).with_photons(n=(0, 0))
            doubled = amplitude(spec, double_vacuum=True)
            direct = amplitude(spec, double_vacuum=False)
            self.assertLess(abs(doubled - direct), 1e-10)


class DoubledProblemTests(SimpleTestCase):
    def test_squeeze_parameters_do_not_change_the_amplitude(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            spec = random_spec(rng, 2, 3, 0.6, 0.8)
            spec = spec.with_photons(n=tuple(max(1, v) for v in spec.n))
            plans = [
                AmplitudePlan.from_spec(spec, t=np.full(2, t_value)) for t_value in (0.4, 1.7)
            ]
            reference = AmplitudePlan.from_spec(spec).amplitude(spec.m)
            for plan in plans:
                self.assertLess(relative_error(plan.amplitude(spec.m), reference), 1e-9)

    def test_invalid_squeeze_parameters(self):
        spec = AmplitudeSpec.identity(1, m=(1,), n=(1,))
        with self.assertRaises(InvalidInputError):
            build_doubled(spec, t=[0.0])
        with self.assertRaises(InvalidInputError):
            build_doubled(spec, t=[0.3, 0.3])

    def test_prefactors_of_identity(self):
        spec = AmplitudeSpec.identity(1, m=(1,), n=(1,))
        doubled = build_doubled(spec)
        b_matrix, zeta = assemble_B_zeta(doubled.factors, doubled.alpha_tilde)
        r_factor, t_factor = prefactors(spec, doubled, b_matrix)
        # sinh^2 t = 1: R = cosh t / tanh t = 2
        self.assertAlmostEqual(r_factor, 2.0, places=12)
        self.assertAlmostEqual(abs(zeta).max(), 0.0, places=14)
        self.assertAlmostEqual(abs(t_factor * r_factor * b_matrix[0, 1]), 1.0, places=12)

    def test_zero_displacement_reduces_to_hafnian(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            spec = random_spec(rng, 2, 2, 0.7, 0.0, zero_alpha=True)
            if spec.total_photons % 2:
                self.assertEqual(amplitude(spec), 0)
                continue
            plan = AmplitudePlan.from_spec(spec)
            p = plan.repetition(spec.m).p
            hafnian = haf_bruteforce(expand_repetition(plan.B, np.zeros(len(plan.B)), p))
            r_squared = 1.0
            for n_j in spec.n:
                # cosh^2 t / tanh^(2n) t with sinh^2 t = n
                r_squared *= (1.0 + n_j) * ((1.0 + n_j) / n_j) ** n_j if n_j else 1.0
            denominator = np.prod([math.factorial(v) for v in p]) * np.prod(np.cosh(plan.factors.lam))
            expected = r_squared * abs(hafnian) ** 2 / denominator
            self.assertLess(relative_error(probability(spec), expected), 1e-10)


class PhysicalPropertyTests(SimpleTestCase):
    def test_real_parameters_give_real_amplitudes(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            spec = AmplitudeSpec(
                tuple(int(v) for v in rng.integers(0, 3, 2)), tuple(int(v) for v in rng.integers(0, 3, 2)),
                rng.uniform(-0.8, 0.8, 2), random_orthogonal(rng, 2), rng.uniform(-0.6, 0.6, 2),
                random_orthogonal(rng, 2),
            )
            value = amplitude(spec)
            self.assertLessEqual(abs(value.imag), 1e-10 * (1 + abs(value)))

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(10)
        plan = AmplitudePlan(
            [0.5, 0.2j], random_unitary(rng, 2), [0.3, -0.2], random_unitary(rng, 2), (1, 0),
        )
        totals = []
        for cutoff in (6, 10):
            totals.append(sum(
                abs(plan.amplitude((a, b))) ** 2 for a in range(cutoff + 1) for b in range(cutoff + 1 - a)
            ))
        self.assertGreater(totals[1], totals[0])
        self.assertGreater(totals[1], 0.9999)
        self.assertLess(totals[1], 1 + 1e-10)

    def test_many_photons(self):
        lam = 0.5
        spec = AmplitudeSpec((20,), (0,), [0.0], [[1.0]], [lam], [[1.0]])
        log_expected = (
            0.5 * math.lgamma(21) - math.lgamma(11) - 10 * math.log(2.0)
            + 10 * math.log(math.tanh(lam)) - 0.5 * math.log(math.cosh(lam))
        )
        self.assertLess(abs(amplitude(spec) / math.exp(log_expected) - 1), 1e-9)

    def test_coherent_overlap(self):
        alpha = np.array([0.3 - 0.2j, 0.5j])
        self.assertAlmostEqual(abs(coherent_amplitude(alpha, alpha, np.eye(2), [0.0, 0.0]) - 1), 0.0, places=12)
        value = coherent_amplitude(np.zeros(2), np.zeros(2), np.eye(2), [0.4, 0.1])
        self.assertAlmostEqual(value, 1 / math.sqrt(math.cosh(0.4) * math.cosh(0.1)), places=12)

    def test_single_photon_ket_squeeze_parameter(self):
        doubled = build_doubled(AmplitudeSpec.identity(1, m=(1,), n=(1,)))
        self.assertAlmostEqual(doubled.t[0], math.asinh(1.0), places=14)
        self.assertEqual(doubled.p, (1, 1))
