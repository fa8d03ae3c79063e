import math
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from gaussamp.exceptions import VerificationError

from .helpers import fixture_path


def run(name, *args):
    stdout, stderr = StringIO(), StringIO()
    call_command(name, *args, stdout=stdout, stderr=stderr)
    return stdout.getvalue(), stderr.getvalue()


def parse_complex(line):
    real, imag = line.split()
    return complex(float(real), float(imag))


class MatrixCommandTests(SimpleTestCase):
    def test_lhaf_of_g1(self):
        stdout, _ = run('lhaf', fixture_path('g1.json'))
        self.assertLess(abs(parse_complex(stdout.strip()) - 2), 1e-12)

    def test_haf_of_g1(self):
        stdout, _ = run('haf', fixture_path('g1.json'), '--threads', '1')
        self.assertLess(abs(parse_complex(stdout.strip()) - 1), 1e-12)

    def test_empty_matrix(self):
        stdout, _ = run('lhaf', fixture_path('empty_matrix.json'))
        self.assertEqual(stdout.strip(), '1 0')

    def test_permanent(self):
        stdout, _ = run('permanent', fixture_path('weights.json'))
        self.assertEqual(stdout.strip(), '10 0')

    def test_asymmetric_input_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            run('lhaf', fixture_path('asymmetric.json'))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_missing_file_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            run('lhaf', fixture_path('does_not_exist.json'))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_cap_exits_3(self):
        with self.assertRaises(CommandError) as ctx:
            run('lhaf', fixture_path('g1.json'), '--max-dim', '4')
        self.assertEqual(ctx.exception.returncode, 3)

    def test_cap_above_hard_limit_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            run('lhaf', fixture_path('g1.json'), '--max-dim', '100')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'value.txt'
            stdout, stderr = run('permanent', fixture_path('weights.json'), '--out', str(target))
            self.assertEqual(target.read_text(), '10 0\n')
            self.assertEqual(stdout, '')
            self.assertIn('Wrote', stderr)


class AmplitudeCommandTests(SimpleTestCase):
    squeezed = math.tanh(0.5) / math.sqrt(2 * math.cosh(0.5))

    def test_identity(self):
        stdout, _ = run('amplitude', fixture_path('identity_spec.json'))
        self.assertLess(abs(parse_complex(stdout.strip()) - 1), 1e-12)

    def test_squeezed(self):
        stdout, _ = run('amplitude', fixture_path('squeezed_spec.json'))
        self.assertLess(abs(parse_complex(stdout.strip()) - self.squeezed), 1e-12)

    def test_verify(self):
        stdout, _ = run('amplitude', fixture_path('squeezed_spec.json'), '--verify', '--cutoff', '40')
        value, oracle, difference = stdout.strip().splitlines()
        self.assertLess(abs(parse_complex(value) - self.squeezed), 1e-12)
        self.assertTrue(oracle.startswith('oracle '))
        self.assertLess(abs(parse_complex(oracle[len('oracle '):]) - self.squeezed), 1e-10)
        self.assertLess(float(difference.split()[1]), 1e-10)

    def test_verification_mismatch_exits_4(self):
        failure = VerificationError(0.3, 0.2, 0.1, 1e-6)
        with mock.patch('gaussamp.management.commands._base.verify_amplitude', side_effect=failure):
            stdout = StringIO()
            with self.assertRaises(CommandError) as ctx:
                call_command('amplitude', fixture_path('squeezed_spec.json'), '--verify',
                             stdout=stdout, stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 4)
        self.assertIn('oracle 0.2 0', stdout.getvalue())
        self.assertIn('difference 0.1', stdout.getvalue())

    def test_cutoff_above_hard_limit_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            run('amplitude', fixture_path('squeezed_spec.json'), '--verify', '--cutoff', '500')
        self.assertEqual(ctx.exception.returncode, 2)


class VibronicCommandTests(SimpleTestCase):
    def test_fcf(self):
        stdout, _ = run('fcf', fixture_path('displaced_model.json'), '--m', '1')
        self.assertAlmostEqual(float(stdout) ** 2, 0.5 * math.exp(-0.5), places=12)

    def test_fcf_verify(self):
        stdout, _ = run('fcf', fixture_path('displaced_model.json'), '--m', '2', '--verify', '--cutoff', '30')
        value, oracle, difference = stdout.strip().splitlines()
        expected = math.sqrt(0.25 * math.exp(-0.5) / 2)
        self.assertAlmostEqual(abs(float(value)), expected, places=12)
        self.assertAlmostEqual(float(oracle.split()[1]), float(value), places=10)
        self.assertLess(float(difference.split()[1]), 1e-10)

    def test_fcf_verification_mismatch_exits_4(self):
        failure = VerificationError(0.3, 0.2, 0.1, 1e-6)
        with mock.patch('gaussamp.management.commands._base.verify_amplitude', side_effect=failure):
            stdout = StringIO()
            with self.assertRaises(CommandError) as ctx:
                call_command('fcf', fixture_path('displaced_model.json'), '--verify',
                             stdout=stdout, stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 4)
        self.assertIn('oracle 0.2', stdout.getvalue())

    def test_fcf_rejects_wrong_quanta(self):
        with self.assertRaises(CommandError) as ctx:
            run('fcf', fixture_path('displaced_model.json'), '--m', '1,2')
        self.assertEqual(ctx.exception.returncode, 2)
        with self.assertRaises(CommandError) as ctx:
            run('fcf', fixture_path('displaced_model.json'), '--m', 'one')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_spectrum_csv(self):
        stdout, stderr = run(
            'spectrum', fixture_path('identical_model.json'), '--max-quanta', '3', '--threshold', '1e-12',
        )
        rows = stdout.strip().splitlines()
        self.assertEqual(rows[0], 'energy_cm1,intensity')
        self.assertEqual(len(rows), 2)
        energy, intensity = (float(v) for v in rows[1].split(','))
        self.assertAlmostEqual(energy, 20000.0, places=6)
        self.assertAlmostEqual(intensity, 1.0, places=10)
        self.assertIn('1 lines', stderr)

    def test_spectrum_from_hessians(self):
        stdout, _ = run('spectrum', fixture_path('hessian_model.json'), '--max-quanta', '4', '--threshold', '1e-6')
        rows = stdout.strip().splitlines()[1:]
        energies = [float(row.split(',')[0]) for row in rows]
        self.assertEqual(energies, sorted(energies))
        self.assertAlmostEqual(energies[0], 15000.0, places=6)

    def test_spectrum_profile(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'profile.csv'
            run(
                'spectrum', fixture_path('displaced_model.json'), '--max-quanta', '4',
                '--sigma', '20', '--points', '500', '--profile-out', str(target),
            )
            rows = target.read_text().strip().splitlines()
        self.assertEqual(rows[0], 'energy_cm1,intensity')
        self.assertEqual(len(rows), 501)
        self.assertAlmostEqual(float(rows[1].split(',')[0]), 20000.0 - 100.0, places=6)

    def test_profile_needs_a_width(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(CommandError) as ctx:
                run('spectrum', fixture_path('displaced_model.json'), '--profile-out', str(Path(tmp) / 'p.csv'))
        self.assertEqual(ctx.exception.returncode, 2)
