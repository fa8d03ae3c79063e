"""
Stick spectrum of a vibronic model file as CSV, optionally with a
Voigt-broadened profile.

Run with: python manage.py spectrum model.json --max-quanta 8 --out lines.csv
"""
import numpy as np

from gaussamp.exceptions import InvalidInputError
from gaussamp.serializers import VibronicModelSerializer
from gaussamp.vibronic import broaden, spectrum

from ._base import GaussAmpCommand, format_real, parse_quanta

CSV_HEADER = 'energy_cm1,intensity'


def to_csv(rows):
    lines = [CSV_HEADER]
    lines.extend(f'{format_real(energy, 12)},{format_real(intensity, 12)}' for energy, intensity in rows)
    return '\n'.join(lines) + '\n'


class Command(GaussAmpCommand):
    help = 'Write the stick spectrum (energy_cm1,intensity) of a model document'
    serializer_class = VibronicModelSerializer
    tolerance_name = 'imaginary'
    tolerance_help = 'Largest accepted relative imaginary part of each factor'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--n', default=None, help='Initial-surface quanta, comma-separated (default all 0)')
        parser.add_argument('--max-quanta', type=int, default=6, dest='max_quanta',
                            help='Largest total number of final-surface quanta')
        parser.add_argument('--threshold', type=float, default=0.0, help='Drop lines weaker than this')
        parser.add_argument('--sigma', type=float, default=0.0, help='Gaussian width of the profile (cm-1)')
        parser.add_argument('--gamma', type=float, default=0.0, help='Lorentzian half-width of the profile (cm-1)')
        parser.add_argument('--points', type=int, default=2000, help='Grid points of the profile')
        parser.add_argument('--profile-out', default=None, dest='profile_out',
                            help='Write the broadened profile CSV here')

    def run(self, document, tolerances, caps, **options):
        if options['max_quanta'] < 0 or options['threshold'] < 0:
            raise InvalidInputError('--max-quanta and --threshold must be non-negative')
        model = self.validate_document(document)
        result = spectrum(
            model, parse_quanta(options.get('n')), options['max_quanta'], options['threshold'],
            threads=caps.threads or None, tolerances=tolerances, caps=caps,
        )
        sticks = [(line.energy_cm1, line.intensity) for line in result.lines]
        self.emit(to_csv(sticks), options.get('out'))
        self.stderr.write(
            f'{len(sticks)} lines, total intensity {format_real(result.total_intensity, 8)}'
        )

        if options.get('profile_out'):
            self.write_profile(sticks, options)

    def write_profile(self, sticks, options):
        sigma, gamma, points = options['sigma'], options['gamma'], options['points']
        if sigma < 0 or gamma < 0 or sigma + gamma <= 0:
            raise InvalidInputError('--profile-out needs --sigma and/or --gamma > 0')
        if points < 2:
            raise InvalidInputError('--points must be at least 2')
        if not sticks:
            raise InvalidInputError('No lines above the threshold to broaden')
        energies = [energy for energy, _ in sticks]
        margin = 5.0 * (sigma + gamma)
        grid = np.linspace(min(energies) - margin, max(energies) + margin, points)
        profile = broaden(sticks, grid, sigma, gamma)
        with open(options['profile_out'], 'w') as handle:
            handle.write(to_csv(zip(grid, profile)))
        self.stderr.write(self.style.SUCCESS(f"Wrote profile to {options['profile_out']}"))
