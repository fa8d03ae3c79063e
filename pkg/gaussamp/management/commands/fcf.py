"""
Single Franck-Condon factor of a vibronic model file.

Run with: python manage.py fcf model.json --n 0,0 --m 1,0 [--verify --cutoff 24]
"""
from gaussamp.serializers import VibronicModelSerializer
from gaussamp.vibronic import fcf, fcf_spec

from ._base import GaussAmpCommand, format_real, parse_quanta


def format_oracle(value):
    return format_real(complex(value).real)


class Command(GaussAmpCommand):
    help = 'Print the Franck-Condon factor <m_final|n_in> of a model document'
    serializer_class = VibronicModelSerializer
    tolerance_name = 'imaginary'
    tolerance_help = 'Largest accepted relative imaginary part of the factor'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--n', default=None, help='Initial-surface quanta, comma-separated (default all 0)')
        parser.add_argument('--m', default=None, help='Final-surface quanta, comma-separated (default all 0)')
        self.add_verify_arguments(parser)

    def run(self, document, tolerances, caps, **options):
        model = self.validate_document(document)
        n, m = parse_quanta(options.get('n')), parse_quanta(options.get('m'))
        value = fcf(model, n, m, threads=caps.threads or None, tolerances=tolerances, caps=caps)
        lines = [format_real(value)]
        if options.get('verify'):
            self.verify(fcf_spec(model, n, m), value, lines, tolerances, caps, options, formatter=format_oracle)
        self.emit('\n'.join(lines), options.get('out'))
