"""
Fock-basis amplitude <m| D(alpha) U(U) S(lam) U(U') |n> of a spec file.

Run with: python manage.py amplitude spec.json [--verify --cutoff 24]
"""
from gaussamp.amplitude import amplitude
from gaussamp.serializers import AmplitudeSpecSerializer

from ._base import GaussAmpCommand, format_complex


class Command(GaussAmpCommand):
    help = 'Print the amplitude of an amplitude-spec document as "re im"'
    serializer_class = AmplitudeSpecSerializer
    tolerance_name = 'verify'
    tolerance_help = 'Largest accepted pipeline/oracle difference with --verify'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_verify_arguments(parser)

    def run(self, document, tolerances, caps, **options):
        spec = self.validate_document(document)
        value = amplitude(spec, threads=caps.threads or None, tolerances=tolerances, caps=caps)
        lines = [format_complex(value)]
        if options.get('verify'):
            self.verify(spec, value, lines, tolerances, caps, options)
        self.emit('\n'.join(lines), options.get('out'))
