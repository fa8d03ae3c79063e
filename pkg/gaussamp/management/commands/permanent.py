"""
Permanent of a square matrix file (Ryser formula).

Run with: python manage.py permanent weights.json
"""
from gaussamp.matchgraph import permanent
from gaussamp.serializers import MatrixSerializer

from ._base import GaussAmpCommand, format_complex


class Command(GaussAmpCommand):
    help = 'Print the permanent of a square matrix document as "re im"'
    serializer_class = MatrixSerializer
    cap_setting = 'PERMANENT_MAX_DIM'
    cap_name = 'permanent_dim'

    def run(self, document, tolerances, caps, **options):
        weights = self.validate_document(document, require_symmetric=False)
        self.emit(format_complex(permanent(weights, cap=caps.permanent_dim)), options.get('out'))
