"""
Loop hafnian of a matrix file.

Run with: python manage.py lhaf graph.json [--threads N]
"""
from gaussamp.hafnian import lhaf_fast
from gaussamp.serializers import MatrixSerializer

from ._base import GaussAmpCommand, format_complex


class Command(GaussAmpCommand):
    help = 'Print the loop hafnian of a symmetric matrix document as "re im"'
    serializer_class = MatrixSerializer
    tolerance_name = 'symmetry'
    tolerance_help = 'Largest accepted |G[i][j] - G[j][i]|'
    kernel = staticmethod(lhaf_fast)

    def run(self, document, tolerances, caps, **options):
        matrix = self.validate_document(document, symmetry_tolerance=tolerances.symmetry)
        value = self.kernel(matrix, threads=caps.threads or None, cap=caps.hafnian_dim,
                            compensated=caps.compensated_sum)
        self.emit(format_complex(value), options.get('out'))
