"""
Hafnian (loops ignored) of a matrix file.

Run with: python manage.py haf graph.json
"""
from gaussamp.hafnian import haf_fast

from .lhaf import Command as LoopHafnianCommand


class Command(LoopHafnianCommand):
    help = 'Print the hafnian of a symmetric matrix document as "re im"; the diagonal is ignored'
    kernel = staticmethod(haf_fast)
