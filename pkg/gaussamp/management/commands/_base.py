"""
Shared plumbing for the gaussamp management commands.

Input documents are read from JSON files and validated with the app's DRF
serializers; library exceptions become CommandError with the exit codes
2 (invalid input or unreadable file), 3 (cap exceeded), 4 (verification
mismatch) and 1 (anything else).
"""
import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from gaussamp.conf import check_hard_limit, get_caps, get_tolerances
from gaussamp.exceptions import CapExceededError, GaussAmpError, InvalidInputError, VerificationError
from gaussamp.fockoracle import verify_amplitude

logger = logging.getLogger(__name__)

EXIT_INVALID = 2
EXIT_CAP = 3
EXIT_VERIFY = 4


def format_real(value, digits=15):
    value = float(value)
    if value == 0.0:
        value = 0.0  # drops the sign of -0.0
    return format(value, f'.{digits}g')


def format_complex(value):
    value = complex(value)
    return f'{format_real(value.real)} {format_real(value.imag)}'


def parse_quanta(text):
    if text is None:
        return None
    try:
        values = [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise CommandError(f"Expected comma-separated integers, got {text!r}", returncode=EXIT_INVALID)
    if any(v < 0 for v in values):
        raise CommandError(f"Quanta must be non-negative, got {text!r}", returncode=EXIT_INVALID)
    return values


class GaussAmpCommand(BaseCommand):
    """Base class: subclasses implement run(document, **options)."""

    serializer_class = None
    tolerance_name = None
    tolerance_help = 'numerical tolerance'
    cap_setting = 'HAFNIAN_MAX_DIM'
    cap_name = 'hafnian_dim'

    def add_arguments(self, parser):
        parser.add_argument('input', help='Path to the JSON input document')
        parser.add_argument('--threads', type=int, default=None, help='Worker threads for the hafnian kernel')
        parser.add_argument('--tolerance', type=float, default=None, help=self.tolerance_help)
        parser.add_argument('--max-dim', type=int, default=None, dest='max_dim',
                            help='Override the matrix dimension cap (up to the hard limit)')
        parser.add_argument('--out', default=None, help='Write the result here instead of stdout')

    def load_document(self, path):
        path = Path(path)
        if not path.is_file():
            raise CommandError(f"Input file not found: {path}", returncode=EXIT_INVALID)
        try:
            with path.open() as handle:
                return json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise CommandError(f"Could not read {path}: {exc}", returncode=EXIT_INVALID) from exc

    def validate_document(self, data, **kwargs):
        serializer = self.serializer_class(data=data, **kwargs)
        if not serializer.is_valid():
            raise CommandError(f"Invalid input: {json.dumps(serializer.errors)}", returncode=EXIT_INVALID)
        return serializer.to_domain()

    def build_config(self, options):
        threads = options.get('threads')
        if threads is not None and threads < 1:
            raise InvalidInputError(f"--threads must be at least 1, got {threads}")
        tolerance = options.get('tolerance')
        if tolerance is not None and tolerance < 0:
            raise InvalidInputError(f"--tolerance must be non-negative, got {tolerance}")
        overrides = {self.tolerance_name: tolerance} if self.tolerance_name else {}
        tolerances = get_tolerances().with_overrides(**overrides)
        max_dim = check_hard_limit(self.cap_setting, options.get('max_dim'))
        caps = get_caps().with_overrides(**{self.cap_name: max_dim, 'threads': threads})
        return tolerances, caps

    def add_verify_arguments(self, parser):
        parser.add_argument('--verify', action='store_true',
                            help='Cross-check against the truncated Fock-space simulator')
        parser.add_argument('--cutoff', type=int, default=None,
                            help='Per-mode Fock cutoff of the verification simulator')

    def verify(self, spec, value, lines, tolerances, caps, options, formatter=format_complex):
        """
        Append the oracle value and the difference to lines. On a mismatch the
        lines are written out before VerificationError propagates.
        """
        cutoff = check_hard_limit('FOCK_CUTOFF', options.get('cutoff')) or caps.fock_cutoff
        try:
            reference, difference = verify_amplitude(spec, value, cutoff=cutoff, tolerance=tolerances.verify)
        except VerificationError as exc:
            lines += [f'oracle {formatter(exc.reference)}', f'difference {format_real(exc.difference, 3)}']
            self.emit('\n'.join(lines), options.get('out'))
            raise
        lines += [f'oracle {formatter(reference)}', f'difference {format_real(difference, 3)}']
        return lines

    def emit(self, text, out=None):
        if out:
            Path(out).write_text(text if text.endswith('\n') else text + '\n')
            self.stderr.write(self.style.SUCCESS(f'Wrote {out}'))
        else:
            self.stdout.write(text.rstrip('\n'))

    def handle(self, *args, **options):
        try:
            tolerances, caps = self.build_config(options)
            document = self.load_document(options['input'])
            return self.run(document, tolerances=tolerances, caps=caps, **options)
        except CommandError:
            raise
        except InvalidInputError as exc:
            raise CommandError(str(exc), returncode=EXIT_INVALID) from exc
        except CapExceededError as exc:
            raise CommandError(str(exc), returncode=EXIT_CAP) from exc
        except VerificationError as exc:
            raise CommandError(str(exc), returncode=EXIT_VERIFY) from exc
        except GaussAmpError as exc:
            logger.error("%s failed: %s", self.__class__.__module__, exc, exc_info=True)
            raise CommandError(str(exc), returncode=1) from exc

    def run(self, document, tolerances, caps, **options):
        raise NotImplementedError
