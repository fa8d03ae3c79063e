"""
Random inputs and fixture access shared by the test modules.
"""
import json
from pathlib import Path

import numpy as np

FIXTURES = Path(__file__).resolve().parent / 'fixtures'


def fixture_path(name):
    return str(FIXTURES / name)


def load_fixture(name):
    with open(FIXTURES / name) as handle:
        return json.load(handle)


def random_symmetric(rng, n, scale=1.0):
    raw = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (raw + raw.T) / 2


def random_unitary(rng, n):
    """Haar-random unitary from the QR of a complex Gaussian matrix."""
    raw = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(raw)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def relative_error(value, reference):
    return abs(value - reference) / max(1.0, abs(reference))
