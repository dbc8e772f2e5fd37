import numpy as np
import pytest


def random_hermitian(n, rng, lo=0.1, hi=1.0, signs=False):
    """Hermitian matrix with eigenvalues drawn from [lo, hi] (both ends hit)."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(z)
    lam = rng.uniform(lo, hi, n)
    lam[0], lam[-1] = lo, hi
    if signs:
        lam = lam * rng.choice([-1.0, 1.0], n)
    a = (q * lam) @ q.conj().T
    return 0.5 * (a + a.conj().T)


def random_vector(n, rng):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _fixed_columns(monkeypatch):
    # argparse wraps help text to the terminal width
    monkeypatch.setenv("COLUMNS", "80")
