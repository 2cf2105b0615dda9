import numpy as np
import pytest

from emocascade.synth import write_planted_corpus


def direct_dft(x):
    """O(n^2) DFT, independent of numpy.fft."""
    n = len(x)
    k = np.arange(n)
    return np.array([np.sum(x * np.exp(-2j * np.pi * m * k / n)) for m in range(n)])


def direct_autocorr(x, max_lag):
    n = len(x)
    return [sum(x[i] * x[i - j] for i in range(j, n)) for j in range(max_lag + 1)]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def planted_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    write_planted_corpus(out, takes=2)
    return out
