import numpy as np
import pytest

from hmmreduce.corpus import corpus
from hmmreduce.reduction import reduce


@pytest.fixture(scope="session")
def models():
    return corpus(200)


@pytest.fixture(scope="session")
def reduced_corpus(models):
    out = []
    for i, family, h, S in models:
        out.append((i, family, h, S, reduce(h, S, "single"), reduce(h, S, "multi")))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
