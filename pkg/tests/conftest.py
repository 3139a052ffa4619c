import random

import pytest

from molcurate.molgraph import parse_smiles
from molcurate.standardizer import standardize
from molcurate.synthetic import random_smiles


def synthetic_corpus(n, seed=2024):
    rng = random.Random(seed)
    return [random_smiles(rng) for _ in range(n)]


@pytest.fixture(scope="session")
def corpus_smiles():
    return synthetic_corpus(1000)


@pytest.fixture(scope="session")
def corpus(corpus_smiles):
    return [standardize(parse_smiles(s)) for s in corpus_smiles]
