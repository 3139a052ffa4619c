import json
import random
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from molcurate.fingerprint import (
    Fingerprint,
    FingerprintArray,
    ecfp,
    ecfp_identifiers,
    min_distance_to_set,
    naive_min_distance,
    tanimoto_distance,
)
from molcurate.molgraph import parse_smiles
from molcurate.standardizer import standardize
from molcurate.synthetic import random_molecule

ORACLE = json.loads((Path(__file__).parent / "data" / "oracle_ecfp.json").read_text())["molecules"]


def mol(smi):
    return standardize(parse_smiles(smi))


def random_fp(rng, width=256, density=None):
    p = rng.random() if density is None else density
    return Fingerprint.from_indices([k for k in range(width) if rng.random() < p], width)


fp_bits = st.integers(0, 2 ** 64 - 1).map(lambda b: Fingerprint(b, 64))


# ------------------------------------------------------------------- ecfp


def test_methane_radius0():
    assert ecfp(mol("C"), radius=0).popcount == 1


def test_environment_structure_matches_reference():
    bad = []
    for row in ORACLE:
        info = {}
        ecfp_identifiers(mol(row["smiles"]), row["radius"], info)
        classes = sorted(sorted(r for _, r in v) for v in info.values())
        if classes != row["classes"]:
            bad.append(row["smiles"])
    assert not bad


def test_shared_terminus():
    # CCO and CCCO share the hydroxyl and C-O environments
    a, b = ecfp_identifiers(mol("CCO")), ecfp_identifiers(mol("CCCO"))
    assert a & b
    assert tanimoto_distance(ecfp(mol("CCO")), ecfp(mol("CCCO"))) < 1


def test_stable_bits():
    # frozen regression value: bit positions must not drift between versions
    assert ecfp(mol("CCO")).on_bits() == ecfp(mol("OCC")).on_bits()
    assert ecfp(mol("CCO"), width=64).on_bits() == [13, 14, 19, 39, 42, 59]


def test_width_must_be_power_of_two():
    with pytest.raises(ValueError):
        ecfp(mol("C"), width=1000)


def test_kekule_aromatic_same_fingerprint():
    assert ecfp(mol("C1=CC=CC=C1O")) == ecfp(mol("Oc1ccccc1"))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 2 ** 32 - 1))
def test_ecfp_permutation_invariant(seed, perm_seed):
    m = standardize(random_molecule(random.Random(seed)))
    order = list(range(len(m.atoms)))
    random.Random(perm_seed).shuffle(order)
    assert ecfp(m.permute(order)) == ecfp(m)


# -------------------------------------------------------------- distances


def test_identical_zero():
    f = Fingerprint.from_indices([1, 5, 9])
    assert tanimoto_distance(f, f) == 0


def test_disjoint_one():
    assert tanimoto_distance(Fingerprint.from_indices([1]), Fingerprint.from_indices([2])) == 1


def test_arithmetic_example():
    a = Fingerprint.from_indices([1, 2, 3])
    b = Fingerprint.from_indices([2, 3, 4])
    assert tanimoto_distance(a, b) == pytest.approx(0.5)


def test_empty_pair_zero():
    assert tanimoto_distance(Fingerprint(0), Fingerprint(0)) == 0


def test_width_mismatch():
    with pytest.raises(ValueError):
        tanimoto_distance(Fingerprint(1, 64), Fingerprint(1, 128))


def test_popcount_and_words():
    rng = random.Random(3)
    for _ in range(50):
        f = random_fp(rng)
        assert f.popcount == len(f.on_bits())
        assert int(np.bitwise_count(f.to_words()).sum()) == f.popcount
        assert Fingerprint.from_hex(f.to_hex(), f.width) == f


@settings(max_examples=300)
@given(fp_bits, fp_bits, fp_bits)
def test_metric_axioms(a, b, c):
    dab = tanimoto_distance(a, b)
    assert 0 <= dab <= 1
    assert dab == tanimoto_distance(b, a)
    assert tanimoto_distance(a, a) == 0
    assert tanimoto_distance(a, c) <= dab + tanimoto_distance(b, c) + 1e-12


def test_array_distances_match_scalar():
    rng = random.Random(11)
    fps = [random_fp(rng) for _ in range(100)]
    arr = FingerprintArray(fps)
    q = random_fp(rng)
    assert arr.distances(q).tolist() == [tanimoto_distance(q, f) for f in fps]
    assert np.all(arr.lower_bounds(q) <= arr.distances(q))


# ---------------------------------------------------------- nearest search


def test_member_query():
    fps = [Fingerprint.from_indices(s, 64) for s in ([1], [2, 3], [1], [4])]
    assert min_distance_to_set(fps[2], fps) == (0.0, 0)


def test_singleton():
    a, b = Fingerprint.from_indices([1, 2], 64), Fingerprint.from_indices([2], 64)
    assert min_distance_to_set(a, [b]) == (0.5, 0)


def test_empty_set_rejected():
    with pytest.raises(ValueError):
        min_distance_to_set(Fingerprint(0), [])


def test_pruned_equals_naive_200():
    rng = random.Random(7)
    fps = [random_fp(rng) for _ in range(200)]
    for _ in range(50):
        q = random_fp(rng)
        assert min_distance_to_set(q, fps) == naive_min_distance(q, fps)


def test_pruned_equals_naive_10000():
    # narrow width and small sets make exact ties common
    rng = random.Random(2024)
    for _ in range(10_000):
        width = rng.choice([64, 128])
        fps = [random_fp(rng, width) for _ in range(rng.randint(1, 30))]
        q = random_fp(rng, width)
        assert min_distance_to_set(q, fps, block=rng.choice([1, 4, 256])) == naive_min_distance(q, fps)
