import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from molcurate.molgraph import (
    SmilesError,
    canonicalize,
    fragments,
    parse_smiles,
    write_smiles,
)
from molcurate.molgraph.rings import find_sssr
from molcurate.standardizer import standardize
from molcurate.synthetic import random_molecule


def key(smi):
    return canonicalize(standardize(parse_smiles(smi)))[0]


# ---------------------------------------------------------------- parsing


def test_methane_hydrogens():
    m = parse_smiles("C")
    assert len(m.atoms) == 1 and not m.bonds
    assert m.atoms[0].implicit_h == 4


def test_ion_pair_is_two_fragments():
    m = parse_smiles("[Na+].[Cl-]")
    assert [a.charge for a in m.atoms] == [1, -1]
    assert not m.bonds
    assert len(fragments(m)) == 2


def test_benzene_parse():
    m = parse_smiles("c1ccccc1")
    assert all(a.aromatic and a.implicit_h == 1 and a.in_ring for a in m.atoms)
    assert len(m.rings) == 1 and len(m.rings[0]) == 6


@pytest.mark.parametrize("text,offset", [("C(", 1), ("C1CC", 1), ("[Xx]", 1), ("C)", 1)])
def test_syntax_errors_report_offset(text, offset):
    with pytest.raises(SmilesError) as err:
        parse_smiles(text)
    assert err.value.offset == offset


def test_pentavalent_carbon_rejected():
    with pytest.raises(SmilesError):
        parse_smiles("C(C)(C)(C)(C)C")


def test_bracket_atom_fields():
    m = parse_smiles("[13CH3-]")
    a = m.atoms[0]
    assert (a.element, a.isotope, a.implicit_h, a.charge) == (6, 13, 3, -1)


@pytest.mark.parametrize("smi,n", [("CCO", 1), ("[Na+].[Cl-]", 2), ("C.C.C.C", 4)])
def test_fragment_counts(smi, n):
    assert len(fragments(parse_smiles(smi))) == n


def test_fragments_sorted_by_size():
    parts = fragments(parse_smiles("O.CCCC.CC"))
    assert [p.n_heavy for p in parts] == [4, 2, 1]


# ---------------------------------------------------------- canonical keys


def test_same_graph_same_key():
    assert key("OCC") == key("CCO")


def test_isomers_differ():
    assert key("CCO") != key("COC")


def test_kekule_and_aromatic_converge():
    assert key("C1=CC=CC=C1") == key("c1ccccc1")
    assert key("Cc1ccccc1") == key("CC1=CC=CC=C1")


def test_stereo_ignored():
    assert key("C[C@H](N)O") == key("C[C@@H](N)O") == key("CC(N)O")


def test_key_prefix():
    k = key("CCO")
    assert k.key.startswith(b"MK1/")
    assert 0 <= k.prefix64 < 2 ** 64


def test_isotopologues_distinct():
    assert key("[2H]C") != key("C")


def test_corpus_keys_round_trip_and_permute(corpus):
    rng = random.Random(5)
    for m in corpus[:300]:
        k, smi = canonicalize(m)
        assert canonicalize(standardize(parse_smiles(smi)))[0] == k
        order = list(range(len(m.atoms)))
        rng.shuffle(order)
        assert canonicalize(m.permute(order))[0] == k


def test_corpus_distinct_graphs_distinct_keys(corpus):
    # keys of distinct canonical SMILES never collide
    seen = {}
    for m in corpus:
        k, smi = canonicalize(m)
        assert seen.setdefault(k, smi) == smi


# ------------------------------------------------------------------ rings


def test_cyclomatic_number_matches_sssr(corpus):
    for m in corpus:
        expected = len(m.bonds) - len(m.atoms) + len(m.components)
        assert len(m.rings) == expected


def test_sssr_naphthalene():
    m = parse_smiles("c1ccc2ccccc2c1")
    assert sorted(len(r) for r in m.rings) == [6, 6]


def test_sssr_cubane():
    # cubane: 12 bonds, 8 atoms -> 5 rings, all 4-membered
    m = parse_smiles("C12C3C4C1C5C2C3C45")
    assert sorted(len(r) for r in m.rings) == [4] * 5


def test_find_sssr_empty():
    assert find_sssr(3, [(0, 1), (1, 2)]) == ()


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_fragments_partition_atoms(seed):
    rng = random.Random(seed)
    a, b = random_molecule(rng, max_heavy=10), random_molecule(rng, max_heavy=10)
    m = parse_smiles(write_smiles(a) + "." + write_smiles(b))
    parts = fragments(m)
    assert sum(len(p.atoms) for p in parts) == len(m.atoms)
    assert sorted(a.element for p in parts for a in p.atoms) == sorted(a.element for a in m.atoms)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 2 ** 32 - 1))
def test_permutation_invariance_property(seed, perm_seed):
    m = standardize(random_molecule(random.Random(seed)))
    order = list(range(len(m.atoms)))
    random.Random(perm_seed).shuffle(order)
    assert canonicalize(m.permute(order)) == canonicalize(m)
