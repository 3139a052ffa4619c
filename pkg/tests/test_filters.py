import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import COMPLIANT, descriptor_set
from molcurate.descriptors import compute_descriptors
from molcurate.filters import (
    UnknownFilterError,
    apply_filter,
    feasibility_check,
    filter_names,
    filter_profile,
    registry,
)
from molcurate.molgraph import canonicalize, parse_smiles
from molcurate.standardizer import standardize


def prepared(smi):
    m = standardize(parse_smiles(smi))
    return compute_descriptors(m), len(canonicalize(m)[0])


# ------------------------------------------------------------- feasibility


def test_ethanol_feasible():
    v = feasibility_check(*prepared("CCO"))
    assert v.passed and v.violations == []


def test_four_fragments():
    v = feasibility_check(*prepared("C.C.C.C"))
    assert not v.passed
    assert v.violations == [("fragments", 4, 3)]


def test_long_alkane():
    d, n = prepared("C" * 180)
    v = feasibility_check(d, n)
    names = [r for r, _, _ in v.violations]
    assert "n_atoms" in names
    assert ("mol_weight" in names) == (d.mol_weight > 2500)
    assert d.n_atoms == 180 + 362


def test_key_length_strict():
    assert feasibility_check(COMPLIANT, 1999).passed
    v = feasibility_check(COMPLIANT, 2000)
    assert v.violations == [("key_length", 2000, 2000)]


def test_every_violation_listed():
    d = descriptor_set(n_fragments=5, hba=21, hbd=16, logp=-11.0, tpsa=600.0)
    v = feasibility_check(d, 10)
    assert [r for r, _, _ in v.violations] == ["fragments", "hba", "hbd", "logp", "tpsa"]


def test_feasibility_pure():
    d = descriptor_set(mol_weight=2500.0)
    assert feasibility_check(d, 40) == feasibility_check(d, 40)


# ----------------------------------------------------------------- catalog


def test_thirteen_filters():
    assert len(filter_names()) == 13


@pytest.mark.parametrize("name", ["Glaxo", "Brenk", "ZINC-basic"])
def test_substructure_filters_rejected(name):
    with pytest.raises(UnknownFilterError, match="substructure"):
        apply_filter(name, COMPLIANT)


def test_unknown_filter():
    with pytest.raises(UnknownFilterError):
        apply_filter("PAINS", COMPLIANT)


def test_compliant_passes_everything():
    for name in filter_names():
        assert apply_filter(name, COMPLIANT).passed, name


def test_lipinski_ethanol():
    v = apply_filter("Lipinski", prepared("CCO")[0])
    assert v.passed and not v.violations


def test_lipinski_budget():
    assert apply_filter("Lipinski", descriptor_set(mol_weight=550.0)).passed
    v = apply_filter("Lipinski", descriptor_set(mol_weight=550.0, logp=5.5))
    assert not v.passed and len(v.violations) == 2


def test_veber_rotatable():
    v = apply_filter("Veber", descriptor_set(n_rot_bonds=11))
    assert not v.passed
    assert v.violations == [("n_rot_bonds", 11, 10)]


def test_hetero_ratio_inf_fails():
    v = apply_filter("FAF4-druglike", descriptor_set(n_carbons=0, hetero_carbon_ratio=float("inf")))
    assert ("hetero_carbon_ratio", float("inf"), 1.1) in v.violations


def test_profile_empty_names():
    assert filter_profile([COMPLIANT], []) == {}


def test_profile_single_molecule():
    prof = filter_profile([COMPLIANT], filter_names())
    assert all(row["fraction"] == 1.0 for row in prof.values())


def test_profile_matches_brute_force():
    rng = random.Random(17)
    floats = {"mol_weight": (50, 700), "logp": (-6, 8), "tpsa": (0, 200)}
    ints = {"hba": (0, 14), "hbd": (0, 8), "n_rot_bonds": (0, 14), "n_rings": (0, 8),
            "n_heavy": (5, 60)}
    data = []
    for _ in range(100):
        kw = {f: rng.uniform(lo, hi) for f, (lo, hi) in floats.items()}
        kw.update({f: rng.randint(lo, hi) for f, (lo, hi) in ints.items()})
        data.append(descriptor_set(**kw))
    names = filter_names()
    prof = filter_profile(data, names)
    for name in names:
        want = sum(1 for d in data if apply_filter(name, d).passed)
        assert prof[name]["passed"] == want
        assert prof[name]["fraction"] == want / 100


shared = st.fixed_dictionaries({
    "mol_weight": st.floats(0, 1000), "logp": st.floats(-10, 10), "hba": st.integers(0, 20),
    "hbd": st.integers(0, 10), "tpsa": st.floats(0, 300), "n_rot_bonds": st.integers(0, 20),
    "n_rigid_bonds": st.integers(0, 40), "n_rings": st.integers(0, 10),
    "max_ring_size": st.integers(0, 20), "n_carbons": st.integers(0, 40),
    "n_heteroatoms": st.integers(0, 20), "hetero_carbon_ratio": st.floats(0, 3),
    "n_charged_groups": st.integers(0, 6), "total_charge": st.integers(-6, 6),
})


@settings(max_examples=500)
@given(shared)
def test_leadlike_within_druglike(kw):
    d = descriptor_set(**kw)
    lead = {r.descriptor: r for r in registry()["FAF4-leadlike"].rules}
    drug = {r.descriptor: r for r in registry()["FAF4-druglike"].rules}
    common = set(lead) & set(drug)
    if all(lead[k].violation(getattr(d, k)) is None for k in common):
        assert all(drug[k].violation(getattr(d, k)) is None for k in common)
