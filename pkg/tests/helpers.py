"""Shared builders for tests that need synthetic descriptor sets."""

from dataclasses import replace

from molcurate.descriptors import DescriptorSet

# a drug-sized molecule that sits inside every catalog bound
COMPLIANT = DescriptorSet(
    mol_weight=300.0, n_atoms=40, n_heavy=22, n_fragments=1, hba=5, hbd=1,
    logp=2.0, mr=80.0, tpsa=90.0, n_rot_bonds=5, n_rigid_bonds=15, n_rings=2,
    max_ring_size=6, n_carbons=16, n_heteroatoms=6, hetero_carbon_ratio=0.375,
    n_charged_groups=0, total_charge=0, n_aromatic_bonds=12, n_stereocenters=1,
)


def descriptor_set(**overrides) -> DescriptorSet:
    return replace(COMPLIANT, **overrides)
