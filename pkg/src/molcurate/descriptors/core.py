"""The descriptor set behind the feasibility filter and the drug-likeness catalog."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from molcurate.descriptors.crippen import crippen_logp_mr
from molcurate.descriptors.tables import atomic_weights
from molcurate.descriptors.tpsa import tpsa
from molcurate.molgraph.canon import atom_invariants, refine, _dense
from molcurate.molgraph.graph import Molecule


@dataclass(frozen=True)
class DescriptorSet:
    """Physicochemical descriptors of one (standardized) molecule.

    ``hetero_carbon_ratio`` is ``inf`` for a molecule with heteroatoms but no
    carbon, and 0 when it has neither.
    """

    mol_weight: float
    n_atoms: int
    n_heavy: int
    n_fragments: int
    hba: int
    hbd: int
    logp: float
    mr: float
    tpsa: float
    n_rot_bonds: int
    n_rigid_bonds: int
    n_rings: int
    max_ring_size: int
    n_carbons: int
    n_heteroatoms: int
    hetero_carbon_ratio: float
    n_charged_groups: int
    total_charge: int
    n_aromatic_bonds: int
    n_stereocenters: int

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in _FIELDS}


_FIELDS = tuple(f.name for f in fields(DescriptorSet))


def molecular_weight(m: Molecule) -> float:
    """Sum of standard atomic weights, implicit hydrogens included.

    Isotope labels do not change the weight.
    """
    w = atomic_weights()
    total = 0.0
    n_h = 0
    for a in m.atoms:
        if a.element:
            total += w[a.element]
        n_h += a.implicit_h
    return total + n_h * w[1]


def _is_amide_bond(m: Molecule, kb: int) -> bool:
    # C(=O)-N with a three-connected carbon
    b = m.bonds[kb]
    if b.aromatic or b.order != 1:
        return False
    for c, n in ((b.begin, b.end), (b.end, b.begin)):
        if m.atoms[c].element != 6 or m.atoms[n].element != 7 or m.atoms[c].aromatic:
            continue
        if len(m.adjacency[c]) + m.atoms[c].implicit_h != 3:
            continue
        for j, k2 in m.adjacency[c]:
            bo = m.bonds[k2]
            if j != n and m.atoms[j].element == 8 and not m.atoms[j].aromatic \
                    and bo.order == 2 and not bo.aromatic:
                return True
    return False


def _in_triple(m: Molecule, i: int) -> bool:
    return any(m.bonds[kb].order == 3 and not m.bonds[kb].aromatic for _, kb in m.adjacency[i])


def rotatable_bonds(m: Molecule, strict: bool = True) -> int:
    """Acyclic single bonds joining two non-terminal heavy atoms.

    The strict count (default) also skips bonds to triple-bonded atoms, whose
    rotation changes nothing, and amide C-N bonds, which are not free to turn.
    """
    count = 0
    for kb, b in enumerate(m.bonds):
        if b.aromatic or b.order != 1 or b.in_ring:
            continue
        i, j = b.begin, b.end
        if m.atoms[i].element == 1 or m.atoms[j].element == 1:
            continue
        if m.heavy_degree(i) < 2 or m.heavy_degree(j) < 2:
            continue
        if strict and (_in_triple(m, i) or _in_triple(m, j) or _is_amide_bond(m, kb)):
            continue
        count += 1
    return count


def rigid_bonds(m: Molecule) -> int:
    """Bonds that are cyclic, multiple or aromatic, or amide C-N bonds."""
    count = 0
    for kb, b in enumerate(m.bonds):
        if m.atoms[b.begin].element == 1 or m.atoms[b.end].element == 1:
            continue
        if b.in_ring or b.aromatic or b.order != 1 or _is_amide_bond(m, kb):
            count += 1
    return count


def stereocenters(m: Molecule) -> int:
    """Carbons carrying four substituents that differ by refined Morgan rank.

    A carbon with two or more hydrogens never qualifies; one hydrogen counts
    as a substituent of its own kind.
    """
    n = len(m.atoms)
    if n == 0:
        return 0
    nbrs = [[(j, m.bonds[kb].kind) for j, kb in m.adjacency[i]] for i in range(n)]
    ranks = refine(_dense(atom_invariants(m)), nbrs)
    count = 0
    for i, a in enumerate(m.atoms):
        if a.element != 6 or a.implicit_h > 1:
            continue
        adj = m.adjacency[i]
        if len(adj) + a.implicit_h != 4:
            continue
        if any(m.bonds[kb].order != 1 or m.bonds[kb].aromatic for _, kb in adj):
            continue
        if len({ranks[j] for j, _ in adj}) == len(adj):
            count += 1
    return count


def compute_descriptors(m: Molecule, strict_rotatable: bool = True) -> DescriptorSet:
    """Every descriptor the filters need, for one molecule."""
    n_h = sum(a.implicit_h for a in m.atoms)
    n_explicit_h = sum(1 for a in m.atoms if a.element == 1)
    n_heavy = len(m.atoms) - n_explicit_h
    hba = hbd = carbons = hetero = charged = charge = 0
    for i, a in enumerate(m.atoms):
        if a.element in (7, 8):
            hba += 1
            hbd += m.total_h(i)
        if a.element == 6:
            carbons += 1
        elif a.element != 1:
            hetero += 1
        if a.charge:
            charged += 1
            charge += a.charge
    if carbons:
        ratio = hetero / carbons
    else:
        ratio = math.inf if hetero else 0.0
    logp, mr = crippen_logp_mr(m)
    return DescriptorSet(
        mol_weight=molecular_weight(m),
        n_atoms=n_heavy + n_explicit_h + n_h,
        n_heavy=n_heavy,
        n_fragments=len(m.components),
        hba=hba,
        hbd=hbd,
        logp=logp,
        mr=mr,
        tpsa=tpsa(m),
        n_rot_bonds=rotatable_bonds(m, strict_rotatable),
        n_rigid_bonds=rigid_bonds(m),
        n_rings=len(m.rings),
        max_ring_size=max((len(r) for r in m.rings), default=0),
        n_carbons=carbons,
        n_heteroatoms=hetero,
        hetero_carbon_ratio=ratio,
        n_charged_groups=charged,
        total_charge=charge,
        n_aromatic_bonds=sum(1 for b in m.bonds if b.aromatic),
        n_stereocenters=stereocenters(m),
    )
