"""Topological polar surface area from per-atom N and O contributions."""

from __future__ import annotations

from molcurate.descriptors.tables import tpsa_rows
from molcurate.molgraph.graph import Molecule


def atom_environment(m: Molecule, i: int) -> tuple:
    """(Z, charge, H count, heavy neighbours, single, double, triple, aromatic, in 3-ring)."""
    a = m.atoms[i]
    counts = [0, 0, 0, 0]
    n_nbrs = 0
    for j, kb in m.adjacency[i]:
        if m.atoms[j].element == 1:
            continue
        n_nbrs += 1
        b = m.bonds[kb]
        if b.aromatic:
            counts[3] += 1
        elif b.order in (1, 2, 3):
            counts[b.order - 1] += 1
    ring3 = any(len(r) == 3 and i in r for r in m.relevant_rings)
    return (a.element, a.charge, m.total_h(i), n_nbrs, *counts, ring3)


def atom_contribution(m: Molecule, i: int) -> float:
    """Contribution of atom ``i``; 0 for atoms without a table entry."""
    if m.atoms[i].element not in (7, 8):
        return 0.0
    env = atom_environment(m, i)
    table = tpsa_rows()
    value = table.get(env)
    if value is None:
        value = table.get(env[:-1] + (None,), 0.0)
    return value


def tpsa(m: Molecule) -> float:
    """Polar surface area in square angstroms (nitrogen and oxygen terms)."""
    return sum(atom_contribution(m, i) for i, a in enumerate(m.atoms) if a.element in (7, 8))
