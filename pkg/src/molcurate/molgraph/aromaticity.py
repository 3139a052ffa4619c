"""Kekulization and Hückel aromaticity perception."""

from __future__ import annotations

from dataclasses import replace

from molcurate.molgraph import elements
from molcurate.molgraph.graph import UNASSIGNED, Molecule

# Elements allowed to take part in an aromatic ring.
AROMATIC_ELEMENTS = frozenset({5, 6, 7, 8, 15, 16, 33, 34, 52})


class KekulizeError(ValueError):
    """No alternating single/double assignment exists for the aromatic bonds."""


def needs_pi_bond(m: Molecule, idx: int) -> bool:
    """Whether an aromatic atom must receive a double bond on kekulization."""
    a = m.atoms[idx]
    vals = elements.allowed_valences(a.element, a.charge)
    if not vals:
        return False
    v = m.explicit_valence(idx) + a.implicit_h
    return (v + 1) in vals


def _perfect_matching(nodes, edges_of, limit=200_000):
    """Backtracking perfect matching, most-constrained vertex first."""
    match: dict[int, int] = {}
    steps = [0]

    def solve(free: set[int]) -> bool:
        if not free:
            return True
        steps[0] += 1
        if steps[0] > limit:
            raise KekulizeError("kekulization search limit exceeded")
        best, best_opts = None, None
        for v in free:
            opts = [w for w in edges_of[v] if w in free]
            if best_opts is None or len(opts) < len(best_opts) or (
                len(opts) == len(best_opts) and v < best
            ):
                best, best_opts = v, opts
                if not opts:
                    return False
        for w in sorted(best_opts):
            match[best] = w
            match[w] = best
            if solve(free - {best, w}):
                return True
            del match[best], match[w]
        return False

    if not solve(set(nodes)):
        return None
    return match


def kekulize(m: Molecule) -> Molecule:
    """Assign integer orders to aromatic bonds and clear all aromatic flags.

    Bonds that already carry an integer order keep it. Raises
    :class:`KekulizeError` when the pi-bearing atoms cannot be perfectly
    matched along unassigned aromatic bonds.
    """
    if not any(b.order == UNASSIGNED for b in m.bonds):
        if not any(a.aromatic for a in m.atoms) and not any(b.aromatic for b in m.bonds):
            return m
        atoms = [replace(a, aromatic=False) if a.aromatic else a for a in m.atoms]
        bonds = [replace(b, aromatic=False) if b.aromatic else b for b in m.bonds]
        return Molecule(atoms, bonds, m.rings)

    pi_atoms = set()
    for i, a in enumerate(m.atoms):
        if a.aromatic and any(m.bonds[kb].order == UNASSIGNED for _, kb in m.adjacency[i]):
            if needs_pi_bond(m, i):
                pi_atoms.add(i)
    edges_of: dict[int, list[int]] = {i: [] for i in pi_atoms}
    for b in m.bonds:
        if b.order == UNASSIGNED and b.begin in pi_atoms and b.end in pi_atoms:
            edges_of[b.begin].append(b.end)
            edges_of[b.end].append(b.begin)
    match = _perfect_matching(sorted(pi_atoms), edges_of)
    if match is None:
        raise KekulizeError("no Kekulé structure for the aromatic system")
    atoms = [replace(a, aromatic=False) if a.aromatic else a for a in m.atoms]
    bonds = []
    for b in m.bonds:
        if b.order == UNASSIGNED:
            order = 2 if match.get(b.begin) == b.end else 1
            bonds.append(replace(b, order=order, aromatic=False))
        elif b.aromatic:
            bonds.append(replace(b, aromatic=False))
        else:
            bonds.append(b)
    return Molecule(atoms, bonds, m.rings)


def _pi_electrons(m: Molecule, idx: int):
    """Pi electrons an atom donates to a ring, or None if it cannot be aromatic."""
    a = m.atoms[idx]
    if a.element not in AROMATIC_ELEMENTS:
        return None
    endo = exo = 0
    exo_partner = None
    for j, kb in m.adjacency[idx]:
        b = m.bonds[kb]
        if b.order == 3:
            return None
        if b.order == 2:
            if b.in_ring:
                endo += 1
            else:
                exo += 1
                exo_partner = m.atoms[j].element
    if endo + exo > 1:
        return None
    if endo == 1:
        return 1
    if exo == 1:
        # exocyclic C=O / C=N / C=S leaves an empty p orbital
        if a.element == 6 and exo_partner in (7, 8, 16):
            return 0
        return None
    n_conn = m.degree(idx) + a.implicit_h
    z, q = a.element, a.charge
    if z == 6 or z == 14:
        return {-1: 2, 1: 0}.get(q)
    if z == 5:
        return 0 if q == 0 and n_conn == 3 else None
    if z in (7, 15, 33):
        if q == 0 and n_conn == 3:
            return 2
        if q == -1 and n_conn == 2:
            return 2
        return None
    if z in (8, 16, 34, 52):
        return 2 if q == 0 and n_conn == 2 else None
    return None


def perceive_aromaticity(m: Molecule) -> Molecule:
    """Flag atoms and bonds of Hückel (4n+2) rings as aromatic.

    Works on a kekulized molecule. Each relevant ring is tested alone and
    then every pair of rings sharing a bond is tested as one fused system.
    An atom with a double bond inside any ring donates one electron, so the
    result does not depend on which Kekulé structure was supplied.
    """
    m = kekulize(m)
    rings = m.relevant_rings
    if not rings:
        return m
    electrons = {}
    for r in rings:
        for i in r:
            if i not in electrons:
                electrons[i] = _pi_electrons(m, i)
    ring_edges = []
    for r in rings:
        es = set()
        for k in range(len(r)):
            a, b = r[k], r[(k + 1) % len(r)]
            es.add((a, b) if a < b else (b, a))
        ring_edges.append(es)

    def huckel(atom_set):
        total = 0
        for i in atom_set:
            e = electrons[i]
            if e is None:
                return False
            total += e
        return total % 4 == 2

    aromatic_edges = set()
    aromatic_ring = [huckel(r) for r in rings]
    for k, r in enumerate(rings):
        if aromatic_ring[k]:
            aromatic_edges |= ring_edges[k]
    for x in range(len(rings)):
        for y in range(x + 1, len(rings)):
            if aromatic_ring[x] and aromatic_ring[y]:
                continue
            if not (ring_edges[x] & ring_edges[y]):
                continue
            if huckel(set(rings[x]) | set(rings[y])):
                aromatic_edges |= ring_edges[x] | ring_edges[y]
    arom_atoms = {i for e in aromatic_edges for i in e}
    atoms = [
        a if a.aromatic == (i in arom_atoms) else replace(a, aromatic=i in arom_atoms)
        for i, a in enumerate(m.atoms)
    ]
    bonds = []
    for b in m.bonds:
        key = (b.begin, b.end) if b.begin < b.end else (b.end, b.begin)
        flag = key in aromatic_edges
        bonds.append(b if b.aromatic == flag else replace(b, aromatic=flag))
    return Molecule(atoms, bonds, m.rings)
