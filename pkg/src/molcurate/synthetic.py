"""Random but chemically valid molecules, for fixtures, property tests and load tests.

Molecules are grown as graphs: a spanning tree of heavy atoms with a free
valence budget, optional ring closures, optional double bonds, and optional
pre-built aromatic rings (benzene, pyridine, thiophene, pyrrole, furan) in a
Kekulé form. Hydrogens fill whatever valence is left.
"""

from __future__ import annotations

import random

from molcurate.molgraph.graph import Atom, Bond, Molecule
from molcurate.molgraph.smiles import write_smiles

# (atomic number, valence, relative weight)
_ELEMENTS = [(6, 4, 60), (7, 3, 12), (8, 2, 12), (16, 2, 3), (9, 1, 3), (17, 1, 3), (35, 1, 1)]

# ring templates: element list and Kekulé bond orders around the ring
_RINGS = [
    ((6, 6, 6, 6, 6, 6), (2, 1, 2, 1, 2, 1)),
    ((7, 6, 6, 6, 6, 6), (2, 1, 2, 1, 2, 1)),
    ((16, 6, 6, 6, 6), (1, 2, 1, 2, 1)),
    ((7, 6, 6, 6, 6), (1, 2, 1, 2, 1)),
    ((8, 6, 6, 6, 6), (1, 2, 1, 2, 1)),
]


class _Builder:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.elem: list[int] = []
        self.cap: list[int] = []  # remaining valence
        self.bonds: dict[tuple[int, int], int] = {}

    def atom(self, z, valence):
        self.elem.append(z)
        self.cap.append(valence)
        return len(self.elem) - 1

    def bond(self, a, b, order):
        self.bonds[(min(a, b), max(a, b))] = order
        self.cap[a] -= order
        self.cap[b] -= order

    def open_atoms(self):
        return [i for i, c in enumerate(self.cap) if c > 0]

    def add_ring(self, anchor):
        elems, orders = self.rng.choice(_RINGS)
        start = len(self.elem)
        for z in elems:
            self.atom(z, {6: 4, 7: 3, 8: 2, 16: 2}[z])
        n = len(elems)
        for k in range(n):
            self.bond(start + k, start + (k + 1) % n, orders[k])
        if anchor is not None:
            # attach through a ring carbon that still has a free valence
            sites = [start + k for k in range(n) if self.cap[start + k] > 0 and elems[k] == 6]
            self.bond(anchor, self.rng.choice(sites), 1)

    def pick_element(self):
        total = sum(w for _, _, w in _ELEMENTS)
        x = self.rng.uniform(0, total)
        for z, v, w in _ELEMENTS:
            x -= w
            if x <= 0:
                return z, v
        return _ELEMENTS[0][:2]

    def build(self) -> Molecule:
        atoms = []
        bond_list = []
        for (a, b), order in sorted(self.bonds.items()):
            bond_list.append(Bond(a, b, order))
        for i, z in enumerate(self.elem):
            atoms.append(Atom(z, implicit_h=self.cap[i]))
        return Molecule.from_parts(atoms, bond_list)


def random_molecule(rng: random.Random, max_heavy: int = 24, ring_prob: float = 0.3,
                    aromatic_prob: float = 0.35) -> Molecule:
    """Draw one connected, neutral, valence-correct molecule."""
    b = _Builder(rng)
    target = rng.randint(1, max_heavy)
    if rng.random() < aromatic_prob:
        b.add_ring(None)
    else:
        b.atom(6, 4)
    while len(b.elem) < target:
        open_ = b.open_atoms()
        if not open_:
            break
        anchor = rng.choice(open_)
        if rng.random() < aromatic_prob / 4 and len(b.elem) + 6 <= max_heavy:
            b.add_ring(anchor)
            continue
        z, v = b.pick_element()
        new = b.atom(z, v)
        b.bond(anchor, new, 1)
    # ring closures between atoms at least three bonds apart
    for _ in range(rng.randint(0, 2)):
        if rng.random() > ring_prob:
            continue
        open_ = b.open_atoms()
        rng.shuffle(open_)
        for x in open_:
            for y in open_:
                if x < y and (x, y) not in b.bonds and not _close(b, x, y):
                    b.bond(x, y, 1)
                    break
            else:
                continue
            break
    # a few double bonds between neighbours with spare valence
    for (x, y), order in list(b.bonds.items()):
        if order == 1 and b.cap[x] > 0 and b.cap[y] > 0 and rng.random() < 0.15:
            b.bonds[(x, y)] = 2
            b.cap[x] -= 1
            b.cap[y] -= 1
    return b.build()


def _close(b: _Builder, x: int, y: int) -> bool:
    """True if x and y are within two bonds (closing would make a 3-ring or worse)."""
    nbr = {}
    for (p, q) in b.bonds:
        nbr.setdefault(p, set()).add(q)
        nbr.setdefault(q, set()).add(p)
    first = nbr.get(x, set())
    if y in first:
        return True
    return any(y in nbr.get(z, set()) for z in first)


def random_smiles(rng: random.Random, **kwargs) -> str:
    """SMILES of :func:`random_molecule` written in a shuffled atom order."""
    m = random_molecule(rng, **kwargs)
    ranks = list(range(len(m.atoms)))
    rng.shuffle(ranks)
    return write_smiles(m, ranks)
