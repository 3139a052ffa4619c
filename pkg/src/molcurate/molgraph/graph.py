"""Immutable molecular graph: atoms, bonds and perceived rings."""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

from molcurate.molgraph import elements

# Bond order used for aromatic bonds straight out of the SMILES parser, before
# kekulization assigns them 1 or 2.
UNASSIGNED = 0


@dataclass(frozen=True, slots=True)
class Atom:
    element: int
    charge: int = 0
    isotope: int = 0
    implicit_h: int = 0
    aromatic: bool = False
    in_ring: bool = False
    chirality: str | None = None

    @property
    def symbol(self) -> str:
        return elements.SYMBOLS[self.element]


@dataclass(frozen=True, slots=True)
class Bond:
    begin: int
    end: int
    order: int = 1
    aromatic: bool = False
    in_ring: bool = False
    stereo: str | None = None

    def other(self, idx: int) -> int:
        return self.end if idx == self.begin else self.begin

    @property
    def kind(self) -> int:
        """Order with aromatic bonds mapped to 4; what canonical ranking sees."""
        return 4 if self.aromatic else self.order


class Molecule:
    """A molecular graph.

    Instances are treated as immutable: editing functions build new molecules
    through :meth:`from_parts`. Ring membership flags on atoms and bonds are
    always consistent with ``rings`` (smallest set of smallest rings).
    """

    __slots__ = ("atoms", "bonds", "rings", "__dict__")

    def __init__(self, atoms, bonds, rings):
        self.atoms: tuple[Atom, ...] = tuple(atoms)
        self.bonds: tuple[Bond, ...] = tuple(bonds)
        self.rings: tuple[tuple[int, ...], ...] = tuple(rings)

    @classmethod
    def from_parts(cls, atoms, bonds, rings=None, cyclic=None) -> "Molecule":
        """Build a molecule, perceiving rings unless ``rings`` is supplied.

        ``cyclic`` may carry precomputed per-bond ring flags.
        """
        from molcurate.molgraph.rings import find_sssr, ring_bond_flags

        atoms = list(atoms)
        bonds = list(bonds)
        n = len(atoms)
        seen = set()
        for b in bonds:
            if b.begin == b.end or not (0 <= b.begin < n and 0 <= b.end < n):
                raise ValueError(f"bond {b.begin}-{b.end} does not join two distinct atoms")
            pair = (b.begin, b.end) if b.begin < b.end else (b.end, b.begin)
            if pair in seen:
                raise ValueError(f"duplicate bond {pair}")
            seen.add(pair)
        edges = [(b.begin, b.end) for b in bonds]
        ring_bonds = cyclic if cyclic is not None else ring_bond_flags(n, edges)
        if rings is None:
            rings = find_sssr(n, edges, ring_bonds)
        ring_atoms = set()
        for r in rings:
            ring_atoms.update(r)
        atoms = [
            a if a.in_ring == (i in ring_atoms) else replace(a, in_ring=i in ring_atoms)
            for i, a in enumerate(atoms)
        ]
        bonds = [
            b if b.in_ring == flag else replace(b, in_ring=flag)
            for b, flag in zip(bonds, ring_bonds)
        ]
        return cls(atoms, bonds, rings)

    def __len__(self) -> int:
        return len(self.atoms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Molecule):
            return NotImplemented
        return self.atoms == other.atoms and self.bonds == other.bonds

    def __hash__(self) -> int:
        return hash((self.atoms, self.bonds))

    def __repr__(self) -> str:
        from molcurate.molgraph.smiles import write_smiles

        try:
            text = write_smiles(self)
        except Exception:  # repr must never fail
            text = f"{len(self.atoms)} atoms"
        return f"Molecule({text!r})"

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per atom, ``(neighbour, bond index)`` pairs in bond order."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.atoms]
        for k, b in enumerate(self.bonds):
            adj[b.begin].append((b.end, k))
            adj[b.end].append((b.begin, k))
        return tuple(tuple(x) for x in adj)

    @cached_property
    def relevant_rings(self) -> tuple[tuple[int, ...], ...]:
        """Relevant cycles: an atom-order independent superset of ``rings``."""
        from molcurate.molgraph.rings import relevant_cycles

        return relevant_cycles(len(self.atoms), [(b.begin, b.end) for b in self.bonds], self.rings,
                               cyclic=[b.in_ring for b in self.bonds])

    def neighbors(self, idx: int) -> list[int]:
        return [j for j, _ in self.adjacency[idx]]

    def degree(self, idx: int) -> int:
        return len(self.adjacency[idx])

    def bond_between(self, i: int, j: int) -> Bond | None:
        for k, kb in self.adjacency[i]:
            if k == j:
                return self.bonds[kb]
        return None

    def explicit_valence(self, idx: int) -> int:
        """Sum of bond orders; unassigned aromatic bonds count as 1."""
        total = 0
        for _, kb in self.adjacency[idx]:
            order = self.bonds[kb].order
            total += order if order else 1
        return total

    def total_h(self, idx: int) -> int:
        """Implicit hydrogens plus explicit hydrogen-atom neighbours."""
        atoms = self.atoms
        return atoms[idx].implicit_h + sum(
            1 for j, _ in self.adjacency[idx] if atoms[j].element == 1
        )

    def heavy_degree(self, idx: int) -> int:
        atoms = self.atoms
        return sum(1 for j, _ in self.adjacency[idx] if atoms[j].element != 1)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components as sorted atom-index tuples, by first atom."""
        seen = [False] * len(self.atoms)
        comps = []
        adj = self.adjacency
        for start in range(len(self.atoms)):
            if seen[start]:
                continue
            seen[start] = True
            stack = [start]
            comp = []
            while stack:
                i = stack.pop()
                comp.append(i)
                for j, _ in adj[i]:
                    if not seen[j]:
                        seen[j] = True
                        stack.append(j)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    def subgraph(self, atom_indices) -> "Molecule":
        """Induced subgraph on ``atom_indices`` (kept in ascending order)."""
        keep = sorted(atom_indices)
        remap = {old: new for new, old in enumerate(keep)}
        atoms = [self.atoms[i] for i in keep]
        bonds = [
            replace(b, begin=remap[b.begin], end=remap[b.end])
            for b in self.bonds
            if b.begin in remap and b.end in remap
        ]
        rings = [tuple(remap[i] for i in r) for r in self.rings if r[0] in remap]
        return Molecule(atoms, bonds, rings)

    def permute(self, order) -> "Molecule":
        """Renumber atoms so that new atom ``k`` is old atom ``order[k]``."""
        order = list(order)
        if sorted(order) != list(range(len(self.atoms))):
            raise ValueError("order must be a permutation of atom indices")
        inv = [0] * len(order)
        for new, old in enumerate(order):
            inv[old] = new
        atoms = [self.atoms[old] for old in order]
        bonds = [replace(b, begin=inv[b.begin], end=inv[b.end]) for b in self.bonds]
        return Molecule.from_parts(atoms, bonds)

    @property
    def n_heavy(self) -> int:
        return sum(1 for a in self.atoms if a.element != 1)
