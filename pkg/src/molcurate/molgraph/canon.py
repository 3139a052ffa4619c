"""Canonical atom ranking, canonical SMILES and the canonical key.

Ranking is iterative refinement of atom invariants (Morgan-style) followed by
individualization of tied atoms. Every branch of the tie-breaking search is
explored except those ruled equivalent by automorphisms already discovered,
and the labelling with the smallest certificate wins, so the result does not
depend on the input atom order even when refinement alone cannot separate
non-equivalent atoms.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from molcurate.molgraph.graph import Molecule
from molcurate.molgraph.smiles import write_smiles

KEY_VERSION = b"MK1/"


@dataclass(frozen=True, slots=True)
class CanonicalKey:
    """Opaque, order-independent identifier of a molecular graph."""

    key: bytes

    def __len__(self) -> int:
        return len(self.key)

    @property
    def prefix64(self) -> int:
        """64-bit digest used to shard dedup tables."""
        return int.from_bytes(hashlib.blake2b(self.key, digest_size=8).digest(), "big")

    def __str__(self) -> str:
        return self.key.decode("utf-8")


def atom_invariants(m: Molecule) -> list[tuple]:
    """Per-atom invariant: degree, element, isotope, charge, H count, aromaticity, ring flag.

    Degree leads so that low ranks (where SMILES writing starts) fall on
    terminal atoms.
    """
    adj = m.adjacency
    return [
        (len(adj[i]), a.element, a.isotope, a.charge, a.implicit_h, a.aromatic, a.in_ring)
        for i, a in enumerate(m.atoms)
    ]


def _dense(values):
    order = {v: k for k, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]


def refine(ranks: list[int], nbrs) -> list[int]:
    """Refine a ranking until neighbour multisets stop splitting classes."""
    n_cls = len(set(ranks))
    n = len(ranks)
    while True:
        sig = [
            (ranks[i], tuple(sorted([(ranks[j], bt) for j, bt in nbrs[i]])))
            for i in range(n)
        ]
        new = _dense(sig)
        n_new = max(new) + 1 if new else 0
        if n_new == n_cls:
            return new
        ranks, n_cls = new, n_new


class _Search:
    def __init__(self, inv, nbrs, bonds):
        self.inv = inv
        self.nbrs = nbrs
        self.bonds = bonds  # (i, j, kind)
        self.best_cert = None
        self.best_lab = None
        self.automorphisms: list[list[int]] = []

    def certificate(self, lab):
        atoms = tuple(x[1] for x in sorted((lab[i], self.inv[i]) for i in range(len(lab))))
        edges = tuple(sorted(
            (min(lab[i], lab[j]), max(lab[i], lab[j]), kind) for i, j, kind in self.bonds
        ))
        return atoms, edges

    def leaf(self, lab):
        cert = self.certificate(lab)
        if self.best_cert is None or cert < self.best_cert:
            self.best_cert, self.best_lab = cert, lab
        elif cert == self.best_cert:
            # lab and best_lab describe the same labelled graph: an automorphism
            inv_best = [0] * len(lab)
            for atom, pos in enumerate(self.best_lab):
                inv_best[pos] = atom
            gamma = [inv_best[lab[a]] for a in range(len(lab))]
            if any(g != a for a, g in enumerate(gamma)):
                self.automorphisms.append(gamma)

    def orbits_fixing(self, path):
        n = len(self.inv)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.automorphisms:
            if all(g[p] == p for p in path):
                for a in range(n):
                    ra, rb = find(a), find(g[a])
                    if ra != rb:
                        parent[ra] = rb
        return find

    def run(self, ranks, path):
        counts = {}
        for r in ranks:
            counts[r] = counts.get(r, 0) + 1
        target = None
        for r in sorted(counts):
            if counts[r] > 1:
                target = r
                break
        if target is None:
            self.leaf(ranks)
            return
        cell = [i for i, r in enumerate(ranks) if r == target]
        tried: list[int] = []
        for v in cell:
            if tried and self.automorphisms:
                find = self.orbits_fixing(path)
                fv = find(v)
                if any(find(u) == fv for u in tried):
                    continue
            tried.append(v)
            split = _dense([(r, 0 if i == v else 1) for i, r in enumerate(ranks)])
            self.run(refine(split, self.nbrs), path + [v])


def canonical_ranks(m: Molecule) -> list[int]:
    """Canonical position of every atom (a permutation of ``range(len(m))``)."""
    n = len(m.atoms)
    if n == 0:
        return []
    inv = atom_invariants(m)
    nbrs = [[] for _ in range(n)]
    bonds = []
    for b in m.bonds:
        kind = b.kind
        nbrs[b.begin].append((b.end, kind))
        nbrs[b.end].append((b.begin, kind))
        bonds.append((b.begin, b.end, kind))
    ranks = refine(_dense(inv), nbrs)
    if max(ranks) == n - 1:
        return ranks
    search = _Search(inv, nbrs, bonds)
    search.run(ranks, [])
    return search.best_lab


def canonical_smiles(m: Molecule) -> str:
    return write_smiles(m, canonical_ranks(m))


def canonicalize(m: Molecule) -> tuple[CanonicalKey, str]:
    """Return ``(CanonicalKey, canonical SMILES)``; both ignore input atom order.

    Stereo annotations do not take part. The key embeds the canonical SMILES,
    so its byte length grows with molecule size like a line-notation identifier.
    """
    smi = canonical_smiles(m)
    return CanonicalKey(KEY_VERSION + smi.encode("utf-8")), smi


def same_canonical_input(a: Molecule, b: Molecule) -> bool:
    """True if ``a`` and ``b`` look identical to :func:`canonicalize`.

    Canonical output depends only on connectivity, bond kinds and the atom
    fields compared here, so equal inputs in the same atom order give equal
    keys and SMILES; used to skip a second canonicalization.
    """
    if len(a.atoms) != len(b.atoms) or len(a.bonds) != len(b.bonds):
        return False
    for x, y in zip(a.atoms, b.atoms):
        if (x.element != y.element or x.charge != y.charge or x.isotope != y.isotope
                or x.implicit_h != y.implicit_h or x.aromatic != y.aromatic):
            return False
    for x, y in zip(a.bonds, b.bonds):
        if x.begin != y.begin or x.end != y.end or x.kind != y.kind:
            return False
    return True
