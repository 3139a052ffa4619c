"""Molecular graphs: SMILES I/O, rings, aromaticity and canonical forms."""

from molcurate.molgraph.aromaticity import KekulizeError, kekulize, perceive_aromaticity
from molcurate.molgraph.canon import CanonicalKey, canonical_ranks, canonical_smiles, canonicalize
from molcurate.molgraph.graph import Atom, Bond, Molecule
from molcurate.molgraph.smiles import SmilesError, parse_smiles, write_smiles


def fragments(m: Molecule) -> list[Molecule]:
    """Connected components, largest (heavy atoms) first, ties by canonical key."""
    comps = m.components
    if len(comps) == 1:
        return [m]
    parts = [m.subgraph(c) for c in comps]
    keyed = [(-p.n_heavy, canonicalize(p)[0].key, k) for k, p in enumerate(parts)]
    keyed.sort()
    return [parts[k] for _, _, k in keyed]


__all__ = [
    "Atom",
    "Bond",
    "CanonicalKey",
    "KekulizeError",
    "Molecule",
    "SmilesError",
    "canonical_ranks",
    "canonical_smiles",
    "canonicalize",
    "fragments",
    "kekulize",
    "parse_smiles",
    "perceive_aromaticity",
    "write_smiles",
]
