"""Freeze reference descriptor values for the 50-molecule oracle panel.

Run once, before touching the descriptor engine, with RDKit available:

    python3 tools/build_oracle_panel.py > tests/data/oracle_panel.json

RDKit supplies atom/hydrogen counts, Crippen logP/MR, TPSA (N/O only),
aromaticity and ring data. Molecular weight is recomputed from RDKit's
element counts with the IUPAC 2021 standard weights typed below, because
RDKit's built-in table predates the 2021 revision. Rotatable and rigid bonds
are counted with SMARTS written for the definitions this package uses.

The panel only holds molecules whose N and O atoms all have an entry in the
published polar-surface table, so no value depends on a fallback formula.
"""

import json
import sys

import rdkit
from rdkit import Chem
from rdkit.Chem import Crippen, Lipinski, rdMolDescriptors

PANEL = [
    ("methane", "C"),
    ("ethanol", "CCO"),
    ("benzene", "c1ccccc1"),
    ("toluene", "Cc1ccccc1"),
    ("pyridine", "c1ccncc1"),
    ("pyrrole", "c1cc[nH]c1"),
    ("phenol", "Oc1ccccc1"),
    ("acetic acid", "CC(=O)O"),
    ("acetone", "CC(C)=O"),
    ("aniline", "Nc1ccccc1"),
    ("nitrobenzene", "O=[N+]([O-])c1ccccc1"),
    ("aspirin", "CC(=O)Oc1ccccc1C(=O)O"),
    ("paracetamol", "CC(=O)Nc1ccc(O)cc1"),
    ("caffeine", "Cn1cnc2c1c(=O)n(C)c(=O)n2C"),
    ("ibuprofen", "CC(C)Cc1ccc(cc1)C(C)C(=O)O"),
    ("naphthalene", "c1ccc2ccccc2c1"),
    ("indole", "c1ccc2[nH]ccc2c1"),
    ("imidazole", "c1c[nH]cn1"),
    ("thiophene", "c1ccsc1"),
    ("furan", "c1ccoc1"),
    ("chlorobenzene", "Clc1ccccc1"),
    ("benzotrifluoride", "FC(F)(F)c1ccccc1"),
    ("diethyl ether", "CCOCC"),
    ("triethylamine", "CCN(CC)CC"),
    ("acetonitrile", "CC#N"),
    ("dimethyl sulfoxide", "CS(C)=O"),
    ("sulfanilamide", "Nc1ccc(cc1)S(N)(=O)=O"),
    ("glycine zwitterion", "[NH3+]CC(=O)[O-]"),
    ("sodium acetate", "CC(=O)[O-].[Na+]"),
    ("morphine", "CN1CC[C@]23c4c5ccc(O)c4O[C@H]2[C@@H](O)C=C[C@H]3[C@H]1C5"),
    ("nicotine", "CN1CCC[C@H]1c1cccnc1"),
    ("metformin", "CN(C)C(=N)NC(=N)N"),
    ("diazepam", "CN1C(=O)CN=C(c2ccccc2)c2cc(Cl)ccc21"),
    ("fluoxetine", "CNCCC(Oc1ccc(cc1)C(F)(F)F)c1ccccc1"),
    ("cyclohexane", "C1CCCCC1"),
    ("tetrahydrofuran", "C1CCOC1"),
    ("piperidine", "C1CCNCC1"),
    ("urea", "NC(N)=O"),
    ("benzoic acid", "OC(=O)c1ccccc1"),
    ("N-methylacetamide", "CNC(C)=O"),
    ("ethyl acetate", "CCOC(C)=O"),
    ("bromoiodomethane", "BrCI"),
    ("quinoline", "c1ccc2ncccc2c1"),
    ("adenine", "Nc1ncnc2[nH]cnc12"),
    ("uracil", "O=c1cc[nH]c(=O)[nH]1"),
    ("tetramethylammonium chloride", "C[N+](C)(C)C.[Cl-]"),
    ("thioanisole", "CSc1ccccc1"),
    ("benzylpenicillin", "CC1(C)S[C@@H]2[C@H](NC(=O)Cc3ccccc3)C(=O)N2[C@H]1C(=O)O"),
    ("celecoxib", "Cc1ccc(cc1)-c1cc(nn1-c1ccc(cc1)S(N)(=O)=O)C(F)(F)F"),
    ("propranolol", "CC(C)NCC(O)COc1cccc2ccccc12"),
]

# IUPAC 2021 standard atomic weights (abridged values where the standard
# weight is an interval), typed independently of the package data file.
WEIGHTS_2021 = {
    "H": 1.008, "C": 12.011, "N": 14.007, "O": 15.999, "F": 18.998403162,
    "Na": 22.98976928, "P": 30.973761998, "S": 32.06, "Cl": 35.45,
    "Br": 79.904, "I": 126.90447,
}

ROTATABLE = Chem.MolFromSmarts("[!D1;!$(*#*)]-&!@[!D1;!$(*#*)]")
AMIDE = Chem.MolFromSmarts("[CX3](=O)-&!@[#7]")
RIGID_AMIDE = Chem.MolFromSmarts("[CX3](=O)-[#7]")


def bond_set(mol, patt, first=0, second=1):
    """Bonds between the given pattern positions of every match."""
    out = set()
    for match in mol.GetSubstructMatches(patt):
        out.add(frozenset((match[first], match[second])))
    return out


def record(name, smi):
    mol = Chem.MolFromSmiles(smi)
    if mol is None:
        raise SystemExit(f"RDKit could not parse {name}")
    heavy = mol.GetNumAtoms()
    hydrogens = sum(a.GetTotalNumHs() for a in mol.GetAtoms())
    mw = hydrogens * WEIGHTS_2021["H"]
    for a in mol.GetAtoms():
        mw += WEIGHTS_2021[a.GetSymbol()]
    rot = bond_set(mol, ROTATABLE) - bond_set(mol, AMIDE, 0, 2)
    rigid = {
        frozenset((b.GetBeginAtomIdx(), b.GetEndAtomIdx()))
        for b in mol.GetBonds()
        if b.IsInRing() or b.GetBondType() != Chem.BondType.SINGLE
    } | bond_set(mol, RIGID_AMIDE, 0, 2)
    ri = mol.GetRingInfo()
    centers = Chem.FindMolChiralCenters(mol, includeUnassigned=True, useLegacyImplementation=True)
    carbons = sum(1 for a in mol.GetAtoms() if a.GetAtomicNum() == 6)
    hetero = sum(1 for a in mol.GetAtoms() if a.GetAtomicNum() not in (1, 6))
    return {
        "name": name,
        "smiles": smi,
        "n_heavy": heavy,
        "n_hydrogens": hydrogens,
        "n_atoms": heavy + hydrogens,
        "n_fragments": len(Chem.GetMolFrags(mol)),
        "n_aromatic_atoms": sum(1 for a in mol.GetAtoms() if a.GetIsAromatic()),
        "n_aromatic_bonds": sum(1 for b in mol.GetBonds() if b.GetIsAromatic()),
        "n_rings": ri.NumRings(),
        "max_ring_size": max((len(r) for r in ri.AtomRings()), default=0),
        "mol_weight": round(mw, 6),
        "logp": Crippen.MolLogP(mol),
        "mr": Crippen.MolMR(mol),
        "tpsa": rdMolDescriptors.CalcTPSA(mol),
        "hba": Lipinski.NOCount(mol),
        "hbd": Lipinski.NHOHCount(mol),
        "n_rot_bonds": len(rot),
        "n_rigid_bonds": len(rigid),
        "n_carbons": carbons,
        "n_heteroatoms": hetero,
        "n_charged_groups": sum(1 for a in mol.GetAtoms() if a.GetFormalCharge() != 0),
        "total_charge": sum(a.GetFormalCharge() for a in mol.GetAtoms()),
        "n_stereocenters": sum(1 for idx, _ in centers if mol.GetAtomWithIdx(idx).GetAtomicNum() == 6),
        "implicit_h": [a.GetTotalNumHs() for a in mol.GetAtoms()],
    }


def main():
    rows = [record(name, smi) for name, smi in PANEL]
    json.dump(
        {"reference": f"RDKit {rdkit.__version__}", "weights": "IUPAC 2021", "molecules": rows},
        sys.stdout,
        indent=1,
    )
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
