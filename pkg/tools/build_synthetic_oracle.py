"""Freeze RDKit logP/MR/TPSA for 400 seeded synthetic molecules.

    python3 tools/build_synthetic_oracle.py > tests/data/oracle_synthetic.json

Molecules come from ``molcurate.synthetic`` (seed 31). Only molecules on
which RDKit's aromaticity model flags the same atoms and bonds as ours are
kept, since Crippen classes and TPSA rows depend on aromaticity and the two
models legitimately differ on some strained fused systems.
"""

import json
import random
import sys

import rdkit
from rdkit import Chem, RDLogger
from rdkit.Chem import Crippen, rdMolDescriptors

from molcurate.molgraph import canonicalize, parse_smiles
from molcurate.standardizer import standardize
from molcurate.synthetic import random_smiles

RDLogger.DisableLog("rdApp.*")


def aromatic_signature(atoms, bonds):
    return (tuple(atoms), tuple(sorted(bonds)))


def main(n=400, seed=31):
    rng = random.Random(seed)
    rows = []
    skipped = 0
    while len(rows) < n:
        smi = canonicalize(standardize(parse_smiles(random_smiles(rng, max_heavy=30))))[1]
        ours = parse_smiles(smi)
        mol = Chem.MolFromSmiles(smi)
        if mol is None:
            skipped += 1
            continue
        sig_ours = aromatic_signature(
            [a.aromatic for a in ours.atoms],
            [tuple(sorted((b.begin, b.end))) for b in ours.bonds if b.aromatic],
        )
        sig_ref = aromatic_signature(
            [a.GetIsAromatic() for a in mol.GetAtoms()],
            [tuple(sorted((b.GetBeginAtomIdx(), b.GetEndAtomIdx()))) for b in mol.GetBonds() if b.GetIsAromatic()],
        )
        if sig_ours != sig_ref:
            skipped += 1
            continue
        rows.append({
            "smiles": smi,
            "logp": Crippen.MolLogP(mol),
            "mr": Crippen.MolMR(mol),
            "tpsa": rdMolDescriptors.CalcTPSA(mol),
        })
    json.dump({"reference": f"RDKit {rdkit.__version__}", "seed": seed,
               "skipped_aromaticity_disagreement": skipped, "molecules": rows},
              sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
