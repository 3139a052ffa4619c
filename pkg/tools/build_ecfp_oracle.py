"""Freeze RDKit Morgan environment structure for the ECFP tests.

    python3 tools/build_ecfp_oracle.py > tests/data/oracle_ecfp.json

Hash values differ between implementations, so the frozen quantity is the
structure of the unfolded fingerprint: for radius 3, every distinct
identifier is described by the sorted list of radii at which it was
emitted. Two implementations with the same atom invariants and the same
duplicate-environment rule agree on this signature exactly.
"""

import json
import sys

import rdkit
from rdkit import Chem
from rdkit.Chem import rdFingerprintGenerator


def signature(mol, radius=3):
    gen = rdFingerprintGenerator.GetMorganGenerator(radius=radius)
    ao = rdFingerprintGenerator.AdditionalOutput()
    ao.AllocateBitInfoMap()
    gen.GetSparseCountFingerprint(mol, additionalOutput=ao)
    return sorted(sorted(r for _, r in v) for v in ao.GetBitInfoMap().values())


def main():
    smiles = [r["smiles"] for r in json.load(open("tests/data/oracle_panel.json"))["molecules"]]
    smiles += [r["smiles"] for r in json.load(open("tests/data/oracle_synthetic.json"))["molecules"]]
    rows = [{"smiles": s, "radius": 3, "classes": signature(Chem.MolFromSmiles(s))} for s in smiles]
    json.dump({"reference": f"RDKit {rdkit.__version__} Morgan generator", "molecules": rows},
              sys.stdout)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
