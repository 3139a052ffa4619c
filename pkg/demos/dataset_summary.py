"""Scaffold, salt, element-group and filter summary of a record file.

    python demos/dataset_summary.py kept.tsv
"""

import argparse
import json

from molcurate.analytics import dataset_summary
from molcurate.descriptors import compute_descriptors
from molcurate.filters import filter_names, filter_profile
from molcurate.molgraph import parse_smiles
from molcurate.pipeline import read_records


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("records", help="record TSV written by `molcurate run` or `merge`")
    args = ap.parse_args()

    mols = [parse_smiles(r.smiles) for r in read_records(args.records)]
    rep = dataset_summary(mols).as_dict()
    print(f"{rep['n_molecules']} molecules, {rep['n_scaffolds']} generic scaffolds, "
          f"{rep['n_salts']} salts")
    print("element groups:", json.dumps(rep["element_groups"]))
    print("logP:", json.dumps(rep["descriptors"]["logp"]))
    prof = filter_profile([compute_descriptors(m) for m in mols], filter_names())
    for name, p in prof.items():
        print(f"  {name:14s} {p['fraction']:6.1%}")


if __name__ == "__main__":
    main()
