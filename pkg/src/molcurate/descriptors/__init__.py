"""Physicochemical descriptors: weight, counts, Crippen logP/MR and TPSA."""

from molcurate.descriptors.core import (
    DescriptorSet,
    compute_descriptors,
    molecular_weight,
    rigid_bonds,
    rotatable_bonds,
    stereocenters,
)
from molcurate.descriptors.crippen import crippen_logp_mr
from molcurate.descriptors.tables import TableChecksumError, table_checksums
from molcurate.descriptors.tpsa import tpsa

__all__ = [
    "DescriptorSet",
    "TableChecksumError",
    "compute_descriptors",
    "crippen_logp_mr",
    "molecular_weight",
    "rigid_bonds",
    "rotatable_bonds",
    "stereocenters",
    "table_checksums",
    "tpsa",
]
