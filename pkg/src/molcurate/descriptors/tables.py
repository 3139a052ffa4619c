"""Loaders for the shipped contribution tables, with checksum verification."""

from __future__ import annotations

import csv
import hashlib
from functools import lru_cache
from importlib import resources

_DATA = resources.files("molcurate.descriptors") / "data"
TABLE_FILES = ("atomic_weights.tsv", "crippen.tsv", "tpsa.tsv")


class TableChecksumError(RuntimeError):
    pass


def _expected_sums() -> dict[str, str]:
    sums = {}
    for line in (_DATA / "SHA256SUMS").read_text().splitlines():
        if line.strip():
            digest, name = line.split()
            sums[name] = digest
    return sums


def table_checksums() -> dict[str, str]:
    """SHA-256 of every shipped table, as found on disk."""
    return {name: hashlib.sha256((_DATA / name).read_bytes()).hexdigest() for name in TABLE_FILES}


def _read(name: str) -> list[dict[str, str]]:
    raw = (_DATA / name).read_bytes()
    want = _expected_sums().get(name)
    if want != hashlib.sha256(raw).hexdigest():
        raise TableChecksumError(f"{name} does not match its recorded checksum")
    lines = [ln for ln in raw.decode("utf-8").splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(lines, delimiter="\t"))


@lru_cache(maxsize=None)
def atomic_weights() -> dict[int, float]:
    return {int(r["z"]): float(r["weight"]) for r in _read("atomic_weights.tsv")}


@lru_cache(maxsize=None)
def crippen_contributions() -> dict[str, tuple[float, float]]:
    return {r["class"]: (float(r["logp"]), float(r["mr"])) for r in _read("crippen.tsv")}


@lru_cache(maxsize=None)
def tpsa_rows() -> dict[tuple, float]:
    """Map (Z, charge, H, nbrs, single, double, triple, aromatic, ring3) -> value.

    ring3 is True, False or None (either).
    """
    z_of = {"N": 7, "O": 8}
    table = {}
    for r in _read("tpsa.tsv"):
        ring3 = {"1": True, "0": False, "*": None}[r["ring3"]]
        key = (
            z_of[r["element"]], int(r["charge"]), int(r["n_h"]), int(r["n_nbrs"]),
            int(r["n_single"]), int(r["n_double"]), int(r["n_triple"]), int(r["n_aromatic"]), ring3,
        )
        table[key] = float(r["value"])
    return table
