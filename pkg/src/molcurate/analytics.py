"""Dataset characterization: element groups, generic scaffolds, salts and
descriptor distributions.

Percentiles are nearest-rank: the ``q``-th percentile of ``n`` sorted values
is the value at rank ``ceil(q / 100 * n)`` (1-based), so every reported
statistic is an observed value and the report is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from molcurate.descriptors import DescriptorSet, compute_descriptors
from molcurate.molgraph import Atom, Bond, Molecule, canonicalize, parse_smiles
from molcurate.molgraph.elements import SYMBOLS

SCHEMA_VERSION = 1
GROUPS = ("C", "N", "O", "S", "halogens", "metalloids", "metals", "other")
ORDER_STATS = (
    ("min", 0), ("p1", 1), ("p5", 5), ("Q1", 25), ("mean", None),
    ("median", 50), ("Q3", 75), ("p95", 95), ("p99", 99), ("max", 100),
)
UNDEFINED = "undefined"


@lru_cache(maxsize=None)
def element_groups() -> dict[int, str]:
    """Atomic number -> group, from ``element_groups.tsv``; absent means other."""
    text = (resources.files("molcurate") / "analytics_data" / "element_groups.tsv").read_text("utf-8")
    z_of = {s: z for z, s in enumerate(SYMBOLS)}
    out = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        sym, group = line.split("\t")
        if group not in GROUPS:
            raise ValueError(f"element_groups.tsv: unknown group {group!r}")
        out[z_of[sym]] = group
    return out


def molecule_groups(m: Molecule) -> set[str]:
    """Element groups present in ``m``; hydrogen is not counted."""
    table = element_groups()
    return {table.get(a.element, "other") for a in m.atoms if a.element != 1}


def _molecule(x) -> Molecule:
    if isinstance(x, Molecule):
        return x
    mol = getattr(x, "mol", None)
    return mol if mol is not None else parse_smiles(x.smiles)


def element_profile(records) -> dict[str, float]:
    """Fraction of molecules containing each element group.

    Groups overlap, so the fractions do not sum to 1. An empty dataset gives
    0 for every group.
    """
    counts = dict.fromkeys(GROUPS, 0)
    n = 0
    for r in records:
        n += 1
        for g in molecule_groups(_molecule(r)):
            counts[g] += 1
    return {g: c / n if n else 0.0 for g, c in counts.items()}


def _framework_atoms(m: Molecule) -> set[int]:
    """Ring atoms plus the linkers between them: strip side chains."""
    heavy = {i for i, a in enumerate(m.atoms) if a.element != 1}
    degree = {i: sum(1 for j, _ in m.adjacency[i] if j in heavy) for i in heavy}
    stack = [i for i in heavy if degree[i] <= 1 and not m.atoms[i].in_ring]
    while stack:
        i = stack.pop()
        if i not in heavy:
            continue
        heavy.discard(i)
        for j, _ in m.adjacency[i]:
            if j in heavy:
                degree[j] -= 1
                if degree[j] <= 1 and not m.atoms[j].in_ring:
                    stack.append(j)
    return heavy


def generic_scaffold(m: Molecule):
    """Generic (all-carbon, all-single-bond) ring framework.

    Returns
    -------
    CanonicalKey or None
        None for a molecule without rings.
    """
    keep = sorted(_framework_atoms(m))
    if not keep:
        return None
    remap = {old: new for new, old in enumerate(keep)}
    bonds = [
        Bond(remap[b.begin], remap[b.end])
        for b in m.bonds
        if b.begin in remap and b.end in remap
    ]
    degree = [0] * len(keep)
    for b in bonds:
        degree[b.begin] += 1
        degree[b.end] += 1
    atoms = [Atom(6, implicit_h=max(4 - d, 0)) for d in degree]
    return canonicalize(Molecule.from_parts(atoms, bonds))[0]


def is_salt(m: Molecule) -> bool:
    """At least two disconnected fragments that each carry a net charge."""
    charged = 0
    for comp in m.components:
        if sum(m.atoms[i].charge for i in comp):
            charged += 1
            if charged == 2:
                return True
    return False


# ------------------------------------------------------------------ report


def order_statistics(values) -> dict:
    """The ten columns min/p1/p5/Q1/mean/median/Q3/p95/p99/max.

    Every entry is ``"undefined"`` when ``values`` is empty.
    """
    x = sorted(values)
    n = len(x)
    if not n:
        return {name: UNDEFINED for name, _ in ORDER_STATS}
    out = {}
    for name, q in ORDER_STATS:
        if q is None:
            out[name] = math.fsum(x) / n
        else:
            rank = max(math.ceil(q / 100 * n), 1)
            out[name] = x[rank - 1]
    return out


def _json_number(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return v


@dataclass
class DatasetReport:
    n_molecules: int
    n_scaffolds: int
    n_acyclic: int
    n_salts: int
    element_groups: dict
    descriptors: dict  # name -> order statistics
    schema_version: int = SCHEMA_VERSION
    percentile: str = "nearest-rank"

    def as_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "percentile": self.percentile,
            "n_molecules": self.n_molecules,
            "n_scaffolds": self.n_scaffolds,
            "n_acyclic": self.n_acyclic,
            "n_salts": self.n_salts,
            "element_groups": dict(self.element_groups),
            "descriptors": {
                k: {s: _json_number(v) for s, v in st.items()} for k, st in self.descriptors.items()
            },
        }


@dataclass
class SummaryAccumulator:
    """Mergeable exact state behind :func:`dataset_summary`.

    Holds counts, the scaffold key set and every descriptor value, so two
    accumulators built on disjoint shards merge into the same report as one
    built on the concatenation.
    """

    n: int = 0
    n_salts: int = 0
    n_acyclic: int = 0
    scaffolds: set = field(default_factory=set)
    groups: dict = field(default_factory=lambda: dict.fromkeys(GROUPS, 0))
    values: dict = field(default_factory=lambda: {k: [] for k in DescriptorSet.__dataclass_fields__})

    def add(self, m: Molecule, d: DescriptorSet | None = None):
        self.n += 1
        self.n_salts += is_salt(m)
        key = generic_scaffold(m)
        if key is None:
            self.n_acyclic += 1
        else:
            self.scaffolds.add(key.key)
        for g in molecule_groups(m):
            self.groups[g] += 1
        d = d or compute_descriptors(m)
        for k, v in d.as_dict().items():
            self.values[k].append(v)

    def merge(self, other: "SummaryAccumulator") -> "SummaryAccumulator":
        self.n += other.n
        self.n_salts += other.n_salts
        self.n_acyclic += other.n_acyclic
        self.scaffolds |= other.scaffolds
        for g, c in other.groups.items():
            self.groups[g] += c
        for k, v in other.values.items():
            self.values[k].extend(v)
        return self

    def report(self) -> DatasetReport:
        n = self.n
        return DatasetReport(
            n_molecules=n,
            n_scaffolds=len(self.scaffolds),
            n_acyclic=self.n_acyclic,
            n_salts=self.n_salts,
            element_groups={g: c / n if n else 0.0 for g, c in self.groups.items()},
            descriptors={k: order_statistics(v) for k, v in self.values.items()},
        )


def dataset_summary(records) -> DatasetReport:
    """Scaffold, salt, element-group and descriptor summary of a dataset.

    Parameters
    ----------
    records : iterable
        Standardized molecules, or records whose ``smiles`` holds the
        standardized SMILES.
    """
    acc = SummaryAccumulator()
    for r in records:
        acc.add(_molecule(r))
    return acc.report()


__all__ = [
    "DatasetReport",
    "GROUPS",
    "SCHEMA_VERSION",
    "SummaryAccumulator",
    "dataset_summary",
    "element_groups",
    "element_profile",
    "generic_scaffold",
    "is_salt",
    "molecule_groups",
    "order_statistics",
]
