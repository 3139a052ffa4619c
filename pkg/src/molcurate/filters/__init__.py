"""Feasibility filter and the descriptor-based drug-likeness filter catalog.

Every bound is inclusive unless marked strict, and is compared against the
value exactly as computed (no rounding). The drug-likeness catalog is read
from ``rules.tsv`` next to this file so that the bounds can be audited and
diffed without reading code.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from molcurate.descriptors import DescriptorSet

SUBSTRUCTURE_FILTERS = frozenset({"Glaxo", "Brenk", "ZINC-basic"})


class UnknownFilterError(KeyError):
    pass


@dataclass(frozen=True)
class Rule:
    """Closed (or half-open, if strict) interval on one descriptor."""

    name: str
    descriptor: str
    lower: float | None = None
    upper: float | None = None
    upper_strict: bool = False

    def violation(self, value):
        """The breached bound, or None if ``value`` satisfies the rule."""
        if isinstance(value, float) and math.isnan(value):
            return self.lower if self.lower is not None else self.upper
        if self.lower is not None and value < self.lower:
            return self.lower
        if self.upper is not None:
            if value > self.upper or (self.upper_strict and value == self.upper):
                return self.upper
        return None


@dataclass(frozen=True)
class FilterVerdict:
    filter_name: str
    passed: bool
    violations: list = field(default_factory=list)  # (rule name, observed, bound)


@dataclass(frozen=True)
class Filter:
    name: str
    rules: tuple
    budget: int = 0

    def evaluate(self, values) -> FilterVerdict:
        violations = []
        for r in self.rules:
            observed = values[r.descriptor]
            bound = r.violation(observed)
            if bound is not None:
                violations.append((r.name, observed, bound))
        return FilterVerdict(self.name, len(violations) <= self.budget, violations)


# ------------------------------------------------------------- feasibility

KEY_LENGTH_LIMIT = 2000

FEASIBILITY = Filter("feasibility", (
    Rule("fragments", "n_fragments", upper=3),
    Rule("key_length", "key_length", upper=KEY_LENGTH_LIMIT, upper_strict=True),
    Rule("mol_weight", "mol_weight", upper=2500),
    Rule("n_atoms", "n_atoms", upper=150),
    Rule("hba", "hba", upper=20),
    Rule("hbd", "hbd", upper=15),
    Rule("logp", "logp", lower=-10, upper=25),
    Rule("tpsa", "tpsa", upper=500),
    Rule("n_rot_bonds", "n_rot_bonds", upper=60),
))


def feasibility_check(d: DescriptorSet, key_length: int) -> FilterVerdict:
    """Remove only clearly infeasible molecules.

    Parameters
    ----------
    d : DescriptorSet
        Descriptors of the standardized molecule.
    key_length : int
        Byte length of the canonical key; must stay below 2000.

    Returns
    -------
    FilterVerdict
        ``violations`` lists every breached bound, not just the first.
    """
    values = d.as_dict()
    values["key_length"] = key_length
    return FEASIBILITY.evaluate(values)


# ----------------------------------------------------------------- catalog


def _number(text):
    text = text.strip()
    if not text:
        return None
    x = float(text)
    return int(x) if x.is_integer() and "." not in text else x


@lru_cache(maxsize=None)
def registry() -> dict[str, Filter]:
    """Name -> Filter for every catalog entry, in file order."""
    raw = (resources.files("molcurate.filters") / "rules.tsv").read_text(encoding="utf-8")
    lines = [ln for ln in raw.splitlines() if ln and not ln.startswith("#")]
    rules: dict[str, list] = {}
    budgets: dict[str, int] = {}
    fields = set(DescriptorSet.__dataclass_fields__)
    for row in csv.DictReader(lines, delimiter="\t"):
        name, desc = row["filter"], row["descriptor"]
        if desc not in fields:
            raise ValueError(f"rules.tsv: unknown descriptor {desc!r} in {name}")
        budget = int(row["budget"])
        if budgets.setdefault(name, budget) != budget:
            raise ValueError(f"rules.tsv: inconsistent budget for {name}")
        rules.setdefault(name, []).append(
            Rule(desc, desc, _number(row["lower"]), _number(row["upper"])))
    return {n: Filter(n, tuple(r), budgets[n]) for n, r in rules.items()}


def filter_names() -> list[str]:
    return list(registry())


def get_filter(name: str) -> Filter:
    if name in SUBSTRUCTURE_FILTERS:
        raise UnknownFilterError(f"{name}: out-of-scope: substructure rules")
    try:
        return registry()[name]
    except KeyError:
        raise UnknownFilterError(f"unknown filter {name!r}") from None


def apply_filter(name: str, d: DescriptorSet) -> FilterVerdict:
    """Evaluate one catalog filter; Lipinski tolerates one violation."""
    return get_filter(name).evaluate(d.as_dict())


def filter_profile(dataset, names) -> dict[str, dict]:
    """Pass counts and fractions per filter over an iterable of DescriptorSets.

    Returns ``{name: {"passed": int, "total": int, "fraction": float}}`` in
    the order of ``names``; the fraction of an empty dataset is 0.
    """
    filters = [get_filter(n) for n in names]
    passed = [0] * len(filters)
    total = 0
    for d in dataset:
        values = d.as_dict()
        total += 1
        for k, f in enumerate(filters):
            if f.evaluate(values).passed:
                passed[k] += 1
    return {
        f.name: {"passed": p, "total": total, "fraction": p / total if total else 0.0}
        for f, p in zip(filters, passed)
    }


__all__ = [
    "FEASIBILITY",
    "Filter",
    "FilterVerdict",
    "KEY_LENGTH_LIMIT",
    "Rule",
    "SUBSTRUCTURE_FILTERS",
    "UnknownFilterError",
    "apply_filter",
    "feasibility_check",
    "filter_names",
    "filter_profile",
    "get_filter",
    "registry",
]
