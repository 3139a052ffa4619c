"""Wildman-Crippen atom typing, written as ordered predicates.

Each heavy atom gets the first class, in table order, whose rule it meets;
each hydrogen (implicit or explicit) is typed by the atom carrying it. The
rules follow the published SMARTS definitions, so neighbour conditions use
the usual conventions: an unspecified bond means single or aromatic, an
upper-case element means aliphatic, and distinct pattern atoms must match
distinct neighbours. The two catch-all H2 rules ("H on O bonded to a non
C/N/O/S atom", "H on a non C/N/O atom") test elements regardless of
aromaticity, so the H of an aromatic NH is an amine-type H3.
"""

from __future__ import annotations

from molcurate.descriptors.tables import crippen_contributions
from molcurate.molgraph.graph import Molecule

SINGLE, DOUBLE, TRIPLE, AROM = "-", "=", "#", ":"
DEFAULT = (SINGLE, AROM)

_HETERO = frozenset({7, 8, 15, 16, 9, 17, 35, 53})
_C13_EXCLUDED = frozenset({6, 7, 8, 16, 9, 17, 35, 53})
_C27_EXCLUDED = _HETERO | {6}
_HALOGEN = {9: "F", 17: "Cl", 35: "Br", 53: "I"}
_ALKALI = frozenset({3, 11, 19, 37, 55})
_ME1 = frozenset({3, 11, 19, 37, 55, 4, 12, 20, 38, 56, 5, 13, 31, 49, 81,
                  14, 32, 50, 82, 33, 51, 83, 34, 52, 84})
_ME2 = frozenset(list(range(21, 31)) + list(range(39, 49)) + list(range(72, 81)))


class _View:
    """Per-atom facts the rules ask about."""

    def __init__(self, m: Molecule):
        self.m = m
        n = len(m.atoms)
        self.z = [a.element for a in m.atoms]
        self.arom = [a.aromatic for a in m.atoms]
        self.q = [a.charge for a in m.atoms]
        self.h = [m.total_h(i) for i in range(n)]
        self.nb: list[list[tuple[int, str]]] = [[] for _ in range(n)]
        for b in m.bonds:
            kind = AROM if b.aromatic else {1: SINGLE, 2: DOUBLE, 3: TRIPLE}.get(b.order, SINGLE)
            if self.z[b.end] != 1:
                self.nb[b.begin].append((b.end, kind))
            if self.z[b.begin] != 1:
                self.nb[b.end].append((b.begin, kind))

    def x(self, i):
        """Total connections, hydrogens included."""
        return len(self.nb[i]) + self.h[i]

    def has(self, i, specs, exclude=()):
        """Distinct heavy neighbours of ``i`` (not in ``exclude``) match ``specs``.

        ``specs`` is a list of ``(bond kinds, predicate)`` pairs.
        """
        nbrs = [(j, k) for j, k in self.nb[i] if j not in exclude] if exclude else self.nb[i]
        if len(specs) > len(nbrs):
            return False
        first = specs[0]
        if all(s == first for s in specs):
            # identical specs: enough matching neighbours is all that matters
            kinds, pred = first
            need = len(specs)
            for j, k in nbrs:
                if k in kinds and pred(j):
                    need -= 1
                    if not need:
                        return True
            return False

        def assign(s, used):
            if s == len(specs):
                return True
            kinds, pred = specs[s]
            for j, k in nbrs:
                if j not in used and k in kinds and pred(j):
                    if assign(s + 1, used | {j}):
                        return True
            return False

        return assign(0, frozenset())

    # atom predicates
    def aliph(self, j):
        return not self.arom[j]

    def aliph_c(self, j):
        return self.z[j] == 6 and not self.arom[j]

    def arom_c(self, j):
        return self.z[j] == 6 and self.arom[j]

    def aromatic(self, j):
        return self.arom[j]

    def hetero(self, j):
        return self.z[j] in _HETERO and not self.arom[j]


def _any(j):
    return True


def _type_carbon(v: _View, i: int) -> str:
    h, x, ar = v.h[i], v.x(i), v.arom[i]
    n_heavy = len(v.nb[i])
    if not ar:
        if h == 4 and n_heavy == 0:
            return "C1"
        if h == 3 and v.has(i, [(DEFAULT, v.aliph_c)]):
            return "C1"
        if h == 2 and v.has(i, [(DEFAULT, v.aliph_c), (DEFAULT, v.aliph_c)]):
            return "C1"
        if h == 1 and v.has(i, [(DEFAULT, v.aliph_c)] * 3):
            return "C2"
        if v.has(i, [(DEFAULT, v.aliph_c)] * 4):
            return "C2"
        if h == 3 and v.has(i, [(DEFAULT, v.hetero)]):
            return "C3"
        if h == 2 and x == 4 and v.has(i, [(DEFAULT, v.hetero), (DEFAULT, v.aliph)]):
            return "C3"
        if h == 1 and x == 4 and v.has(i, [(DEFAULT, v.hetero)] + [(DEFAULT, v.aliph)] * 2):
            return "C4"
        if h == 0 and x == 4 and v.has(i, [(DEFAULT, v.hetero)] + [(DEFAULT, v.aliph)] * 3):
            return "C4"
        if v.has(i, [((DOUBLE,), lambda j: v.aliph(j) and v.z[j] != 6)]):
            return "C5"
        dbl_c = ((DOUBLE,), v.aliph_c)
        if h == 2 and v.has(i, [dbl_c]):
            return "C6"
        if h == 1 and v.has(i, [dbl_c, (DEFAULT, v.aliph)]):
            return "C6"
        if h == 0 and v.has(i, [dbl_c, (DEFAULT, v.aliph), (DEFAULT, v.aliph)]):
            return "C6"
        if v.has(i, [dbl_c, dbl_c]):
            return "C6"
        if x == 2 and v.has(i, [((TRIPLE,), v.aliph)]):
            return "C7"
        if h == 3 and v.has(i, [(DEFAULT, v.arom_c)]):
            return "C8"
        if h == 3 and v.has(i, [(DEFAULT, v.aromatic)]):
            return "C9"
        if x == 4 and h <= 2 and v.has(i, [(DEFAULT, v.aromatic)]):
            return ("C12", "C11", "C10")[h]
    else:
        if h == 0 and v.has(i, [((SINGLE,), lambda j: v.aliph(j) and v.z[j] not in _C13_EXCLUDED)]):
            return "C13"
        for z, cls in ((9, "C14"), (17, "C15"), (35, "C16"), (53, "C17")):
            if v.has(i, [(DEFAULT, lambda j, z=z: v.z[j] == z)]):
                return cls
        if h == 1:
            return "C18"
        two_arom = [((AROM,), v.aromatic), ((AROM,), v.aromatic)]
        if v.has(i, two_arom + [((AROM,), v.aromatic)]):
            return "C19"
        for pred, cls in (
            (v.aromatic, "C20"),
            (v.aliph_c, "C21"),
            (lambda j: v.z[j] == 7 and v.aliph(j), "C22"),
            (lambda j: v.z[j] == 8 and v.aliph(j), "C23"),
            (lambda j: v.z[j] == 16 and v.aliph(j), "C24"),
        ):
            if v.has(i, two_arom + [((SINGLE,), pred)]):
                return cls
        if v.has(i, two_arom + [((DOUBLE,), lambda j: v.aliph(j) and v.z[j] in (6, 7, 8))]):
            return "C25"
    return _after_c12(v, i)


def _after_c12(v: _View, i: int) -> str:
    # C26, C27 and the carbon wildcard, reached by atoms no earlier rule typed
    if not v.arom[i]:
        dbl_c = ((DOUBLE,), v.aliph_c)
        if (
            v.has(i, [dbl_c, (DEFAULT, v.aromatic), (DEFAULT, v.aliph)])
            or v.has(i, [dbl_c, (DEFAULT, v.arom_c), (DEFAULT, v.aromatic)])
            or (v.h[i] == 1 and v.has(i, [dbl_c, (DEFAULT, v.aromatic)]))
            or v.has(i, [((DOUBLE,), v.arom_c)])
        ):
            return "C26"
        if v.x(i) == 4 and v.has(i, [(DEFAULT, lambda j: v.aliph(j) and v.z[j] not in _C27_EXCLUDED)]):
            return "C27"
    return "CS"


def _type_nitrogen(v: _View, i: int) -> str:
    h, q, ar = v.h[i], v.q[i], v.arom[i]
    heavy = _any
    if not ar:
        if q == 0:
            if h == 2 and v.has(i, [(DEFAULT, v.aliph)]):
                return "N1"
            if h == 1 and v.has(i, [(DEFAULT, v.aliph), (DEFAULT, v.aliph)]):
                return "N2"
            if h == 2 and v.has(i, [(DEFAULT, v.aromatic)]):
                return "N3"
            if h == 1 and v.has(i, [(DEFAULT, heavy), (DEFAULT, v.aromatic)]):
                return "N4"
            if h == 1 and v.has(i, [((DOUBLE,), heavy)]):
                return "N5"
            if v.has(i, [((DOUBLE,), heavy), (DEFAULT, heavy)]):
                return "N6"
            if v.has(i, [(DEFAULT, v.aliph)] * 3):
                return "N7"
            if v.has(i, [(DEFAULT, v.aromatic), (DEFAULT, heavy), (DEFAULT, v.aliph)]):
                return "N8"
            if v.has(i, [(DEFAULT, v.aromatic)] * 3):
                return "N8"
            if v.has(i, [((TRIPLE,), v.aliph)]):
                return "N9"
        if q in (1, 2, 3) and h in (1, 2, 3):
            return "N10"
    else:
        if q == 0:
            return "N11"
        if q in (1, 2, 3):
            return "N12"
    if not ar:
        if q in (1, 2, 3) and h == 0:
            if v.has(i, [(DEFAULT, v.aliph)] * 4):
                return "N13"
            if v.has(i, [((DOUBLE,), v.aliph), (DEFAULT, v.aliph), (DEFAULT, heavy)]):
                return "N13"
            if v.has(i, [((DOUBLE,), lambda j: v.z[j] == 6), ((DOUBLE,), lambda j: v.z[j] == 7)]):
                return "N13"
        if q in (1, 2, 3) and v.has(i, [((TRIPLE,), v.aliph)]):
            return "N14"
        if q in (-1, -2, -3):
            return "N14"
        if q in (1, 2, 3) and v.has(i, [
            ((DOUBLE,), lambda j: v.z[j] == 7 and not v.arom[j] and v.q[j] in (-1, -2, -3)),
            ((DOUBLE,), lambda j: v.z[j] == 7 and not v.arom[j]),
        ]):
            return "N14"
    return "NS"


def _type_oxygen(v: _View, i: int) -> str:
    h, q, ar = v.h[i], v.q[i], v.arom[i]
    if ar:
        return "O1"
    if h in (1, 2):
        return "O2"
    if h == 0 and v.has(i, [(DEFAULT, v.aliph), (DEFAULT, v.aliph)]):
        return "O3"
    if h == 0 and v.has(i, [(DEFAULT, v.aromatic), (DEFAULT, _any)]):
        return "O4"
    x1_anion = v.x(i) == 1 and q in (-1, -2, -3)
    if v.has(i, [((DOUBLE,), lambda j: v.z[j] in (7, 8))]):
        return "O5"
    if x1_anion and v.has(i, [(DEFAULT, lambda j: v.z[j] == 7)]):
        return "O5"
    if x1_anion and v.has(i, [(DEFAULT, lambda j: v.z[j] == 16)]):
        return "O6"
    if q == 0 and v.has(i, [((DOUBLE,), lambda j: v.z[j] == 16 and v.q[j] == 0)]):
        return "O6"
    if q == -1 and v.has(i, [(DEFAULT, lambda j: v.aliph_c(j) and _carbonyl_c(v, j, exclude=i))]):
        return "O12"
    if x1_anion and v.has(i, [(DEFAULT, lambda j: not (v.z[j] in (7, 16) and v.aliph(j)))]):
        return "O7"
    if v.has(i, [((DOUBLE,), v.arom_c)]):
        return "O8"
    for j, kind in v.nb[i]:
        if kind == DOUBLE and v.aliph_c(j):
            cls = _carbonyl_class(v, j, i)
            if cls:
                return cls
    return "OS"


def _carbonyl_c(v: _View, c: int, exclude: int) -> bool:
    return v.has(c, [((DOUBLE,), lambda k: v.z[k] == 8 and v.aliph(k))], exclude=(exclude,))


def _carbonyl_class(v: _View, c: int, o: int) -> str | None:
    """O9/O10/O11 for the O of ``O=C`` (``c`` is the aliphatic carbon)."""
    ex = (o,)
    hc = v.h[c]
    if hc == 1 and v.has(c, [(DEFAULT, v.aliph_c)], ex):
        return "O9"
    if v.has(c, [(DEFAULT, v.aliph_c), (DEFAULT, v.aliph)], ex):
        return "O9"
    if hc == 1 and v.has(c, [(DEFAULT, lambda k: v.z[k] in (7, 8) and v.aliph(k))], ex):
        return "O9"
    if hc == 2:
        return "O9"
    if v.x(c) == 2 and v.has(c, [((DOUBLE,), lambda k: v.z[k] == 8 and v.aliph(k))], ex):
        return "O9"
    if hc == 1 and v.has(c, [(DEFAULT, v.arom_c)], ex):
        return "O10"
    if v.has(c, [(DEFAULT, lambda k: v.z[k] == 6), (DEFAULT, v.aromatic)], ex):
        return "O10"
    if v.has(c, [(DEFAULT, v.arom_c), (DEFAULT, v.aliph)], ex):
        return "O10"
    if v.has(c, [(DEFAULT, lambda k: v.z[k] != 6), (DEFAULT, lambda k: v.z[k] != 6)], ex):
        return "O11"
    return None


def _type_sulfur(v: _View, i: int) -> str:
    if not v.arom[i]:
        if v.q[i] in (-4, -3, -2, -1, 1, 2, 3, 5, 6):
            return "S2"
        if v.q[i] == 0 and v.has(i, [((DOUBLE,), lambda j: v.aliph(j) and v.z[j] in (7, 8, 15, 16))]):
            return "S2"
        return "S1"
    return "S3"


def atom_type(v: _View, i: int) -> str | None:
    """Crippen class of heavy atom ``i``; None when no class applies."""
    z, q = v.z[i], v.q[i]
    if z == 6:
        return _type_carbon(v, i)
    if z == 7:
        return _type_nitrogen(v, i)
    if z == 8:
        return _type_oxygen(v, i)
    if z in _HALOGEN:
        if q == 0:
            return _HALOGEN[z]
        if q == -1 or (z == 53 and q > 0):
            return "Hal"
        return None
    if z in _ALKALI and q == 1:
        return "Hal"
    if z == 15:
        return "P"
    if z == 16:
        return _type_sulfur(v, i)
    if z in _ME1:
        return "Me1"
    if z in _ME2:
        return "Me2"
    return None


def hydrogen_type(v: _View, host: int | None, host_h: int) -> str:
    """Class of a hydrogen carried by ``host`` (None for a lone H atom).

    ``host_h`` is the host's total H count, which matters for water-like
    hosts whose only other neighbours are hydrogens.
    """
    if host is None:
        return "HS"
    z = v.z[host]
    if z in (1, 6):
        return "H1"
    if z == 8 and not v.arom[host]:
        # the O's neighbours other than this hydrogen
        if v.has(host, [(DEFAULT, lambda j: (v.z[j] == 6 and not v.arom[j] and v.x(j) == 4) or v.arom_c(j))]):
            return "H2"
        if host_h >= 2 or v.has(host, [(DEFAULT, lambda j: v.z[j] not in (6, 7, 8, 16))]):
            return "H2"
    if z not in (6, 7, 8):
        return "H2"
    if z == 7:
        return "H3"
    # z == 8, aliphatic
    if v.has(host, [(DEFAULT, lambda j: v.z[j] == 7)]):
        return "H3"
    if v.has(host, [(DEFAULT, lambda j: v.aliph_c(j) and v.has(
            j, [((DOUBLE,), lambda k: v.z[k] in (6, 7) or (v.z[k] in (8, 16) and v.aliph(k)))],
            exclude=(host,)))]):
        return "H4"
    if v.has(host, [(DEFAULT, lambda j: v.z[j] in (8, 16) and v.aliph(j))]):
        return "H4"
    return "HS"


def crippen_types(m: Molecule) -> tuple[list[str | None], list[tuple[int | None, str]]]:
    """Heavy-atom classes (None for H atoms and untyped atoms) and
    ``(host, class)`` for every hydrogen, implicit or explicit."""
    v = _View(m)
    heavy = []
    hydrogens = []
    for i, a in enumerate(m.atoms):
        if a.element == 1:
            heavy.append(None)
            hosts = [j for j, _ in m.adjacency[i]]
            host = hosts[0] if len(hosts) == 1 else None
            if host is not None and m.atoms[host].element == 1:
                hydrogens.append((host, "H1"))
            else:
                hydrogens.append((host, hydrogen_type(v, host, v.h[host] if host is not None else 0)))
            continue
        heavy.append(atom_type(v, i))
        if a.implicit_h:
            cls = hydrogen_type(v, i, v.h[i])
            hydrogens.extend([(i, cls)] * a.implicit_h)
    return heavy, hydrogens


def crippen_logp_mr(m: Molecule) -> tuple[float, float]:
    """Wildman-Crippen logP and molar refractivity (sum of atom-class terms)."""
    table = crippen_contributions()
    heavy, hydrogens = crippen_types(m)
    logp = mr = 0.0
    for cls in heavy:
        if cls is not None:
            lp, r = table[cls]
            logp += lp
            mr += r
    for _, cls in hydrogens:
        lp, r = table[cls]
        logp += lp
        mr += r
    return logp, mr
