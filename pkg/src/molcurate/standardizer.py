"""Structure standardization: bring equivalent inputs to one graph before dedup.

Steps, in the order they run:

1. ``valence``     every atom with a valence model sits at an allowed valence
2. ``kekulize``    aromatic input bonds get integer orders
3. ``hydrogens``   plain explicit hydrogen atoms fold into implicit counts
4. ``metals``      alkali/alkaline-earth/Zn bonds to N, O and halogens are cut
5. ``normalize``   fixed functional-group transforms, applied to a fixed point
6. ``reionize``    adjacent +/- pairs on N/O are neutralized where possible
7. ``aromaticity`` Hückel perception on the final Kekulé structure

A failing step raises :class:`StandardizationFailure` naming that step.
Salts are never stripped.
"""

from __future__ import annotations

from dataclasses import replace

from molcurate.molgraph import elements
from molcurate.molgraph.aromaticity import KekulizeError, kekulize, perceive_aromaticity
from molcurate.molgraph.graph import UNASSIGNED, Molecule

STEPS = ("valence", "kekulize", "hydrogens", "metals", "normalize", "reionize", "aromaticity")

DISCONNECTABLE_METALS = elements.ALKALI | elements.ALKALINE_EARTH | {30}
_METAL_PARTNERS = frozenset({7, 8}) | elements.HALOGENS


class StandardizationFailure(ValueError):
    def __init__(self, step: str, detail: str = ""):
        super().__init__(f"{step}: {detail}" if detail else step)
        self.step = step
        self.detail = detail


def atom_valence(m: Molecule, idx: int) -> int:
    """Total valence: bond orders + hydrogens, plus the pending pi bond of an
    unkekulized aromatic atom."""
    from molcurate.molgraph.aromaticity import needs_pi_bond

    a = m.atoms[idx]
    v = m.explicit_valence(idx) + a.implicit_h
    if a.aromatic and any(m.bonds[kb].order == UNASSIGNED for _, kb in m.adjacency[idx]):
        if needs_pi_bond(m, idx):
            v += 1
    return v


def valence_violations(m: Molecule) -> list[int]:
    """Atoms whose valence is outside the allowed table (unmodelled elements skipped)."""
    bad = []
    for i, a in enumerate(m.atoms):
        vals = elements.allowed_valences(a.element, a.charge)
        if vals is None:
            continue
        if atom_valence(m, i) not in vals:
            bad.append(i)
    return bad


def remove_hydrogens(m: Molecule) -> Molecule:
    """Fold neutral, unlabelled hydrogen atoms bonded to one heavy atom into H counts."""
    drop = set()
    gain = {}
    for i, a in enumerate(m.atoms):
        if a.element != 1 or a.charge or a.isotope or len(m.adjacency[i]) != 1:
            continue
        j, kb = m.adjacency[i][0]
        if m.atoms[j].element == 1 or m.bonds[kb].order != 1:
            continue
        drop.add(i)
        gain[j] = gain.get(j, 0) + 1
    if not drop:
        return m
    keep = [i for i in range(len(m.atoms)) if i not in drop]
    remap = {old: new for new, old in enumerate(keep)}
    atoms = []
    for old in keep:
        a = m.atoms[old]
        atoms.append(replace(a, implicit_h=a.implicit_h + gain[old]) if old in gain else a)
    bonds = [
        replace(b, begin=remap[b.begin], end=remap[b.end])
        for b in m.bonds
        if b.begin in remap and b.end in remap
    ]
    rings = [tuple(remap[i] for i in r) for r in m.rings]
    return Molecule(atoms, bonds, rings)


def disconnect_metals(m: Molecule) -> Molecule:
    """Cut bonds between group 1/2 metals (and Zn) and N, O or halogen atoms.

    Each cut bond moves one unit of charge: +1 on the metal, -1 on the partner.
    Atom count is unchanged; the fragment count may grow.
    """
    cut = []
    for k, b in enumerate(m.bonds):
        za, zb = m.atoms[b.begin].element, m.atoms[b.end].element
        if za in DISCONNECTABLE_METALS and zb in _METAL_PARTNERS:
            cut.append((k, b.begin, b.end))
        elif zb in DISCONNECTABLE_METALS and za in _METAL_PARTNERS:
            cut.append((k, b.end, b.begin))
    if not cut:
        return m
    delta = [0] * len(m.atoms)
    drop = set()
    for k, metal, partner in cut:
        order = m.bonds[k].order or 1
        delta[metal] += order
        delta[partner] -= order
        drop.add(k)
    atoms = [
        replace(a, charge=a.charge + delta[i]) if delta[i] else a for i, a in enumerate(m.atoms)
    ]
    bonds = [b for k, b in enumerate(m.bonds) if k not in drop]
    return Molecule.from_parts(atoms, bonds)


# ------------------------------------------------------------ normalization


class _Editable:
    """Mutable view used while applying transforms."""

    def __init__(self, m: Molecule):
        self.m = m
        self.atoms = list(m.atoms)
        self.bonds = list(m.bonds)

    def nbrs(self, i):
        for j, kb in self.m.adjacency[i]:
            yield j, kb, self.bonds[kb]

    def charge(self, i, delta):
        a = self.atoms[i]
        self.atoms[i] = replace(a, charge=a.charge + delta)

    def order(self, kb, new):
        self.bonds[kb] = replace(self.bonds[kb], order=new)

    def freeze(self) -> Molecule:
        return Molecule(self.atoms, self.bonds, self.m.rings)


def _terminal_o(e: _Editable, j: int) -> bool:
    return e.atoms[j].element == 8 and len(e.m.adjacency[j]) == 1 and e.atoms[j].implicit_h == 0


def _nitro(e: _Editable) -> bool:
    # N(=O)=O  ->  [N+](=O)[O-]
    for i, a in enumerate(e.atoms):
        if a.element != 7 or a.charge != 0:
            continue
        dbl_o = [(j, kb) for j, kb, b in e.nbrs(i)
                 if b.order == 2 and _terminal_o(e, j) and e.atoms[j].charge == 0]
        if len(dbl_o) >= 2:
            j, kb = dbl_o[-1]
            e.order(kb, 1)
            e.charge(i, +1)
            e.charge(j, -1)
            return True
    return False


def _n_oxide(e: _Editable) -> bool:
    # neutral N with =O and three other connections (incl. aromatic ring form) -> [N+][O-]
    for i, a in enumerate(e.atoms):
        if a.element != 7 or a.charge != 0:
            continue
        nb = list(e.nbrs(i))
        dbl_o = [(j, kb) for j, kb, b in nb
                 if b.order == 2 and _terminal_o(e, j) and e.atoms[j].charge == 0]
        if len(dbl_o) != 1:
            continue
        valence = sum(b.order for _, _, b in nb) + a.implicit_h
        if valence == 5:
            j, kb = dbl_o[0]
            e.order(kb, 1)
            e.charge(i, +1)
            e.charge(j, -1)
            return True
    return False


def _azide(e: _Editable) -> bool:
    # X-N=N#N  ->  X-N=[N+]=[N-]
    for i, a in enumerate(e.atoms):
        if a.element != 7 or a.charge != 0:
            continue
        nb = list(e.nbrs(i))
        dbl_n = [j for j, kb, b in nb if b.order == 2 and e.atoms[j].element == 7]
        tri_n = [(j, kb) for j, kb, b in nb
                 if b.order == 3 and e.atoms[j].element == 7 and len(e.m.adjacency[j]) == 1
                 and e.atoms[j].charge == 0]
        if dbl_n and tri_n:
            j, kb = tri_n[0]
            e.order(kb, 2)
            e.charge(i, +1)
            e.charge(j, -1)
            return True
    return False


def _diazo(e: _Editable) -> bool:
    # C=N#N  ->  C=[N+]=[N-]
    for i, a in enumerate(e.atoms):
        if a.element != 7 or a.charge != 0:
            continue
        nb = list(e.nbrs(i))
        dbl_c = [j for j, kb, b in nb if b.order == 2 and e.atoms[j].element == 6]
        tri_n = [(j, kb) for j, kb, b in nb
                 if b.order == 3 and e.atoms[j].element == 7 and len(e.m.adjacency[j]) == 1
                 and e.atoms[j].charge == 0]
        if dbl_c and tri_n:
            j, kb = tri_n[0]
            e.order(kb, 2)
            e.charge(i, +1)
            e.charge(j, -1)
            return True
    return False


def _oxide_to_double(e: _Editable, element: int) -> bool:
    # [X+]-[O-]  ->  X=O for hypervalent S (sulfoxide/sulfone) and P (phosphate)
    for i, a in enumerate(e.atoms):
        if a.element != element or a.charge <= 0:
            continue
        for j, kb, b in e.nbrs(i):
            if b.order == 1 and _terminal_o(e, j) and e.atoms[j].charge == -1:
                vals = elements.allowed_valences(element, a.charge - 1) or ()
                valence = sum(bb.order for _, _, bb in e.nbrs(i)) + a.implicit_h
                if valence + 1 in vals:
                    e.order(kb, 2)
                    e.charge(i, -1)
                    e.charge(j, +1)
                    return True
    return False


def _sulfoxide(e: _Editable) -> bool:
    return _oxide_to_double(e, 16)


def _phosphate(e: _Editable) -> bool:
    return _oxide_to_double(e, 15)


NORMALIZATIONS = (
    ("nitro", _nitro),
    ("azide", _azide),
    ("diazonium", _diazo),
    ("sulfoxide", _sulfoxide),
    ("n-oxide", _n_oxide),
    ("phosphate", _phosphate),
)


def normalize(m: Molecule, max_rounds: int = 1000) -> Molecule:
    """Apply the transform table until no transform fires."""
    e = _Editable(m)
    changed = False
    for _ in range(max_rounds):
        fired = False
        for _, fn in NORMALIZATIONS:
            if fn(e):
                fired = changed = True
                break
        if not fired:
            return e.freeze() if changed else m
    raise StandardizationFailure("normalize", "transforms did not reach a fixed point")


def reionize(m: Molecule) -> Molecule:
    """Neutralize bonded (+1, -1) pairs involving N or O when both neutral
    atoms reach their ordinary valence after the bond order goes up by one.

    Only the lowest neutral valence counts (N 3, O 2, S 2, ...), so the
    charge-separated nitro and N-oxide forms produced by :func:`normalize`
    are left alone.
    """
    e = _Editable(m)
    changed = False
    progress = True
    while progress:
        progress = False
        for kb, b in enumerate(e.bonds):
            a1, a2 = e.atoms[b.begin], e.atoms[b.end]
            if {a1.charge, a2.charge} != {1, -1}:
                continue
            if a1.element not in (7, 8) and a2.element not in (7, 8):
                continue
            if b.order not in (1, 2):
                continue
            ok = True
            for idx, at in ((b.begin, a1), (b.end, a2)):
                vals = elements.allowed_valences(at.element, 0)
                valence = sum(bb.order for _, _, bb in e.nbrs(idx)) + at.implicit_h + 1
                if not vals or valence != vals[0]:
                    ok = False
            if ok:
                e.order(kb, b.order + 1)
                e.charge(b.begin, -a1.charge)
                e.charge(b.end, -a2.charge)
                changed = progress = True
    return e.freeze() if changed else m


def standardize(m: Molecule) -> Molecule:
    """Run every standardization step; idempotent."""
    bad = valence_violations(m)
    if bad:
        a = m.atoms[bad[0]]
        raise StandardizationFailure(
            "valence", f"atom {bad[0]} ({a.symbol}, charge {a.charge}) has valence "
                       f"{atom_valence(m, bad[0])}")
    try:
        m = kekulize(m)
    except KekulizeError as exc:
        raise StandardizationFailure("kekulize", str(exc)) from None
    m = remove_hydrogens(m)
    m = disconnect_metals(m)
    m = normalize(m)
    m = reionize(m)
    m = perceive_aromaticity(m)
    bad = valence_violations(m)
    if bad:
        raise StandardizationFailure("valence", f"atom {bad[0]} left at a disallowed valence")
    return m
