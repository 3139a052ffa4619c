"""SMILES reader and writer.

Supported: the organic subset (B C N O P S F Cl Br I and aromatic b c n o p s),
bracket atoms with isotope, aromatic se/as/te, chirality, hydrogen count,
charge and atom class, ring closures (``1``-``9``, ``%nn``, ``%(nnn)``),
branches and dot-disconnected fragments. Chirality (``@``) and directional
bonds (``/``, ``\\``) are kept as annotations only.
"""

from __future__ import annotations

from molcurate.molgraph import elements
from molcurate.molgraph.graph import UNASSIGNED, Atom, Bond, Molecule
from molcurate.molgraph.rings import ring_bond_flags


class SmilesError(ValueError):
    """Malformed SMILES; ``offset`` is the byte offset of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.reason = message
        self.offset = offset


_BOND_SYMBOLS = {"-": 1, "=": 2, "#": 3, ":": "ar", "/": 1, "\\": 1}
_ORGANIC_TWO = {"Cl", "Br"}
_ORGANIC_ONE = set("BCNOPSFI")


def implied_hydrogens(element: int, aromatic: bool, bond_sum: int) -> int | None:
    """Implicit H count an organic-subset atom receives, or None if impossible.

    ``bond_sum`` counts aromatic bonds as 1. An aromatic atom whose smallest
    fitting valence leaves room reserves one unit for its pi bond.
    """
    vals = elements.ORGANIC_SUBSET.get(elements.SYMBOLS[element])
    if vals is None:
        return None
    for target in vals:
        if target >= bond_sum:
            spare = target - bond_sum
            if aromatic and spare:
                spare -= 1
            return spare
    return None


def _byte_offset(text: str, i: int) -> int:
    return len(text[:i].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.atoms: list[dict] = []
        # [begin, end, order-or-None-or-"ar", stereo, offset]
        self.bonds: list[list] = []
        self.pairs: set[tuple[int, int]] = set()

    def fail(self, message: str, i: int):
        raise SmilesError(message, _byte_offset(self.text, i))

    def add_bond(self, a, b, sym, offset):
        pair = (a, b) if a < b else (b, a)
        if a == b:
            self.fail("ring closure to the same atom", offset)
        if pair in self.pairs:
            self.fail("duplicate bond", offset)
        self.pairs.add(pair)
        if sym is None:
            order, stereo = None, None
        else:
            if sym == "$":
                self.fail("quadruple bonds are not supported", offset)
            order = _BOND_SYMBOLS[sym]
            stereo = sym if sym in "/\\" else None
        self.bonds.append([a, b, order, stereo, offset])

    def parse(self) -> Molecule:
        text = self.text
        n = len(text)
        prev = None
        branches: list[tuple[int, int, int]] = []  # (atom, offset, atoms-before)
        pending = None  # (symbol, offset)
        rings: dict[int, tuple[int, str | None, int]] = {}
        i = 0
        while i < n:
            ch = text[i]
            if ch == "(":
                if prev is None:
                    self.fail("branch without a preceding atom", i)
                if pending is not None:
                    self.fail("bond before branch", pending[1])
                branches.append((prev, i, len(self.atoms)))
                i += 1
            elif ch == ")":
                if not branches:
                    self.fail("unbalanced ')'", i)
                if pending is not None:
                    self.fail("dangling bond", pending[1])
                atom, off, before = branches.pop()
                if len(self.atoms) == before:
                    self.fail("empty branch", off)
                prev = atom
                i += 1
            elif ch == ".":
                if pending is not None:
                    self.fail("dangling bond", pending[1])
                if branches:
                    self.fail("'.' inside a branch", i)
                prev = None
                i += 1
            elif ch in _BOND_SYMBOLS or ch == "$":
                if prev is None:
                    self.fail("bond without a preceding atom", i)
                if pending is not None:
                    self.fail("consecutive bond symbols", i)
                pending = (ch, i)
                i += 1
            elif ch.isdigit() or ch == "%":
                if prev is None:
                    self.fail("ring closure without a preceding atom", i)
                start = i
                if ch == "%":
                    if i + 1 < n and text[i + 1] == "(":
                        close = text.find(")", i + 2)
                        digits = text[i + 2:close] if close != -1 else ""
                        if not digits.isdigit():
                            self.fail("bad ring-closure number", i)
                        num = int(digits)
                        i = close + 1
                    else:
                        digits = text[i + 1:i + 3]
                        if len(digits) != 2 or not digits.isdigit():
                            self.fail("bad ring-closure number", i)
                        num = int(digits)
                        i += 3
                else:
                    num = int(ch)
                    i += 1
                sym = pending[0] if pending else None
                if num in rings:
                    other, osym, ooff = rings.pop(num)
                    if sym is not None and osym is not None and sym != osym:
                        if not (sym in "/\\" and osym in "/\\"):
                            self.fail("ring-closure bond mismatch", start)
                    self.add_bond(other, prev, sym if sym is not None else osym, start)
                else:
                    rings[num] = (prev, sym, start)
                pending = None
            elif ch == "[":
                close = text.find("]", i + 1)
                if close == -1:
                    self.fail("unclosed '['", i)
                spec = self._bracket(text[i + 1:close], i)
                prev = self._add_atom(spec, prev, pending)
                pending = None
                i = close + 1
            elif text.startswith(("Cl", "Br"), i):
                prev = self._add_atom(self._organic(text[i:i + 2], False, i), prev, pending)
                pending = None
                i += 2
            elif ch in _ORGANIC_ONE:
                prev = self._add_atom(self._organic(ch, False, i), prev, pending)
                pending = None
                i += 1
            elif ch in elements.AROMATIC_ORGANIC:
                prev = self._add_atom(
                    self._organic(elements.AROMATIC_ORGANIC[ch], True, i), prev, pending
                )
                pending = None
                i += 1
            elif ch == "*":
                prev = self._add_atom(
                    dict(element=0, charge=0, isotope=0, hcount=0, aromatic=False,
                         chirality=None, offset=i), prev, pending)
                pending = None
                i += 1
            elif ch.isalpha():
                self.fail(f"unknown element symbol {ch!r}", i)
            else:
                self.fail(f"unexpected character {ch!r}", i)
        if pending is not None:
            self.fail("dangling bond", pending[1])
        if branches:
            self.fail("unclosed branch", branches[-1][1])
        if rings:
            self.fail("unclosed ring", min(off for _, _, off in rings.values()))
        if not self.atoms:
            self.fail("no atoms", 0)
        return self._build()

    def _organic(self, sym, aromatic, offset):
        return dict(element=elements.ATOMIC_NUMBER[sym], charge=0, isotope=0, hcount=None,
                    aromatic=aromatic, chirality=None, offset=offset)

    def _add_atom(self, spec, prev, pending):
        idx = len(self.atoms)
        self.atoms.append(spec)
        if prev is not None:
            sym, off = pending if pending else (None, spec["offset"])
            self.add_bond(prev, idx, sym, off)
        return idx

    def _bracket(self, body: str, start: int) -> dict:
        pos = 0
        off = start + 1
        isotope = 0
        while pos < len(body) and body[pos].isdigit():
            pos += 1
        if pos:
            isotope = int(body[:pos])
        rest = body[pos:]
        aromatic = False
        sym = None
        for cand in ("se", "as", "te"):
            if rest.startswith(cand):
                sym, aromatic = cand.capitalize(), True
                break
        if sym is None:
            if rest[:1] in ("b", "c", "n", "o", "p", "s"):
                sym, aromatic = rest[0].upper(), True
            elif rest[:1] == "*":
                sym = "*"
            elif rest[:2] in elements.ATOMIC_NUMBER and len(rest) >= 2 and rest[1].islower():
                sym = rest[:2]
            elif rest[:1] in elements.ATOMIC_NUMBER and rest[:1].isupper():
                sym = rest[:1]
            else:
                self.fail("unknown element symbol", off + pos)
        pos += len(sym)
        chirality = None
        if body[pos:pos + 1] == "@":
            j = pos + 1
            if body[j:j + 1] == "@":
                j += 1
            elif body[j:j + 2] in ("TH", "AL", "SP", "TB", "OH"):
                j += 2
                while j < len(body) and body[j].isdigit():
                    j += 1
            chirality = body[pos:j]
            pos = j
        hcount = 0
        if body[pos:pos + 1] == "H":
            pos += 1
            j = pos
            while j < len(body) and body[j].isdigit():
                j += 1
            hcount = int(body[pos:j]) if j > pos else 1
            pos = j
        charge = 0
        if body[pos:pos + 1] in ("+", "-"):
            sign = 1 if body[pos] == "+" else -1
            j = pos + 1
            if j < len(body) and body[j].isdigit():
                k = j
                while k < len(body) and body[k].isdigit():
                    k += 1
                charge = sign * int(body[j:k])
                j = k
            else:
                charge = sign
                while j < len(body) and body[j] == body[pos]:
                    charge += sign
                    j += 1
            pos = j
        if body[pos:pos + 1] == ":":
            j = pos + 1
            while j < len(body) and body[j].isdigit():
                j += 1
            if j == pos + 1:
                self.fail("bad atom class", off + pos)
            pos = j
        if pos != len(body):
            self.fail("malformed bracket atom", off + pos)
        return dict(element=0 if sym == "*" else elements.ATOMIC_NUMBER[sym],
                    charge=charge, isotope=isotope, hcount=hcount, aromatic=aromatic,
                    chirality=chirality, offset=start)

    def _build(self) -> Molecule:
        n = len(self.atoms)
        edges = [(b[0], b[1]) for b in self.bonds]
        cyclic = ring_bond_flags(n, edges)
        atom_in_ring = [False] * n
        for k, (a, b) in enumerate(edges):
            if cyclic[k]:
                atom_in_ring[a] = atom_in_ring[b] = True
        bonds = []
        for k, (a, b, order, stereo, off) in enumerate(self.bonds):
            both_arom = self.atoms[a]["aromatic"] and self.atoms[b]["aromatic"]
            if order == "ar":
                if not cyclic[k]:
                    self.fail("aromatic bond outside a ring", off)
                aromatic = True
            elif order is None:
                aromatic = both_arom and cyclic[k]
            else:
                aromatic = False
            bonds.append(Bond(a, b, UNASSIGNED if aromatic else (order or 1),
                              aromatic, cyclic[k], stereo))
        bond_sum = [0] * n
        for bd in bonds:
            w = bd.order or 1
            bond_sum[bd.begin] += w
            bond_sum[bd.end] += w
        atoms = []
        for i, spec in enumerate(self.atoms):
            if spec["aromatic"] and not atom_in_ring[i]:
                self.fail("aromatic atom outside a ring", spec["offset"])
            h = spec["hcount"]
            if h is None:
                h = implied_hydrogens(spec["element"], spec["aromatic"], bond_sum[i])
                if h is None:
                    self.fail("valence impossible to satisfy", spec["offset"])
            atoms.append(Atom(spec["element"], spec["charge"], spec["isotope"], h,
                              spec["aromatic"], atom_in_ring[i], spec["chirality"]))
        return Molecule.from_parts(atoms, bonds, cyclic=cyclic)


def parse_smiles(text: str) -> Molecule:
    """Parse a SMILES string into a :class:`Molecule` with perceived rings.

    >>> m = parse_smiles("c1ccccc1")
    >>> [a.implicit_h for a in m.atoms]
    [1, 1, 1, 1, 1, 1]
    """
    if not isinstance(text, str):
        raise TypeError("SMILES must be a str")
    if not text:
        raise SmilesError("empty SMILES", 0)
    return _Parser(text).parse()


# ---------------------------------------------------------------- writer


def _atom_text(m: Molecule, i: int, bond_sum: int) -> str:
    a = m.atoms[i]
    if a.element == 0:
        base = "*"
        if a.charge == 0 and a.isotope == 0 and a.implicit_h == 0:
            return base
    sym = elements.SYMBOLS[a.element]
    if (
        sym in elements.ORGANIC_SUBSET
        and a.charge == 0
        and a.isotope == 0
        and (not a.aromatic or sym.lower() in elements.AROMATIC_ORGANIC)
        and implied_hydrogens(a.element, a.aromatic, bond_sum) == a.implicit_h
    ):
        return sym.lower() if a.aromatic else sym
    text = ["["]
    if a.isotope:
        text.append(str(a.isotope))
    text.append(sym.lower() if a.aromatic else sym)
    if a.implicit_h == 1:
        text.append("H")
    elif a.implicit_h > 1:
        text.append(f"H{a.implicit_h}")
    if a.charge:
        sign = "+" if a.charge > 0 else "-"
        text.append(sign if abs(a.charge) == 1 else f"{sign}{abs(a.charge)}")
    text.append("]")
    return "".join(text)


def _bond_text(m: Molecule, bond: Bond) -> str:
    both_arom = m.atoms[bond.begin].aromatic and m.atoms[bond.end].aromatic
    if bond.aromatic:
        return "" if both_arom else ":"
    if bond.order == 1:
        return "-" if both_arom else ""
    return {2: "=", 3: "#"}[bond.order]


def write_smiles(m: Molecule, ranks=None) -> str:
    """Write ``m`` as SMILES, visiting atoms in ``ranks`` order (default: index).

    Aromatic atoms are written lowercase and hydrogens are bracketed only when
    the organic-subset rules would infer a different count, so the output
    parses back to the same graph.
    """
    n = len(m.atoms)
    if ranks is None:
        ranks = list(range(n))
    adj = m.adjacency
    bonds = m.bonds
    nbr_sorted = [sorted(adj[i], key=lambda x: ranks[x[0]]) for i in range(n)]
    bond_sum = [0] * n
    for bd in bonds:
        w = 1 if bd.aromatic else bd.order
        bond_sum[bd.begin] += w
        bond_sum[bd.end] += w

    # pass 1: DFS spanning forest and ring-closure bonds
    visit = [-1] * n
    children: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    closures: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    roots = []
    counter = 0
    for root in sorted(range(n), key=lambda x: ranks[x]):
        if visit[root] != -1:
            continue
        roots.append(root)
        visit[root] = counter
        counter += 1
        stack = [(root, -1, 0)]
        while stack:
            v, pbond, pos = stack[-1]
            nbrs = nbr_sorted[v]
            if pos == len(nbrs):
                stack.pop()
                continue
            stack[-1] = (v, pbond, pos + 1)
            w, kb = nbrs[pos]
            if kb == pbond:
                continue
            if visit[w] == -1:
                visit[w] = counter
                counter += 1
                children[v].append((w, kb))
                stack.append((w, kb, 0))
            elif visit[w] < visit[v]:
                closures[v].append((w, kb))
                closures[w].append((v, kb))

    # pass 2: emit
    out: list[str] = []
    digits: dict[int, int] = {}
    free: list[int] = []
    next_digit = [1]

    def take_digit():
        if free:
            free.sort()
            return free.pop(0)
        d = next_digit[0]
        next_digit[0] += 1
        return d

    def digit_text(d):
        return str(d) if d < 10 else (f"%{d}" if d < 100 else f"%({d})")

    for r_i, root in enumerate(roots):
        if r_i:
            out.append(".")
        stack: list = [("atom", root, "")]
        while stack:
            item = stack.pop()
            if item[0] == "text":
                out.append(item[1])
                continue
            _, v, btxt = item
            out.append(btxt)
            out.append(_atom_text(m, v, bond_sum[v]))
            for w, kb in sorted(closures[v], key=lambda x: visit[x[0]]):
                if kb in digits:
                    d = digits.pop(kb)
                    out.append(digit_text(d))
                    free.append(d)
                else:
                    d = take_digit()
                    digits[kb] = d
                    out.append(_bond_text(m, bonds[kb]) + digit_text(d))
            kids = children[v]
            for idx in range(len(kids) - 1, -1, -1):
                w, kb = kids[idx]
                if idx == len(kids) - 1:
                    stack.append(("atom", w, _bond_text(m, bonds[kb])))
                else:
                    stack.append(("text", ")"))
                    stack.append(("atom", w, _bond_text(m, bonds[kb])))
                    stack.append(("text", "("))
    return "".join(out)
