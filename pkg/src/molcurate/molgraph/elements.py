"""Periodic-table facts used by the parser, the valence checks and the descriptors."""

from __future__ import annotations

SYMBOLS = (
    "*",
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr",
    "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn",
    "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb",
    "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm",
    "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds",
    "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
)

ATOMIC_NUMBER = {sym: z for z, sym in enumerate(SYMBOLS)}

H, B, C, N, O, F, P, S, CL, BR, I = 1, 5, 6, 7, 8, 9, 15, 16, 17, 35, 53

# SMILES organic subset: symbol -> default valences.
ORGANIC_SUBSET = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}
AROMATIC_ORGANIC = {"b": "B", "c": "C", "n": "N", "o": "O", "p": "P", "s": "S"}
AROMATIC_BRACKET = {"b", "c", "n", "o", "p", "s", "se", "as", "te"}

# Allowed valences of neutral atoms. Charged atoms use the row of the
# isoelectronic element (N+ behaves like C, O- like F, ...).
_NEUTRAL_VALENCES = {
    0: (0,),
    1: (1,),
    2: (0,),
    5: (3,),
    6: (4,),
    7: (3, 5),
    8: (2,),
    9: (1,),
    10: (0,),
    13: (3,),
    14: (4,),
    15: (3, 5),
    16: (2, 4, 6),
    17: (1, 3, 5, 7),
    18: (0,),
    32: (4,),
    33: (3, 5),
    34: (2, 4, 6),
    35: (1, 3, 5, 7),
    36: (0,),
    51: (3, 5),
    52: (2, 4, 6),
    53: (1, 3, 5, 7),
    54: (0, 2, 4, 6),
    86: (0,),
}
# Isoelectronic shifts are only meaningful for the p-block rows listed here.
_SHIFTABLE = {1, 5, 6, 7, 8, 9, 14, 15, 16, 17, 32, 33, 34, 35, 51, 52, 53}

ALKALI = frozenset({3, 11, 19, 37, 55, 87})
ALKALINE_EARTH = frozenset({4, 12, 20, 38, 56, 88})
HALOGENS = frozenset({9, 17, 35, 53, 85})
METALLOIDS = frozenset({5, 14, 32, 33, 51, 52})
NONMETALS = frozenset({1, 6, 7, 8, 15, 16, 34}) | HALOGENS
NOBLE_GASES = frozenset({2, 10, 18, 36, 54, 86, 118})
METALS = frozenset(
    z for z in range(1, len(SYMBOLS))
    if z not in NONMETALS and z not in METALLOIDS and z not in NOBLE_GASES
    and z not in {117}
)


def allowed_valences(z: int, charge: int = 0) -> tuple[int, ...] | None:
    """Allowed total valences (bond orders + H) for element ``z`` at ``charge``.

    Returns None for elements without a valence model (metals and most of the
    d/f block); callers skip valence enforcement for those.
    """
    if charge == 0:
        return _NEUTRAL_VALENCES.get(z)
    if z not in _SHIFTABLE:
        return None
    shifted = z - charge
    if shifted < 0:
        return None
    if shifted == 0:
        return (0,)
    vals = _NEUTRAL_VALENCES.get(shifted)
    if vals is None:
        return None
    # second-row atoms cannot expand their octet, whatever the shifted row allows
    if z <= 10:
        return vals[:1]
    return vals


def symbol(z: int) -> str:
    return SYMBOLS[z]
